#include "doctest.h"
#include "oracles.hpp"

#include <numeric>

#include "chansim/decomposer.hpp"
#include "chansim/local_search.hpp"

using namespace chansim;

namespace {

ComplexMatrix eta_projector(int d) {
  ComplexVector eta = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) eta(i * d + i) = 1.0;
  return eta * eta.adjoint();
}

ChoiState unitary_choi(int d, RandomStream& rng) { return kraus_to_choi(KrausChannel(d, {haar_unitary(d, rng)})); }

}  // namespace

TEST_SUITE("decomposer") {
  TEST_CASE("softmax") {
    const std::vector<double> l{0.3, -1.2, 2.0};
    const auto p = softmax(l);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    double z = 0.0;
    for (double v : l) z += std::exp(v);
    for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(std::exp(l[i]) / z).epsilon(1e-14));
    const auto big = softmax(std::vector<double>{1000.0, 999.0});
    CHECK(std::isfinite(big[0]));
    CHECK(big[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
  }

  TEST_CASE("parameter layout") {
    for (int d = 2; d <= 4; ++d) {
      // d components plus d logits, less the one redundant logit direction.
      CHECK(DecompositionParams::flat_size(d, d) - 1 == static_cast<std::size_t>(parameter_count(d)));
      RandomStream rng(static_cast<std::uint64_t>(d));
      const DecompositionParams p = DecompositionParams::random(d, d, rng);
      const auto f = p.flat();
      CHECK(f.size() == DecompositionParams::flat_size(d, d));
      CHECK(DecompositionParams::from_flat(d, d, f).flat() == f);
      const auto probs = p.probabilities();
      CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
      for (double v : probs) CHECK((v > 0.0 && v < 1.0));
    }
  }

  TEST_CASE("mixture_choi") {
    DecompositionParams id = DecompositionParams::identity(3, 3);
    id.logits = {0.4, -2.0, 1.1};
    CHECK(oracle::max_abs(mixture_choi(id).matrix() - eta_projector(3)) <= 1e-14);

    RandomStream rng(7);
    DecompositionParams p = DecompositionParams::random(2, 2, rng);
    p.logits = {30.0, 0.0};
    CHECK(oracle::max_abs(mixture_choi(p).matrix() - extreme_choi(p.components[0]).matrix()) <= 1e-10);
  }

  TEST_CASE("objective") {
    RandomStream rng(8);
    const DecompositionParams p = DecompositionParams::random(3, 3, rng);
    CHECK(objective(mixture_choi(p), p) <= 1e-12);
    CHECK(objective(ChoiState(2, eta_projector(2)), DecompositionParams::identity(2, 2)) <= 1e-14);
    // Completely depolarizing qubit channel, Choi = 1/2.
    const ChoiState depol(2, ComplexMatrix::Identity(4, 4) * 0.5);
    CHECK(objective(depol, DecompositionParams::identity(2, 2)) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(oracle::trace_distance(eta_projector(2), depol.matrix()) == doctest::Approx(1.5).epsilon(1e-12));

    const ChoiState target = kraus_to_choi(random_channel(3, 0, rng));
    MixtureObjective fast(target, 3);
    CHECK(fast(p.flat()) == doctest::Approx(objective(target, p)).epsilon(1e-12));
    CHECK_THROWS_AS(objective(target, DecompositionParams::identity(2, 2)), std::invalid_argument);
  }

  TEST_CASE("objective is convex in the probabilities") {
    RandomStream rng(9);
    for (int t = 0; t < 20; ++t) {
      const int d = 2 + t % 2;
      const ChoiState target = kraus_to_choi(random_channel(d, 0, rng));
      DecompositionParams a = DecompositionParams::random(d, d, rng);
      DecompositionParams b = a;
      for (auto& l : b.logits) l = rng.normal();
      const double lam = rng.uniform();
      const auto pa = a.probabilities(), pb = b.probabilities();
      DecompositionParams mid = a;
      for (std::size_t i = 0; i < mid.logits.size(); ++i) mid.logits[i] = std::log(lam * pa[i] + (1 - lam) * pb[i]);
      CHECK(objective(target, mid) <= lam * objective(target, a) + (1 - lam) * objective(target, b) + 1e-12);
    }
  }

  TEST_CASE("analytic subgradient matches central differences") {
    RandomStream rng(10);
    for (int d = 2; d <= 4; ++d) {
      const ChoiState target = kraus_to_choi(random_channel(d, 0, rng));
      const DecompositionParams p = DecompositionParams::random(d, d, rng);
      MixtureGradient mg(target, d);
      MixtureObjective f(target, d);
      std::vector<double> x = p.flat(), g(x.size());
      const double v = mg(x, g);
      CHECK(v == doctest::Approx(objective(target, p)).epsilon(1e-12));
      const double h = 1e-6;
      double worst = 0.0;
      for (std::size_t i = 0; i < x.size(); i += 3) {
        std::vector<double> up = x, dn = x;
        up[i] += h;
        dn[i] -= h;
        worst = std::max(worst, std::abs((f(up) - f(dn)) / (2 * h) - g[i]));
      }
      CHECK(worst <= 1e-6);
    }
  }

  TEST_CASE("local solvers minimize a smooth test function") {
    // Rosenbrock in 2D.
    auto rb = [](std::span<const double> x) {
      return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    NelderMeadOptions nm;
    nm.max_iters = 5000;
    const auto r1 = nelder_mead(rb, std::vector<double>{-1.2, 1.0}, nm, true);
    CHECK(r1.best_trace.size() == static_cast<std::size_t>(r1.iters) + 1);
    CHECK(r1.f <= 1e-8);
    CHECK(r1.x[0] == doctest::Approx(1.0).epsilon(1e-3));

    auto quad = [](std::span<const double> x, std::span<double> g) {
      double f = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = static_cast<double>(i + 1);
        f += c * (x[i] - 1) * (x[i] - 1);
        g[i] = 2 * c * (x[i] - 1);
      }
      return f;
    };
    AdamOptions ad;
    ad.max_iters = 3000;
    ad.learning_rate = 0.05;
    const auto r2 = adam_descent(quad, std::vector<double>{0.0, 3.0, -2.0}, ad, true);
    CHECK(r2.f <= 1e-6);
    CHECK(r2.best_trace.size() == static_cast<std::size_t>(r2.iters) + 1);
    CHECK(std::is_sorted(r2.best_trace.rbegin(), r2.best_trace.rend()));
  }

  TEST_CASE("optimizer config") {
    CHECK(OptimizerConfig::defaults_for(2).max_restarts == 20);
    CHECK(OptimizerConfig::defaults_for(2).max_iters_per_restart == 2000);
    CHECK(OptimizerConfig::defaults_for(3).max_restarts == 60);
    CHECK(OptimizerConfig::defaults_for(3).max_iters_per_restart == 5000);
    CHECK(OptimizerConfig::defaults_for(4).max_restarts == 100);
    CHECK(OptimizerConfig::defaults_for(4).max_iters_per_restart == 10000);
    OptimizerConfig c;
    c.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = OptimizerConfig{};
    c.max_restarts = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = OptimizerConfig{};
    c.learning_rate = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(local_solver_from_name("simplex") == LocalSolver::simplex);
    CHECK(local_solver_name(LocalSolver::adam) == "adam");
    CHECK_THROWS_AS(local_solver_from_name("bfgs"), std::invalid_argument);
  }

  TEST_CASE("recovers a known qubit mixture") {
    RandomStream rng(11);
    const DecompositionParams truth = DecompositionParams::random(2, 2, rng);
    OptimizerConfig cfg = OptimizerConfig::defaults_for(2);
    cfg.seed = 1;
    const DecompositionResult r = optimize(mixture_choi(truth), cfg);
    CHECK(r.achieved_dt <= 1e-3);
    CHECK(r.converged);
    CHECK(r.achieved_dt == doctest::Approx(objective(mixture_choi(truth), r.params)).epsilon(1e-9));
    CHECK(r.diamond_bound == doctest::Approx(2 * r.achieved_dt));
  }

  TEST_CASE("unitary qubit channels are recovered within a few restarts") {
    RandomStream rng(12);
    for (int t = 0; t < 3; ++t) {
      OptimizerConfig cfg = OptimizerConfig::defaults_for(2);
      cfg.max_restarts = 4;
      cfg.seed = static_cast<std::uint64_t>(t);
      CHECK(optimize(unitary_choi(2, rng), cfg).achieved_dt <= 1e-4);
    }
  }

  TEST_CASE("simplex solver still converges on an easy target") {
    RandomStream rng(13);
    OptimizerConfig cfg = OptimizerConfig::defaults_for(2);
    cfg.solver = LocalSolver::simplex;
    cfg.max_restarts = 5;
    CHECK(optimize(unitary_choi(2, rng), cfg).achieved_dt <= 1e-3);
  }

  TEST_CASE("determinism, thread invariance and early stop") {
    RandomStream rng(14);
    const ChoiState target = kraus_to_choi(random_channel(2, 0, rng));
    OptimizerConfig cfg = OptimizerConfig::defaults_for(2);
    cfg.max_restarts = 6;
    cfg.max_iters_per_restart = 300;
    cfg.seed = 42;
    cfg.threads = 1;
    const DecompositionResult a = optimize(target, cfg);
    const DecompositionResult b = optimize(target, cfg);
    CHECK(a.params.flat() == b.params.flat());
    cfg.threads = 3;
    const DecompositionResult c = optimize(target, cfg);
    CHECK(a.params.flat() == c.params.flat());
    CHECK(a.best_restart == c.best_restart);
    REQUIRE(a.restarts.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(a.restarts[i].best == c.restarts[i].best);
    double lowest = a.restarts[0].best;
    for (const auto& o : a.restarts) lowest = std::min(lowest, o.best);
    CHECK(a.achieved_dt == lowest);

    cfg.threads = 1;
    cfg.epsilon = 1.0;  // anything below 0.5 counts
    cfg.stop_when_converged = true;
    const DecompositionResult e = optimize(target, cfg);
    CHECK(e.converged);
    CHECK(e.restarts_used == 1);
  }

  TEST_CASE("decompose report") {
    RandomStream rng(15);
    const ChoiState target = kraus_to_choi(random_channel(2, 0, rng));
    OptimizerConfig cfg = OptimizerConfig::defaults_for(2);
    cfg.max_restarts = 5;
    const DecompositionResult r = optimize(target, cfg);
    const DecompositionReport rep = decompose_report(r, target);
    REQUIRE(rep.components.size() == 2);
    double total = 0.0;
    for (const auto& c : rep.components) {
      total += c.probability;
      CHECK(c.certificate.is_genext);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.diamond_bound == 2 * rep.achieved_dt);
    CHECK(rep.distinguishing_probability == doctest::Approx(0.5 * (1 + rep.achieved_dt)));
    CHECK(rep.converged == r.converged);
    CHECK(rep.blockwise_residual <= 2 * rep.achieved_dt + 1e-12);
  }
}
