#include "doctest.h"
#include "oracles.hpp"

#include "chansim/circuit.hpp"
#include "chansim/extreme.hpp"

using namespace chansim;

namespace {

CircuitDescription from_gates(int d, std::vector<GateOp> gates) {
  CircuitDescription c;
  c.dim = d;
  c.gates = std::move(gates);
  return c;
}

// Columns with the ancilla in |0>, reshaped into the d Kraus blocks <i|_a U |0>_a.
std::vector<ComplexMatrix> ancilla_zero_blocks(const ComplexMatrix& u, int d) {
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix k(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) k(r, c) = u(r * d + i, c * d);
    }
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace

TEST_SUITE("circuit-synth") {
  TEST_CASE("empty circuit and the identity parameters") {
    for (int d = 2; d <= 4; ++d) {
      const CircuitDescription empty = from_gates(d, {});
      CHECK(oracle::max_abs(circuit_unitary(empty) - ComplexMatrix::Identity(d * d, d * d)) == 0.0);
      const GateCensus n = gate_counts(empty);
      CHECK(n.givens_class() + n.controlled_swaps() + n.diagonal_phase + n.two_level_swap == 0);

      // With no rotation the ancilla stays in |0> and the shift chain never fires.
      const ComplexMatrix u = circuit_unitary(synthesize(ExtremeParams::identity(d)));
      const auto blocks = ancilla_zero_blocks(u, d);
      CHECK(oracle::max_abs(blocks[0] - ComplexMatrix::Identity(d, d)) <= 1e-12);
      for (int i = 1; i < d; ++i) CHECK(oracle::max_abs(blocks[static_cast<std::size_t>(i)]) <= 1e-12);
      ComplexMatrix shifts = ComplexMatrix::Identity(d * d, d * d);
      for (int i = d - 1; i >= 1; --i) shifts = shifts * oracle::controlled_shift(d, i);
      CHECK(oracle::max_abs(u - shifts) <= 1e-12);
    }
  }

  TEST_CASE("single controlled rotation") {
    RandomStream rng(1);
    for (int t = 0; t < 20; ++t) {
      const int d = 2 + t % 4;
      const int j = static_cast<int>(rng.uniform() * d);
      const int k = (j + 1 + static_cast<int>(rng.uniform() * (d - 1))) % d;
      const double th = rng.uniform(-kPi, kPi);
      GateOp g;
      g.kind = GateKind::controlled_givens;
      g.target = Wire::ancilla;
      g.j = j;
      g.k = k;
      g.angle = th;
      g.controls = {j};
      const ComplexMatrix expect = oracle::controlled_on_system(d, j, oracle::rotation(d, j, k, th));
      CHECK(oracle::max_abs(circuit_unitary(from_gates(d, {g})) - expect) <= 1e-14);
    }
  }

  TEST_CASE("multiplexer pattern equals the pair of controlled rotations") {
    RandomStream rng(2);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const int d = 2 + t % 5;
      int j = 1 + static_cast<int>(rng.uniform() * (d - 1));
      int k = static_cast<int>(rng.uniform() * j);
      const double a = rng.uniform(-kPi, kPi), b = rng.uniform(-kPi, kPi);
      const ComplexMatrix mux = circuit_unitary(from_gates(d, multiplexer_gates(j, k, a, b)));
      const ComplexMatrix expect = oracle::controlled_on_system(d, j, oracle::rotation(d, j, k, a)) *
                                   oracle::controlled_on_system(d, k, oracle::rotation(d, k, j, -b));
      worst = std::max(worst, oracle::max_abs(mux - expect));
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("shift chain identity") {
    for (int d = 2; d <= 6; ++d) {
      ComplexMatrix expect = ComplexMatrix::Identity(d * d, d * d);
      for (int i = d - 1; i >= 1; --i) expect = expect * oracle::controlled_shift(d, i);
      const CircuitDescription c = from_gates(d, shift_chain_gates(d));
      CHECK(oracle::max_abs(circuit_unitary(c) - expect) == 0.0);
      for (const auto& g : c.gates) CHECK(g.kind == GateKind::classically_controlled_swap);

      for (int i = 1; i < d; ++i) {
        ComplexMatrix p = ComplexMatrix::Identity(d, d);
        for (const auto& [a, b] : shift_transpositions(d, i)) {
          ComplexMatrix s = ComplexMatrix::Identity(d, d);
          s(a, a) = s(b, b) = 0.0;
          s(a, b) = s(b, a) = 1.0;
          p = s * p;
        }
        CHECK(oracle::max_abs(p - weyl_x(d, i)) == 0.0);
      }
    }
    // d = 3: each nonzero shift is a 3-cycle, two transpositions apiece.
    CHECK(shift_transpositions(3, 1).size() == 2);
    CHECK(shift_transpositions(3, 2).size() == 2);
  }

  TEST_CASE("synthesis soundness") {
    RandomStream rng(3);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int d = 2 + t % 4;
      const ExtremeParams p = ExtremeParams::random(d, rng);
      const CircuitDescription c = synthesize(p);
      CHECK_NOTHROW(c.validate());
      const auto blocks = ancilla_zero_blocks(circuit_unitary(c), d);
      const auto kraus = extreme_kraus(p).kraus_ops();
      for (int i = 0; i < d; ++i) {
        worst = std::max(worst, oracle::max_abs(blocks[static_cast<std::size_t>(i)] - kraus[static_cast<std::size_t>(i)]));
      }
      // Same channel, checked on the Choi matrix with the element-wise oracle.
      CHECK(oracle::max_abs(oracle::choi_elementwise(blocks) - extreme_choi(p).matrix()) <= 1e-9);
    }
    CHECK(worst <= 1e-10);

    // With V = W = 1 the ancilla blocks are the bare F operators.
    ExtremeParams q = ExtremeParams::random(2, rng);
    const ExtremeParams id = ExtremeParams::identity(2);
    q.prior = id.prior;
    q.posterior = id.posterior;
    const auto blocks = ancilla_zero_blocks(circuit_unitary(synthesize(q)), 2);
    const auto fs = f_operators(q);
    for (int i = 0; i < 2; ++i) CHECK(oracle::max_abs(blocks[static_cast<std::size_t>(i)] - fs[static_cast<std::size_t>(i)]) <= 1e-10);
  }

  TEST_CASE("gate census") {
    const int givens[] = {0, 0, 5, 15, 30, 50};
    const int swaps[] = {0, 0, 3, 10, 20, 36};
    RandomStream rng(4);
    for (int d = 2; d <= 5; ++d) {
      const GateCensus n = gate_counts(synthesize(ExtremeParams::random(d, rng)));
      CHECK(n.givens_class() == givens[d]);
      CHECK(n.controlled_swaps() == swaps[d]);
      // Three controlled rotations per multiplexer; prior and posterior add d(d-1)/2 plain rotations each.
      CHECK(n.controlled_givens == 3 * d * (d - 1) / 2);
      CHECK(n.givens == d * (d - 1));
    }
  }

  TEST_CASE("unitary decomposition into two-level gates") {
    RandomStream rng(5);
    for (int d = 2; d <= 5; ++d) {
      const ComplexMatrix u = haar_unitary(d, rng);
      const auto gates = unitary_gates(u, Wire::system);
      ComplexMatrix m = ComplexMatrix::Identity(d, d);
      for (const auto& g : gates) m = single_wire_matrix(g, d) * m;
      CHECK(oracle::max_abs(m - u) <= 1e-12);
      int rotations = 0;
      for (const auto& g : gates) rotations += g.kind == GateKind::givens;
      CHECK(rotations == d * (d - 1) / 2);
    }
  }

  TEST_CASE("cost estimate") {
    for (int d = 2; d <= 8; ++d) {
      for (double eps : {0.1, 0.05, 0.01, 0.5}) {
        const CostEstimate a = cost_estimate(d, eps), b = cost_estimate(d, eps / 2);
        CHECK(b.compiled_estimate - a.compiled_estimate == a.continuous_gates);
        const double ratio =
            static_cast<double>(a.compiled_estimate) / (d * d * std::log2(static_cast<double>(d * d) / eps));
        CHECK(ratio <= 3.0);
      }
    }
    CHECK(cost_estimate(3, 0.05).continuous_gates == 15);
    CHECK_THROWS_AS(cost_estimate(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cost_estimate(3, 0.0), std::invalid_argument);
  }

  TEST_CASE("unitary diamond bound") {
    RandomStream rng(6);
    const ComplexMatrix u = haar_unitary(3, rng);
    CHECK(unitary_diamond_bound(u, u) == 0.0);
    for (double phi : {0.1, 1.0, 3.0}) {
      ComplexMatrix v = ComplexMatrix::Identity(2, 2);
      v(1, 1) = std::polar(1.0, phi);
      CHECK(unitary_diamond_bound(ComplexMatrix::Identity(2, 2), v) ==
            doctest::Approx(2 * std::abs(1.0 - std::polar(1.0, phi))).epsilon(1e-12));
    }
    // U' = U Q diag(e^{i phi}, 1, 1) Q^dagger with |1 - e^{i phi}| = 0.01.
    const ComplexMatrix q = haar_unitary(3, rng);
    ComplexMatrix dg = ComplexMatrix::Identity(3, 3);
    dg(0, 0) = std::polar(1.0, 2 * std::asin(0.005));
    const ComplexMatrix up = u * q * dg * q.adjoint();
    CHECK(std::abs(unitary_diamond_bound(u, up) - 0.02) <= 1e-10);
    CHECK_THROWS_AS(unitary_diamond_bound(u, ComplexMatrix::Identity(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(unitary_diamond_bound(u, 2.0 * u), std::invalid_argument);
  }

  TEST_CASE("gate validation and naming") {
    GateOp g;
    g.kind = GateKind::givens;
    g.j = 0;
    g.k = 0;
    CHECK_THROWS_AS(g.validate(3), std::invalid_argument);
    g.k = 3;
    CHECK_THROWS_AS(g.validate(3), std::invalid_argument);
    g.k = 2;
    CHECK_NOTHROW(g.validate(3));
    for (auto k : {GateKind::givens, GateKind::diagonal_phase, GateKind::two_level_swap, GateKind::controlled_givens,
                   GateKind::controlled_swap, GateKind::classically_controlled_swap}) {
      CHECK(gate_kind_from_name(gate_kind_name(k)) == k);
    }
    CHECK_THROWS_AS(gate_kind_from_name("toffoli"), std::invalid_argument);
    CHECK_FALSE(circuit_listing(synthesize(ExtremeParams::identity(2))).empty());
  }
}
