// chansim: generate, decompose, synthesize, verify and sample qudit channels.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "chansim/blocks.hpp"
#include "chansim/channel.hpp"
#include "chansim/circuit.hpp"
#include "chansim/decomposer.hpp"
#include "chansim/extreme.hpp"
#include "chansim/json_io.hpp"
#include "chansim/sampler.hpp"

using namespace chansim;

namespace {

enum ExitCode : int { kOk = 0, kNotConverged = 2, kInvalidInput = 3, kIoFailure = 4 };

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Everything needed to rerun a command; written next to the main artifact.
struct Manifest {
  std::string command;
  std::string started = utc_now();
  Json inputs = Json::object();
  Json parameters = Json::object();

  void write(const std::string& out_path, const std::vector<std::string>& argv) const {
    Json versions{{"chansim", CHANSIM_VERSION},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)},
                  {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                        std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                        std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    Json j{{"format", "chansim.manifest"},
           {"command", command},
           {"argv", argv},
           {"inputs", inputs},
           {"output", out_path},
           {"parameters", parameters},
           {"started_utc", started},
           {"finished_utc", utc_now()},
           {"versions", std::move(versions)}};
    write_json_file(out_path + ".manifest.json", j);
  }
};

Json load(const std::string& path) {
  // IoError passes through; parse failures surface as FormatError.
  return read_json_file(path);
}

DensityMatrix state_from_spec(const std::string& spec, int d, std::uint64_t seed) {
  if (spec == "mixed" || spec == "maximally_mixed") return DensityMatrix::maximally_mixed(d);
  if (spec == "zero") return DensityMatrix::basis_state(d, 0);
  if (spec.rfind("basis:", 0) == 0) {
    int k = -1;
    try {
      k = std::stoi(spec.substr(6));
    } catch (const std::exception&) {
    }
    if (k < 0 || k >= d) throw InvalidInput("basis index out of range in state spec: " + spec);
    return DensityMatrix::basis_state(d, k);
  }
  if (spec == "random" || spec.rfind("random:", 0) == 0) {
    std::uint64_t s = seed;
    if (spec.size() > 7) {
      try {
        s = std::stoull(spec.substr(7));
      } catch (const std::exception&) {
        throw InvalidInput("bad seed in state spec: " + spec);
      }
    }
    RandomStream rng = RandomStream(s).split(stream_tag::state);
    return DensityMatrix::random_pure(d, rng);
  }
  throw InvalidInput("unknown state spec '" + spec + "' (mixed, zero, basis:<k>, random[:<seed>])");
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Qudit channel simulation by mixtures of generalized extreme channels"};
  app.require_subcommand(1);

  int dim = 3;
  int env_dim = 0;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  int restarts = 0;
  int iters = 0;
  int terms = 0;
  int threads = 0;
  long shots = 10000;
  double learning_rate = 0.0;
  bool early_stop = false;
  std::string in_path, out_path, decomp_path, state_spec = "mixed", solver_name = "adam";

  auto* gen = app.add_subcommand("gen-channel", "Write a random channel from a Haar-random dilation");
  gen->add_option("--dim", dim, "System dimension d")->check(CLI::Range(2, 8));
  gen->add_option("--env-dim", env_dim, "Environment dimension (default d^2)")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out_path, "Output channel JSON")->required();

  auto* dec = app.add_subcommand("decompose", "Fit a convex mixture of extreme channels to a target");
  dec->add_option("--in", in_path, "Channel, Choi or mixture JSON")->required();
  dec->add_option("--epsilon", epsilon, "Diamond-norm target; success iff D_t <= epsilon/2")
      ->check(CLI::PositiveNumber);
  dec->add_option("--seed", seed, "Random seed");
  dec->add_option("--restarts", restarts, "Restarts (default depends on d)")->check(CLI::PositiveNumber);
  dec->add_option("--iters", iters, "Iterations per restart (default depends on d)")->check(CLI::PositiveNumber);
  dec->add_option("--terms", terms, "Mixture terms (default d)")->check(CLI::PositiveNumber);
  dec->add_option("--solver", solver_name, "Local solver")->check(CLI::IsMember({"adam", "simplex"}));
  dec->add_option("--learning-rate", learning_rate, "Adam step size")->check(CLI::PositiveNumber);
  dec->add_option("--threads", threads, "Worker threads (default CHANSIM_THREADS or 1)")
      ->check(CLI::NonNegativeNumber);
  dec->add_flag("--early-stop", early_stop, "Stop once a restart reaches epsilon/2");
  dec->add_option("--out", out_path, "Output decomposition JSON")->required();

  auto* syn = app.add_subcommand("synth", "Build the circuit bundle of a decomposition");
  syn->add_option("--in", in_path, "Decomposition JSON")->required();
  syn->add_option("--epsilon", epsilon, "Precision used for the compiled-cost estimate")
      ->check(CLI::Bound(1e-12, 1.0 - 1e-12));
  syn->add_option("--out", out_path, "Output bundle JSON")->required();

  auto* ver = app.add_subcommand("verify", "Compare a target with a decomposition");
  ver->add_option("--in", in_path, "Target channel or Choi JSON")->required();
  ver->add_option("--decomp", decomp_path, "Decomposition or reference mixture JSON")->required();
  ver->add_option("--epsilon", epsilon, "Diamond-norm target")->check(CLI::PositiveNumber);
  ver->add_option("--out", out_path, "Optional report JSON");

  auto* smp = app.add_subcommand("sample", "Run the randomized circuit protocol on a preset input state");
  smp->add_option("--in", in_path, "Decomposition JSON")->required();
  smp->add_option("--state", state_spec, "mixed | zero | basis:<k> | random[:<seed>]");
  smp->add_option("--shots", shots, "Number of shots")->check(CLI::PositiveNumber);
  smp->add_option("--seed", seed, "Random seed");
  smp->add_option("--out", out_path, "Optional report JSON");

  auto* info = app.add_subcommand("info", "Parameter counts, gate census and cost estimate");
  info->add_option("--dim", dim, "System dimension d")->check(CLI::Range(2, 8));
  info->add_option("--epsilon", epsilon, "Target precision")->check(CLI::Bound(1e-12, 1.0 - 1e-12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    if (*gen) {
      const int env = env_dim > 0 ? env_dim : dim * dim;
      RandomStream rng = RandomStream(seed).split(stream_tag::channel);
      const KrausChannel ch = random_channel(dim, env, rng);
      write_json_file(out_path, channel_to_json(ch));
      Manifest m{"gen-channel"};
      m.parameters = Json{{"dim", dim}, {"env_dim", env}, {"seed", seed}};
      m.write(out_path, args);
      std::cout << "wrote " << out_path << " (d=" << dim << ", " << ch.size() << " Kraus operators)\n";
      return kOk;
    }

    if (*dec) {
      const ChoiState target = target_from_json(load(in_path));
      OptimizerConfig cfg = OptimizerConfig::defaults_for(target.dim());
      cfg.epsilon = epsilon;
      cfg.seed = seed;
      if (restarts > 0) cfg.max_restarts = restarts;
      if (iters > 0) cfg.max_iters_per_restart = iters;
      cfg.terms = terms;
      cfg.solver = local_solver_from_name(solver_name);
      if (learning_rate > 0) cfg.learning_rate = learning_rate;
      cfg.threads = threads;
      cfg.stop_when_converged = early_stop;
      cfg.validate();

      const DecompositionResult r = optimize(target, cfg);
      write_json_file(out_path, decomposition_to_json(r, cfg));
      Manifest m{"decompose"};
      m.inputs = Json{{"target", in_path}};
      m.parameters = Json{{"dim", target.dim()},
                          {"epsilon", cfg.epsilon},
                          {"seed", cfg.seed},
                          {"terms", r.params.terms()},
                          {"restarts", cfg.max_restarts},
                          {"iters", cfg.max_iters_per_restart},
                          {"solver", local_solver_name(cfg.solver)},
                          {"learning_rate", cfg.learning_rate},
                          {"early_stop", cfg.stop_when_converged}};
      m.write(out_path, args);
      std::cout << std::setprecision(6) << "achieved D_t " << r.achieved_dt << "  diamond bound "
                << r.diamond_bound << "  restarts " << r.restarts_used << "  "
                << (r.converged ? "converged" : "NOT converged") << "\n";
      return r.converged ? kOk : kNotConverged;
    }

    if (*syn) {
      const Json j = load(in_path);
      const DecompositionParams p = decomposition_params_from_json(j);
      if (syn->count("--epsilon") == 0 && j.contains("epsilon") && j.at("epsilon").is_number()) {
        const double e = j.at("epsilon").get<double>();
        if (e > 0 && e < 1) epsilon = e;
      }
      CircuitBundle b;
      b.dim = p.dim;
      b.probabilities = p.probabilities();
      for (const auto& c : p.components) b.circuits.push_back(synthesize(c));
      write_json_file(out_path, bundle_to_json(b, epsilon));
      Manifest m{"synth"};
      m.inputs = Json{{"decomposition", in_path}};
      m.parameters = Json{{"dim", p.dim}, {"epsilon", epsilon}};
      m.write(out_path, args);
      for (std::size_t i = 0; i < b.circuits.size(); ++i) {
        const GateCensus g = gate_counts(b.circuits[i]);
        std::cout << "circuit " << i << ": p=" << b.probabilities[i] << "  givens " << g.givens_class()
                  << "  controlled swaps " << g.controlled_swaps() << "  phases " << g.diagonal_phase << "\n";
      }
      return kOk;
    }

    if (*ver) {
      const ChoiState target = target_from_json(load(in_path));
      const Json dj = load(decomp_path);
      const MixtureSpec spec = mixture_from_json(dj);
      if (spec.dim != target.dim()) {
        throw InvalidInput("dimension mismatch: target d=" + std::to_string(target.dim()) +
                           ", decomposition d=" + std::to_string(spec.dim));
      }
      if (ver->count("--epsilon") == 0 && dj.contains("epsilon") && dj.at("epsilon").is_number()) {
        epsilon = dj.at("epsilon").get<double>();
      }
      Json out;
      if (spec.params) {
        out = report_to_json(decompose_report(*spec.params, target, epsilon));
      } else {
        ComplexMatrix mix = ComplexMatrix::Zero(target.matrix().rows(), target.matrix().cols());
        std::vector<std::pair<double, ChoiState>> parts;
        Json comps = Json::array();
        for (std::size_t i = 0; i < spec.components.size(); ++i) {
          mix += spec.probabilities[i] * spec.components[i].matrix();
          parts.emplace_back(spec.probabilities[i], spec.components[i]);
          comps.push_back(Json{{"probability", spec.probabilities[i]},
                               {"certificate", certificate_to_json(certify_generalized_extreme(spec.components[i]))}});
        }
        const double dt = trace_distance(target.matrix(), mix);
        out = Json{{"achieved_dt", dt},
                   {"diamond_bound", 2 * dt},
                   {"distinguishing_probability", 0.5 * (1 + dt)},
                   {"blockwise_residual", blockwise_mixture_residual(target, parts)},
                   {"converged", dt <= epsilon / 2},
                   {"components", std::move(comps)}};
      }
      out["epsilon"] = epsilon;
      if (!out_path.empty()) {
        write_json_file(out_path, out);
        Manifest m{"verify"};
        m.inputs = Json{{"target", in_path}, {"decomposition", decomp_path}};
        m.parameters = Json{{"dim", target.dim()}, {"epsilon", epsilon}};
        m.write(out_path, args);
      }
      print_json(out);
      return kOk;
    }

    if (*smp) {
      const DecompositionParams p = decomposition_params_from_json(load(in_path));
      const DensityMatrix rho = state_from_spec(state_spec, p.dim, seed);
      RandomStream rng = RandomStream(seed).split(stream_tag::sampler);
      const SampleReport r = sample_channel(p, rho, shots, rng);
      Json out = sample_report_to_json(r, seed);
      out["state"] = state_spec;
      if (!out_path.empty()) {
        write_json_file(out_path, out);
        Manifest m{"sample"};
        m.inputs = Json{{"decomposition", in_path}};
        m.parameters = Json{{"dim", p.dim}, {"shots", shots}, {"seed", seed}, {"state", state_spec}};
        m.write(out_path, args);
      }
      std::cout << "shots " << r.shots << "  deviation " << r.deviation << "  counts";
      for (long c : r.empirical_counts) std::cout << " " << c;
      std::cout << "\n";
      return kOk;
    }

    if (*info) {
      const CircuitDescription c = synthesize(ExtremeParams::identity(dim));
      const GateCensus g = gate_counts(c);
      const CostEstimate cost = cost_estimate(dim, epsilon);
      std::cout << "d                       " << dim << "\n"
                << "kappa                   " << kappa(dim) << "\n"
                << "parameter_count         " << parameter_count(dim) << "\n"
                << "channel parameters      " << channel_parameter_count(dim) << "\n"
                << "givens-class gates      " << g.givens_class() << "\n"
                << "controlled swaps        " << g.controlled_swaps() << "\n"
                << "continuous gates        " << cost.continuous_gates << "\n"
                << "compiled estimate       " << cost.compiled_estimate << "  (epsilon " << epsilon << ")\n";
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    // FormatError, InvalidInput and domain std::invalid_argument all land here.
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
