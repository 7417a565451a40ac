// Python bindings. Matrices cross as numpy complex arrays; structured
// artifacts cross as JSON text in the same formats the CLI reads and writes,
// and the Python package turns them into dicts.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chansim/blocks.hpp"
#include "chansim/channel.hpp"
#include "chansim/circuit.hpp"
#include "chansim/decomposer.hpp"
#include "chansim/extreme.hpp"
#include "chansim/json_io.hpp"
#include "chansim/sampler.hpp"

namespace py = pybind11;
using namespace chansim;

namespace {

using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

ChoiState as_choi(int d, const ComplexMatrix& m) { return ChoiState(d, m); }

std::vector<Matrix> random_kraus(int d, int env_dim, std::uint64_t seed) {
  RandomStream rng = RandomStream(seed).split(stream_tag::channel);
  const KrausChannel ch = random_channel(d, env_dim, rng);
  std::vector<Matrix> out;
  for (const auto& k : ch.kraus_ops()) out.emplace_back(k);
  return out;
}

Matrix choi_of_kraus(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("at least one Kraus operator is required");
  return kraus_to_choi(KrausChannel(static_cast<int>(kraus.front().rows()), kraus)).matrix();
}

std::string decompose(const ComplexMatrix& choi, int d, double epsilon, std::uint64_t seed, int restarts, int iters,
                      int terms, const std::string& solver, double learning_rate, bool early_stop, int threads) {
  const ChoiState target = as_choi(d, choi);
  OptimizerConfig cfg = OptimizerConfig::defaults_for(d);
  cfg.epsilon = epsilon;
  cfg.seed = seed;
  if (restarts > 0) cfg.max_restarts = restarts;
  if (iters > 0) cfg.max_iters_per_restart = iters;
  cfg.terms = terms;
  cfg.solver = local_solver_from_name(solver);
  cfg.learning_rate = learning_rate;
  cfg.stop_when_converged = early_stop;
  cfg.threads = threads;
  cfg.validate();
  DecompositionResult r;
  {
    py::gil_scoped_release release;
    r = optimize(target, cfg);
  }
  return decomposition_to_json(r, cfg).dump();
}

Matrix mixture_choi_of(const std::string& decomp) {
  return mixture_choi(decomposition_params_from_json(Json::parse(decomp))).matrix();
}

std::string verify(const ComplexMatrix& choi, int d, const std::string& decomp, double epsilon) {
  const DecompositionParams p = decomposition_params_from_json(Json::parse(decomp));
  return report_to_json(decompose_report(p, as_choi(d, choi), epsilon)).dump();
}

std::string certify(const ComplexMatrix& choi, int d, double tol) {
  return certificate_to_json(certify_generalized_extreme(as_choi(d, choi), tol)).dump();
}

std::string synth_bundle(const std::string& decomp, double epsilon) {
  const DecompositionParams p = decomposition_params_from_json(Json::parse(decomp));
  CircuitBundle b{p.dim, p.probabilities(), {}};
  for (const auto& c : p.components) b.circuits.push_back(synthesize(c));
  return bundle_to_json(b, epsilon).dump();
}

Matrix circuit_matrix(const std::string& circuit) { return circuit_unitary(circuit_from_json(Json::parse(circuit))); }

std::string sample(const std::string& decomp, const ComplexMatrix& rho, long shots, std::uint64_t seed) {
  const DecompositionParams p = decomposition_params_from_json(Json::parse(decomp));
  const DensityMatrix state(rho);
  RandomStream rng = RandomStream(seed).split(stream_tag::sampler);
  SampleReport rep = [&] {
    py::gil_scoped_release release;
    return sample_channel(p, state, shots, rng);
  }();
  return sample_report_to_json(rep, seed).dump();
}

std::string extreme_random(int d, std::uint64_t seed) {
  RandomStream rng(seed);
  return extreme_params_to_json(ExtremeParams::random(d, rng)).dump();
}

Matrix extreme_choi_of(const std::string& params) {
  return extreme_choi(extreme_params_from_json(Json::parse(params))).matrix();
}

Matrix dilation_of(const std::string& params) {
  return dilation_unitary(extreme_params_from_json(Json::parse(params)));
}

std::vector<Matrix> extreme_kraus_of(const std::string& params) {
  std::vector<Matrix> out;
  const KrausChannel ch = extreme_kraus(extreme_params_from_json(Json::parse(params)));
  for (const auto& k : ch.kraus_ops()) out.emplace_back(k);
  return out;
}

}  // namespace

PYBIND11_MODULE(_chansim, m) {
  m.doc() = "Channel decomposition into generalized-extreme channels";
  m.attr("__version__") = CHANSIM_VERSION;

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("kappa", &kappa, py::arg("d"));
  m.def("parameter_count", &parameter_count, py::arg("d"));
  m.def("channel_parameter_count", &channel_parameter_count, py::arg("d"));

  m.def("random_channel", &random_kraus, py::arg("d"), py::arg("env_dim") = 0, py::arg("seed") = 0,
        "Kraus operators of a random channel; env_dim 0 selects d*d.");
  m.def("choi", &choi_of_kraus, py::arg("kraus"), "Choi matrix (output x input ordering, trace d).");
  m.def(
      "trace_distance", [](const ComplexMatrix& a, const ComplexMatrix& b) { return trace_distance(a, b); },
      py::arg("a"), py::arg("b"));

  m.def("random_extreme_params", &extreme_random, py::arg("d"), py::arg("seed") = 0);
  m.def("extreme_choi", &extreme_choi_of, py::arg("params"));
  m.def("extreme_kraus", &extreme_kraus_of, py::arg("params"));
  m.def("dilation_unitary", &dilation_of, py::arg("params"));

  m.def("decompose", &decompose, py::arg("choi"), py::arg("d"), py::arg("epsilon") = 0.1, py::arg("seed") = 0,
        py::arg("restarts") = 0, py::arg("iters") = 0, py::arg("terms") = 0, py::arg("solver") = "adam",
        py::arg("learning_rate") = 0.02, py::arg("early_stop") = false, py::arg("threads") = 0);
  m.def("mixture_choi", &mixture_choi_of, py::arg("decomposition"));
  m.def("verify", &verify, py::arg("choi"), py::arg("d"), py::arg("decomposition"), py::arg("epsilon") = 0.1);
  m.def("certify", &certify, py::arg("choi"), py::arg("d"), py::arg("tol") = 1e-7);

  m.def("synthesize", &synth_bundle, py::arg("decomposition"), py::arg("epsilon") = 0.1);
  m.def("circuit_unitary", &circuit_matrix, py::arg("circuit"));
  m.def("sample", &sample, py::arg("decomposition"), py::arg("rho"), py::arg("shots"), py::arg("seed") = 0);
}
