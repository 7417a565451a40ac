#include "chansim/json_io.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace chansim {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw FormatError(msg);
}

int read_dim(const Json& j) {
  require(j.is_object() && j.contains("dim") && j.at("dim").is_number_integer(), "missing integer \"dim\"");
  const int d = j.at("dim").get<int>();
  require(d >= 1 && d <= 64, "\"dim\" out of range");
  return d;
}

std::vector<double> real_array(const Json& j, const char* what) {
  require(j.is_array(), std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    require(v.is_number(), std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Json su3_to_json(const Su3Angles& a) {
  return Json{{"theta", a.theta}, {"phi", a.phi}};
}

Su3Angles su3_from_json(const Json& j) {
  Su3Angles a;
  const auto t = real_array(j.at("theta"), "theta");
  const auto p = real_array(j.at("phi"), "phi");
  require(t.size() == 3 && p.size() == 5, "SU(3) block needs 3 theta and 5 phi values");
  std::copy(t.begin(), t.end(), a.theta.begin());
  std::copy(p.begin(), p.end(), a.phi.begin());
  return a;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  require(j.front().is_array() && !j.front().empty(), "matrix rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, "matrix rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& z = row.at(static_cast<std::size_t>(c));
      require(z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number(),
              "matrix entries must be [re, im] pairs");
      const double re = z[0].get<double>();
      const double im = z[1].get<double>();
      require(std::isfinite(re) && std::isfinite(im), "matrix entries must be finite");
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

Json channel_to_json(const KrausChannel& ch) {
  Json ops = Json::array();
  for (const auto& k : ch.kraus_ops()) ops.push_back(matrix_to_json(k));
  return Json{{"format", "chansim.channel"}, {"dim", ch.dim()}, {"kraus", std::move(ops)}};
}

KrausChannel channel_from_json(const Json& j) {
  return guarded("channel", [&] {
    const int d = read_dim(j);
    require(j.contains("kraus") && j.at("kraus").is_array(), "channel needs a \"kraus\" array");
    std::vector<ComplexMatrix> ops;
    for (const auto& k : j.at("kraus")) ops.push_back(matrix_from_json(k));
    return KrausChannel(d, std::move(ops), 1e-9);
  });
}

Json choi_to_json(const ChoiState& c) {
  return Json{{"format", "chansim.choi"}, {"dim", c.dim()}, {"matrix", matrix_to_json(c.matrix())}};
}

ChoiState choi_from_json(const Json& j) {
  return guarded("choi", [&] {
    const int d = read_dim(j);
    const Json& m = j.contains("matrix") ? j.at("matrix") : j.at("choi");
    const double tol = j.value("tolerance", 1e-9);
    require(tol > 0.0 && tol < 0.1, "\"tolerance\" out of range");
    return ChoiState(d, matrix_from_json(m), Tolerances{tol, std::max(tol, 1e-8)});
  });
}

ChoiState target_from_json(const Json& j) {
  require(j.is_object(), "target must be a JSON object");
  if (j.contains("kraus")) return kraus_to_choi(channel_from_json(j));
  if (j.contains("matrix") || j.contains("choi")) return choi_from_json(j);
  throw FormatError("target needs \"kraus\" or \"matrix\"");
}

Json extreme_params_to_json(const ExtremeParams& p) {
  Json mux = Json::array();
  for (const auto& m : p.mux_angles) mux.push_back(Json::array({m.alpha, m.beta}));
  return Json{{"dim", p.dim}, {"mux_angles", std::move(mux)}, {"prior", p.prior}, {"posterior", p.posterior}};
}

ExtremeParams extreme_params_from_json(const Json& j) {
  return guarded("extreme params", [&] {
    ExtremeParams p;
    p.dim = read_dim(j);
    require(j.at("mux_angles").is_array(), "\"mux_angles\" must be an array");
    for (const auto& m : j.at("mux_angles")) {
      const auto v = real_array(m, "mux angle pair");
      require(v.size() == 2, "mux angles come in (alpha, beta) pairs");
      p.mux_angles.push_back({v[0], v[1]});
    }
    for (const auto& b : j.at("prior")) p.prior.push_back(real_array(b, "prior block"));
    for (const auto& b : j.at("posterior")) p.posterior.push_back(real_array(b, "posterior block"));
    p.validate();
    return p;
  });
}

Json decomposition_params_to_json(const DecompositionParams& p) {
  Json comps = Json::array();
  for (const auto& c : p.components) comps.push_back(extreme_params_to_json(c));
  return Json{{"format", "chansim.decomposition"},
              {"dim", p.dim},
              {"terms", p.terms()},
              {"probabilities", p.probabilities()},
              {"logits", p.logits},
              {"components", std::move(comps)}};
}

Json decomposition_to_json(const DecompositionResult& r, const OptimizerConfig& cfg) {
  Json j = decomposition_params_to_json(r.params);
  j["achieved_dt"] = r.achieved_dt;
  j["diamond_bound"] = r.diamond_bound;
  j["converged"] = r.converged;
  j["epsilon"] = cfg.epsilon;
  j["restarts_used"] = r.restarts_used;
  j["best_restart"] = r.best_restart;
  Json values = Json::array();
  for (const auto& o : r.restarts) values.push_back(o.best);
  j["restart_values"] = std::move(values);
  j["seed"] = cfg.seed;
  j["budget"] = Json{{"max_restarts", cfg.max_restarts}, {"max_iters_per_restart", cfg.max_iters_per_restart}};
  j["solver"] = local_solver_name(cfg.solver);
  if (cfg.solver == LocalSolver::adam) j["learning_rate"] = cfg.learning_rate;
  return j;
}

DecompositionParams decomposition_params_from_json(const Json& j) {
  return guarded("decomposition", [&] {
    DecompositionParams p;
    p.dim = read_dim(j);
    require(j.contains("components") && j.at("components").is_array(), "decomposition needs \"components\"");
    for (const auto& c : j.at("components")) p.components.push_back(extreme_params_from_json(c));
    if (j.contains("logits")) {
      p.logits = real_array(j.at("logits"), "logits");
    } else {
      const auto probs = real_array(j.at("probabilities"), "probabilities");
      for (double v : probs) {
        require(v > 0.0 && v <= 1.0, "probabilities must lie in (0, 1]");
        p.logits.push_back(std::log(v));
      }
      require(std::abs(std::accumulate(probs.begin(), probs.end(), 0.0) - 1.0) <= 1e-6,
              "probabilities must sum to 1");
    }
    p.validate();
    return p;
  });
}

Json reference_mixture_to_json(const ReferenceMixture& m) {
  Json comps = Json::array();
  for (const auto& q : m.components) {
    comps.push_back(Json{{"a", q.a}, {"b", q.b}, {"c", q.c}, {"d", q.d}, {"e", q.e}, {"f", q.f},
                         {"R1", su3_to_json(q.r1)}, {"R2", su3_to_json(q.r2)}, {"R3", su3_to_json(q.r3)}});
  }
  return Json{{"format", "chansim.qutrit_reference"},
              {"dim", 3},
              {"probabilities", m.probabilities},
              {"components", std::move(comps)}};
}

ReferenceMixture reference_mixture_from_json(const Json& j) {
  return guarded("qutrit reference mixture", [&] {
    require(read_dim(j) == 3, "qutrit reference mixtures have dim 3");
    ReferenceMixture m;
    const auto probs = real_array(j.at("probabilities"), "probabilities");
    require(probs.size() == 3 && j.at("components").size() == 3, "qutrit reference mixtures have three components");
    for (std::size_t i = 0; i < 3; ++i) {
      const Json& c = j.at("components").at(i);
      QutritRefParams& q = m.components[i];
      q.a = c.at("a").get<double>();
      q.b = c.at("b").get<double>();
      q.c = c.at("c").get<double>();
      q.d = c.at("d").get<double>();
      q.e = c.at("e").get<double>();
      q.f = c.at("f").get<double>();
      q.r1 = su3_from_json(c.at("R1"));
      q.r2 = su3_from_json(c.at("R2"));
      q.r3 = su3_from_json(c.at("R3"));
      q.validate();
      m.probabilities[i] = probs[i];
    }
    return m;
  });
}

MixtureSpec mixture_from_json(const Json& j) {
  require(j.is_object(), "decomposition must be a JSON object");
  MixtureSpec spec;
  if (j.value("format", std::string()) == "chansim.qutrit_reference") {
    const ReferenceMixture m = reference_mixture_from_json(j);
    spec.dim = 3;
    for (std::size_t i = 0; i < 3; ++i) {
      spec.probabilities.push_back(m.probabilities[i]);
      spec.components.push_back(kraus_to_choi(qutrit_reference_kraus(m.components[i])));
    }
  } else {
    const DecompositionParams p = decomposition_params_from_json(j);
    spec.dim = p.dim;
    spec.probabilities = p.probabilities();
    for (const auto& c : p.components) spec.components.push_back(extreme_choi(c));
    spec.params = p;
  }
  double total = 0.0;
  for (double v : spec.probabilities) {
    require(v >= 0.0 && v <= 1.0, "probabilities must lie in [0, 1]");
    total += v;
  }
  require(std::abs(total - 1.0) <= 1e-6, "probabilities must sum to 1");
  for (double& v : spec.probabilities) v /= total;
  return spec;
}

Json circuit_to_json(const CircuitDescription& c) {
  Json gates = Json::array();
  for (const auto& g : c.gates) {
    Json r{{"kind", gate_kind_name(g.kind)}, {"wire", g.target == Wire::system ? "system" : "ancilla"}};
    if (g.kind == GateKind::diagonal_phase) {
      r["phases"] = g.phases;
    } else {
      r["indices"] = Json::array({g.j, g.k});
    }
    if (g.kind == GateKind::givens || g.kind == GateKind::controlled_givens) r["angle"] = g.angle;
    if (!g.controls.empty()) r["controls"] = g.controls;
    if (g.kind == GateKind::classically_controlled_swap) r["coherent_equivalent"] = "controlled_swap";
    gates.push_back(std::move(r));
  }
  return Json{{"dim", c.dim}, {"wires", Json::array({"system", "ancilla"})}, {"classical_dits", c.classical_dits},
              {"gates", std::move(gates)}};
}

CircuitDescription circuit_from_json(const Json& j) {
  return guarded("circuit", [&] {
    CircuitDescription c;
    c.dim = read_dim(j);
    c.classical_dits = j.value("classical_dits", 0);
    for (const auto& r : j.at("gates")) {
      GateOp g;
      g.kind = gate_kind_from_name(r.at("kind").get<std::string>());
      const std::string wire = r.at("wire").get<std::string>();
      require(wire == "system" || wire == "ancilla", "gate wire must be system or ancilla");
      g.target = wire == "system" ? Wire::system : Wire::ancilla;
      if (g.kind == GateKind::diagonal_phase) {
        g.phases = real_array(r.at("phases"), "phases");
      } else {
        const auto& idx = r.at("indices");
        require(idx.is_array() && idx.size() == 2, "gate indices must be a pair");
        g.j = idx[0].get<int>();
        g.k = idx[1].get<int>();
      }
      g.angle = r.value("angle", 0.0);
      if (r.contains("controls")) g.controls = r.at("controls").get<std::vector<int>>();
      c.gates.push_back(std::move(g));
    }
    c.validate();
    return c;
  });
}

Json census_to_json(const GateCensus& c) {
  return Json{{"givens", c.givens_class()},
              {"controlled_swap", c.controlled_swaps()},
              {"detail",
               {{"givens", c.givens},
                {"controlled_givens", c.controlled_givens},
                {"diagonal_phase", c.diagonal_phase},
                {"two_level_swap", c.two_level_swap},
                {"controlled_swap", c.controlled_swap},
                {"classically_controlled_swap", c.classically_controlled_swap}}}};
}

Json bundle_to_json(const CircuitBundle& b, double epsilon) {
  Json circuits = Json::array();
  Json census = Json::array();
  for (const auto& c : b.circuits) {
    circuits.push_back(circuit_to_json(c));
    census.push_back(census_to_json(gate_counts(c)));
  }
  const CostEstimate cost = cost_estimate(b.dim, epsilon);
  return Json{{"format", "chansim.circuit_bundle"},
              {"dim", b.dim},
              {"probabilities", b.probabilities},
              {"circuits", std::move(circuits)},
              {"census", std::move(census)},
              {"cost_estimate",
               {{"epsilon", epsilon},
                {"continuous_gates", cost.continuous_gates},
                {"compiled_estimate", cost.compiled_estimate},
                {"model", "continuous_gates * ceil(log2(d^2 / epsilon))"}}}};
}

CircuitBundle bundle_from_json(const Json& j) {
  return guarded("circuit bundle", [&] {
    CircuitBundle b;
    b.dim = read_dim(j);
    b.probabilities = real_array(j.at("probabilities"), "probabilities");
    for (const auto& c : j.at("circuits")) b.circuits.push_back(circuit_from_json(c));
    require(b.circuits.size() == b.probabilities.size(), "one probability per circuit required");
    for (const auto& c : b.circuits) require(c.dim == b.dim, "circuit dimension mismatch");
    return b;
  });
}

Json certificate_to_json(const GenExtCertificate& c) {
  Json pairs = Json::array();
  for (const auto& p : c.pairs) {
    pairs.push_back(Json{{"k", p.k},
                         {"l", p.l},
                         {"singular_values", std::vector<double>(p.singular_values.data(),
                                                                 p.singular_values.data() + p.singular_values.size())},
                         {"unitarity_defect", p.unitarity_defect},
                         {"chain_residual", p.chain_residual}});
  }
  return Json{{"is_genext", c.is_genext},
              {"rank", c.rank},
              {"block_ranks", c.block_ranks},
              {"max_unitarity_defect", c.max_unitarity_defect},
              {"chain_residual", c.chain_residual},
              {"pairs", std::move(pairs)}};
}

Json extremality_to_json(const ExtremalityReport& r) {
  return Json{{"classification", r.classification == Extremality::extreme ? "extreme" : "quasi_extreme"},
              {"min_det", r.min_det},
              {"det_magnitudes", r.det_magnitudes}};
}

Json report_to_json(const DecompositionReport& r) {
  Json comps = Json::array();
  for (const auto& c : r.components) {
    comps.push_back(Json{{"probability", c.probability},
                         {"extremality", extremality_to_json(c.extremality)},
                         {"block_structure", certificate_to_json(c.certificate)}});
  }
  return Json{{"achieved_dt", r.achieved_dt},
              {"diamond_bound", r.diamond_bound},
              {"distinguishing_probability", r.distinguishing_probability},
              {"blockwise_residual", r.blockwise_residual},
              {"converged", r.converged},
              {"components", std::move(comps)}};
}

Json sample_report_to_json(const SampleReport& r, std::uint64_t seed) {
  return Json{{"format", "chansim.sample_report"},
              {"shots", r.shots},
              {"seed", seed},
              {"empirical_counts", r.empirical_counts},
              {"deviation", r.deviation},
              {"estimated_state", matrix_to_json(r.estimated_state.matrix())},
              {"exact_state", matrix_to_json(r.exact_state.matrix())}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  const std::string text = buf.str();
  if (text.empty()) throw FormatError(path + ": empty file");
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace chansim
