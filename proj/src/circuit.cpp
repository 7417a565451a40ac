#include "chansim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace chansim {

namespace {

bool has_controls(GateKind k) {
  return k == GateKind::controlled_givens || k == GateKind::controlled_swap ||
         k == GateKind::classically_controlled_swap;
}

bool in_controls(const GateOp& g, int level) {
  return std::find(g.controls.begin(), g.controls.end(), level) != g.controls.end();
}

GateOp phase_gate(Wire wire, std::vector<double> phases) {
  GateOp g;
  g.kind = GateKind::diagonal_phase;
  g.target = wire;
  g.phases = std::move(phases);
  return g;
}

GateOp givens_gate(Wire wire, int j, int k, double theta) {
  GateOp g;
  g.kind = GateKind::givens;
  g.target = wire;
  g.j = j;
  g.k = k;
  g.angle = theta;
  return g;
}

// Appends a phase gate, merging it into a directly preceding one.
void push_phase(std::vector<GateOp>& out, Wire wire, const std::vector<double>& phases) {
  if (std::all_of(phases.begin(), phases.end(), [](double v) { return v == 0.0; })) return;
  if (!out.empty() && out.back().kind == GateKind::diagonal_phase && out.back().target == wire) {
    for (std::size_t i = 0; i < phases.size(); ++i) out.back().phases[i] += phases[i];
    return;
  }
  out.push_back(phase_gate(wire, phases));
}

}  // namespace

void GateOp::validate(int d) const {
  auto level_ok = [d](int v) { return v >= 0 && v < d; };
  if (kind == GateKind::diagonal_phase) {
    if (static_cast<int>(phases.size()) != d) throw std::invalid_argument("GateOp: phase gate needs d phases");
    for (double p : phases) {
      if (!std::isfinite(p)) throw std::invalid_argument("GateOp: non-finite phase");
    }
  } else {
    if (!level_ok(j) || !level_ok(k) || j == k) throw std::invalid_argument("GateOp: bad level pair");
  }
  if (!std::isfinite(angle)) throw std::invalid_argument("GateOp: non-finite angle");
  if (has_controls(kind)) {
    if (controls.empty()) throw std::invalid_argument("GateOp: controlled gate without controls");
    for (int c : controls) {
      if (!level_ok(c)) throw std::invalid_argument("GateOp: control level out of range");
    }
    if (kind == GateKind::classically_controlled_swap && target != Wire::system) {
      throw std::invalid_argument("GateOp: classically controlled gates act on the system");
    }
  } else if (!controls.empty()) {
    throw std::invalid_argument("GateOp: uncontrolled gate with controls");
  }
}

void CircuitDescription::validate() const {
  if (dim < 2) throw std::invalid_argument("CircuitDescription: dimension must be at least 2");
  for (const auto& g : gates) g.validate(dim);
}

std::vector<GateOp> multiplexer_gates(int j, int k, double alpha, double beta) {
  const double g1 = (beta - alpha + kPi / 2) / 2;
  const double g2 = (beta + alpha - kPi / 2) / 2;
  GateOp cx;
  cx.kind = GateKind::controlled_swap;
  cx.target = Wire::ancilla;
  cx.j = j;
  cx.k = k;
  cx.controls = {j};
  GateOp cg;
  cg.kind = GateKind::controlled_givens;
  cg.target = Wire::ancilla;
  cg.j = j;
  cg.k = k;
  cg.controls = {j, k};
  std::vector<GateOp> out;
  out.push_back(cx);
  cg.angle = g1;
  out.push_back(cg);
  out.push_back(cx);
  cg.angle = g2;
  out.push_back(cg);
  cg.controls = {j};
  cg.angle = kPi / 2;
  out.push_back(cg);
  return out;
}

std::vector<std::pair<int, int>> shift_transpositions(int d, int i) {
  // Selection sort towards the target arrangement: position p must end up
  // holding the basis state p + i.
  std::vector<int> at(static_cast<std::size_t>(d));
  for (int p = 0; p < d; ++p) at[p] = p;
  std::vector<std::pair<int, int>> swaps;
  for (int p = 0; p + 1 < d; ++p) {
    const int want = (p + i) % d;
    const int q = static_cast<int>(std::find(at.begin(), at.end(), want) - at.begin());
    if (q != p) {
      std::swap(at[p], at[q]);
      swaps.emplace_back(std::max(p, q), std::min(p, q));
    }
  }
  return swaps;
}

std::vector<GateOp> shift_chain_gates(int d) {
  std::vector<GateOp> out;
  for (int i = 1; i < d; ++i) {
    for (const auto& [j, k] : shift_transpositions(d, i)) {
      GateOp g;
      g.kind = GateKind::classically_controlled_swap;
      g.target = Wire::system;
      g.j = j;
      g.k = k;
      g.controls = {i};
      out.push_back(g);
    }
  }
  return out;
}

std::vector<GateOp> unitary_gates(const ComplexMatrix& u, Wire wire) {
  const int d = static_cast<int>(u.rows());
  if (d < 1 || !is_square(u)) throw std::invalid_argument("unitary_gates: matrix is not square");
  // Left-multiply by two-level unitaries T until the matrix is diagonal:
  // T_N ... T_1 u = D, so u = T_1^dagger ... T_N^dagger D.
  ComplexMatrix m = u;
  struct Step {
    int c, r;
    ComplexMatrix t;  // 2x2 on levels (c, r)
  };
  std::vector<Step> steps;
  for (int c = 0; c + 1 < d; ++c) {
    for (int r = d - 1; r > c; --r) {
      const Complex x = m(c, c);
      const Complex y = m(r, c);
      const double n = std::hypot(std::abs(x), std::abs(y));
      ComplexMatrix t = ComplexMatrix::Identity(2, 2);
      if (n > 1e-300 && std::abs(y) > 0.0) {
        t << std::conj(x) / n, std::conj(y) / n, -y / n, x / n;
      }
      const Eigen::RowVectorXcd rc = m.row(c);
      const Eigen::RowVectorXcd rr = m.row(r);
      m.row(c) = t(0, 0) * rc + t(0, 1) * rr;
      m.row(r) = t(1, 0) * rc + t(1, 1) * rr;
      steps.push_back({c, r, t});
    }
  }
  std::vector<GateOp> out;
  std::vector<double> diag(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) diag[l] = std::arg(m(l, l));
  push_phase(out, wire, diag);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    // T^dagger = P(a) G(theta) P(b) on levels (c, r); G rotates |c> into |r>.
    const ComplexMatrix v = it->t.adjoint();
    const double cth = std::abs(v(0, 0));
    const double sth = std::abs(v(1, 0));
    const double theta = std::atan2(sth, cth);
    double a0, a1, b1;
    if (cth < 1e-12) {
      a0 = std::arg(-v(0, 1));
      a1 = std::arg(v(1, 0));
      b1 = 0.0;
    } else if (sth < 1e-12) {
      a0 = std::arg(v(0, 0));
      a1 = std::arg(v(1, 1));
      b1 = 0.0;
    } else {
      a0 = std::arg(v(0, 0));
      a1 = std::arg(v(1, 0));
      b1 = std::arg(-v(0, 1)) - a0;
    }
    std::vector<double> pre(static_cast<std::size_t>(d), 0.0), post(static_cast<std::size_t>(d), 0.0);
    pre[static_cast<std::size_t>(it->r)] = b1;
    post[static_cast<std::size_t>(it->c)] = a0;
    post[static_cast<std::size_t>(it->r)] = a1;
    push_phase(out, wire, pre);
    out.push_back(givens_gate(wire, it->c, it->r, theta));
    push_phase(out, wire, post);
  }
  return out;
}

CircuitDescription synthesize(const ExtremeParams& p) {
  p.validate();
  const int d = p.dim;
  CircuitDescription c;
  c.dim = d;
  for (auto& g : unitary_gates(prior_unitary(p), Wire::system)) c.gates.push_back(std::move(g));
  const auto pairs = multiplexer_pairs(d);
  for (std::size_t m = pairs.size(); m-- > 0;) {
    for (auto& g : multiplexer_gates(pairs[m].first, pairs[m].second, p.mux_angles[m].alpha, p.mux_angles[m].beta)) {
      c.gates.push_back(std::move(g));
    }
  }
  for (auto& g : shift_chain_gates(d)) c.gates.push_back(std::move(g));
  c.classical_dits = 1;
  for (auto& g : unitary_gates(posterior_unitary(p), Wire::system)) c.gates.push_back(std::move(g));
  return c;
}

ComplexMatrix single_wire_matrix(const GateOp& g, int d) {
  ComplexMatrix m = ComplexMatrix::Identity(d, d);
  switch (g.kind) {
    case GateKind::givens:
    case GateKind::controlled_givens:
      return givens(d, g.j, g.k, g.angle);
    case GateKind::two_level_swap:
    case GateKind::controlled_swap:
    case GateKind::classically_controlled_swap:
      m(g.j, g.j) = 0.0;
      m(g.k, g.k) = 0.0;
      m(g.j, g.k) = 1.0;
      m(g.k, g.j) = 1.0;
      return m;
    case GateKind::diagonal_phase:
      for (int l = 0; l < d; ++l) m(l, l) = std::polar(1.0, g.phases[static_cast<std::size_t>(l)]);
      return m;
  }
  throw std::invalid_argument("single_wire_matrix: unknown gate kind");
}

void apply_gate(const GateOp& g, int d, ComplexMatrix& m) {
  if (m.rows() != d * d) throw std::invalid_argument("apply_gate: row count is not d^2");
  const bool controlled = has_controls(g.kind);
  // Row index of (target level t, other-wire level o).
  auto row = [&](int t, int o) { return g.target == Wire::system ? t * d + o : o * d + t; };
  for (int o = 0; o < d; ++o) {
    if (controlled && !in_controls(g, o)) continue;
    switch (g.kind) {
      case GateKind::givens:
      case GateKind::controlled_givens: {
        const double c = std::cos(g.angle);
        const double s = std::sin(g.angle);
        const Eigen::RowVectorXcd rj = m.row(row(g.j, o));
        const Eigen::RowVectorXcd rk = m.row(row(g.k, o));
        m.row(row(g.j, o)) = c * rj - s * rk;
        m.row(row(g.k, o)) = s * rj + c * rk;
        break;
      }
      case GateKind::two_level_swap:
      case GateKind::controlled_swap:
      case GateKind::classically_controlled_swap:
        m.row(row(g.j, o)).swap(m.row(row(g.k, o)));
        break;
      case GateKind::diagonal_phase:
        for (int t = 0; t < d; ++t) m.row(row(t, o)) *= std::polar(1.0, g.phases[static_cast<std::size_t>(t)]);
        break;
    }
  }
}

ComplexMatrix circuit_unitary(const CircuitDescription& c) {
  c.validate();
  ComplexMatrix u = ComplexMatrix::Identity(c.dim * c.dim, c.dim * c.dim);
  for (const auto& g : c.gates) apply_gate(g, c.dim, u);
  return u;
}

GateCensus gate_counts(const CircuitDescription& c) {
  GateCensus n;
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::givens: ++n.givens; break;
      case GateKind::controlled_givens: ++n.controlled_givens; break;
      case GateKind::diagonal_phase: ++n.diagonal_phase; break;
      case GateKind::two_level_swap: ++n.two_level_swap; break;
      case GateKind::controlled_swap: ++n.controlled_swap; break;
      case GateKind::classically_controlled_swap: ++n.classically_controlled_swap; break;
    }
  }
  return n;
}

CostEstimate cost_estimate(int d, double epsilon) {
  if (d < 2) throw std::invalid_argument("cost_estimate: dimension must be at least 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("cost_estimate: epsilon must lie in (0, 1)");
  CostEstimate e;
  e.continuous_gates = gate_counts(synthesize(ExtremeParams::identity(d))).givens_class();
  const double bits = std::ceil(std::log2(static_cast<double>(d) * d / epsilon) / std::log2(kCompileLogBase));
  e.compiled_estimate = static_cast<long>(e.continuous_gates) * static_cast<long>(bits);
  return e;
}

double unitary_diamond_bound(const ComplexMatrix& u, const ComplexMatrix& u_approx) {
  if (!is_square(u) || u.rows() != u_approx.rows() || u.cols() != u_approx.cols()) {
    throw std::invalid_argument("unitary_diamond_bound: dimension mismatch");
  }
  if (!is_unitary(u, 1e-8) || !is_unitary(u_approx, 1e-8)) {
    throw std::invalid_argument("unitary_diamond_bound: input is not unitary");
  }
  return 2.0 * spectral_norm(u - u_approx);
}

std::string gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::givens: return "givens";
    case GateKind::diagonal_phase: return "diagonal_phase";
    case GateKind::two_level_swap: return "two_level_swap";
    case GateKind::controlled_givens: return "controlled_givens";
    case GateKind::controlled_swap: return "controlled_swap";
    case GateKind::classically_controlled_swap: return "classically_controlled_swap";
  }
  throw std::invalid_argument("gate_kind_name: unknown kind");
}

GateKind gate_kind_from_name(const std::string& name) {
  for (GateKind k : {GateKind::givens, GateKind::diagonal_phase, GateKind::two_level_swap, GateKind::controlled_givens,
                     GateKind::controlled_swap, GateKind::classically_controlled_swap}) {
    if (gate_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate kind: " + name);
}

std::string circuit_listing(const CircuitDescription& c) {
  std::ostringstream os;
  os << std::setprecision(10);
  for (const auto& g : c.gates) {
    os << gate_kind_name(g.kind) << ' ' << (g.target == Wire::system ? "system" : "ancilla");
    if (g.kind == GateKind::diagonal_phase) {
      os << " phases";
      for (double p : g.phases) os << ' ' << p;
    } else {
      os << " (" << g.j << ',' << g.k << ')';
      if (g.kind == GateKind::givens || g.kind == GateKind::controlled_givens) os << " theta=" << g.angle;
    }
    if (!g.controls.empty()) {
      os << (g.kind == GateKind::classically_controlled_swap ? " if measured in {" : " controls {");
      for (std::size_t i = 0; i < g.controls.size(); ++i) os << (i ? "," : "") << g.controls[i];
      os << '}';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace chansim
