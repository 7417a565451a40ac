#include <cmath>
#include <stdexcept>

#include "chansim/decomposer.hpp"
#include "extreme_detail.hpp"

namespace chansim {

namespace {

struct Rotation {
  int mux;     // multiplexer index
  bool alpha;  // alpha acts on level j, beta on level k
  int j, k;
};

// d(Re tr(B Z)) / d(params) for B = unitary_from_params(d, block), scaled.
void su_gradient(int d, std::span<const double> block, const ComplexMatrix& z, double scale, std::span<double> grad) {
  const int n_rot = d * (d - 1) / 2;
  std::vector<ComplexMatrix> t(static_cast<std::size_t>(n_rot));
  std::vector<std::pair<int, int>> levels;
  std::size_t idx = 0;
  for (int k = 1; k < d; ++k) {
    for (int j = 0; j < k; ++j, idx += 2) {
      const double c = std::cos(block[idx]);
      const double s = std::sin(block[idx]);
      ComplexMatrix m = ComplexMatrix::Identity(d, d);
      m(j, j) = c;
      m(k, k) = c;
      m(j, k) = -std::polar(s, block[idx + 1]);
      m(k, j) = std::polar(s, -block[idx + 1]);
      t[levels.size()] = std::move(m);
      levels.emplace_back(j, k);
    }
  }
  ComplexVector phi(d);
  double last = 0.0;
  for (int l = 0; l + 1 < d; ++l) {
    phi(l) = std::polar(1.0, block[idx + l]);
    last -= block[idx + l];
  }
  phi(d - 1) = std::polar(1.0, last);

  // suffix[m] = Phi T_N ... T_{m+1}
  std::vector<ComplexMatrix> suffix(static_cast<std::size_t>(n_rot));
  ComplexMatrix acc = phi.asDiagonal();
  for (int m = n_rot; m-- > 0;) {
    suffix[m] = acc;
    acc = acc * t[m];
  }
  ComplexMatrix pre = ComplexMatrix::Identity(d, d);  // T_{m-1} ... T_1
  for (int m = 0; m < n_rot; ++m) {
    const ComplexMatrix e = pre * z * suffix[m];
    const auto [j, k] = levels[m];
    const double th = block[2 * m];
    const double ph = block[2 * m + 1];
    const double c = std::cos(th);
    const double s = std::sin(th);
    const Complex up = std::polar(1.0, ph);
    const Complex down = std::polar(1.0, -ph);
    // tr(dT E) = sum_{a,b} dT(a,b) E(b,a)
    const Complex dt = -s * e(j, j) - up * c * e(k, j) + down * c * e(j, k) - s * e(k, k);
    const Complex dp = Complex(0, -1) * up * s * e(k, j) + Complex(0, -1) * down * s * e(j, k);
    grad[2 * m] += scale * dt.real();
    grad[2 * m + 1] += scale * dp.real();
    pre = t[m] * pre;
  }
  // Phases: B = Phi P with P = pre (all rotations).
  const ComplexMatrix pz = pre * z;
  for (int l = 0; l + 1 < d; ++l) {
    const Complex v = Complex(0, 1) * (phi(l) * pz(l, l) - phi(d - 1) * pz(d - 1, d - 1));
    grad[idx + l] += scale * v.real();
  }
}

}  // namespace

struct MixtureGradient::Component {
  std::vector<std::vector<Rotation>> schedule;        // per system level, application order
  std::vector<std::vector<RealVector>> states;        // ancilla state before each rotation, per level
  RealMatrix amps;
  std::vector<ComplexMatrix> prior, posterior;        // blocks in application order
  ComplexMatrix v, w;
  std::vector<ComplexMatrix> f, fv;
  ComplexMatrix a;                                    // d^2 x d, columns res(K_i)
};

MixtureGradient::MixtureGradient(const ChoiState& target, int terms)
    : d_(target.dim()),
      terms_(terms),
      target_(target.matrix()),
      parts_(static_cast<std::size_t>(terms)),
      delta_(d_ * d_, d_ * d_),
      solver_(d_ * d_),
      probs_(static_cast<std::size_t>(terms)) {
  if (terms < 1) throw std::invalid_argument("MixtureGradient: terms must be >= 1");
  const int d = d_;
  const auto pairs = multiplexer_pairs(d);
  for (auto& c : parts_) {
    c.schedule.resize(static_cast<std::size_t>(d));
    c.states.resize(static_cast<std::size_t>(d));
    for (std::size_t m = pairs.size(); m-- > 0;) {
      const auto [j, k] = pairs[m];
      c.schedule[j].push_back({static_cast<int>(m), true, j, k});
      c.schedule[k].push_back({static_cast<int>(m), false, j, k});
    }
    for (int l = 0; l < d; ++l) c.states[l].assign(c.schedule[l].size(), RealVector(d));
    c.amps.resize(d, d);
    c.prior.assign(static_cast<std::size_t>(prior_block_count(d)), ComplexMatrix(d, d));
    c.posterior.assign(static_cast<std::size_t>(posterior_block_count(d)), ComplexMatrix(d, d));
    c.f.assign(static_cast<std::size_t>(d), ComplexMatrix::Zero(d, d));
    c.fv.assign(static_cast<std::size_t>(d), ComplexMatrix(d, d));
    c.a.resize(d * d, d);
  }
}

MixtureGradient::~MixtureGradient() = default;
MixtureGradient::MixtureGradient(MixtureGradient&&) noexcept = default;

void MixtureGradient::forward(Component& c, std::span<const double> params) {
  const int d = d_;
  const std::size_t block_len = static_cast<std::size_t>(d * d - 1);
  RealVector anc(d);
  for (int l = 0; l < d; ++l) {
    anc.setZero();
    anc(0) = 1.0;
    for (std::size_t r = 0; r < c.schedule[l].size(); ++r) {
      const Rotation& rot = c.schedule[l][r];
      c.states[l][r] = anc;
      const double th = params[2 * rot.mux + (rot.alpha ? 0 : 1)];
      const double cs = std::cos(th), sn = std::sin(th);
      const double vj = anc(rot.j), vk = anc(rot.k);
      anc(rot.j) = cs * vj - sn * vk;
      anc(rot.k) = sn * vj + cs * vk;
    }
    c.amps.col(l) = anc;
  }
  std::size_t offset = static_cast<std::size_t>(d * (d - 1));
  c.v.setIdentity(d, d);
  for (auto& b : c.prior) {
    detail::build_su(d, params.subspan(offset, block_len), b);
    c.v = b * c.v;
    offset += block_len;
  }
  c.w.setIdentity(d, d);
  for (auto& b : c.posterior) {
    detail::build_su(d, params.subspan(offset, block_len), b);
    c.w = b * c.w;
    offset += block_len;
  }
  for (int i = 0; i < d; ++i) {
    // F_i(r, col) = u(i, col) when r = col - i.
    c.f[i].setZero();
    for (int col = 0; col < d; ++col) c.f[i]((col - i + d) % d, col) = c.amps(i, col);
    c.fv[i].noalias() = c.f[i] * c.v;
    const ComplexMatrix k = c.w * c.fv[i];
    for (int r = 0; r < d; ++r) {
      for (int col = 0; col < d; ++col) c.a(r * d + col, i) = k(r, col);
    }
  }
}

void MixtureGradient::backward(Component& c, std::span<const double> params, const ComplexMatrix& g, double scale,
                               std::span<double> grad) {
  // grad += scale * d Re tr(G A A^dagger) = 2 scale Re sum_i tr(H_i^dagger dK_i), H = G A.
  const int d = d_;
  const std::size_t block_len = static_cast<std::size_t>(d * d - 1);
  const ComplexMatrix h = g * c.a;
  ComplexMatrix q_w = ComplexMatrix::Zero(d, d);
  ComplexMatrix q_v = ComplexMatrix::Zero(d, d);
  RealMatrix y(d, d);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix hi(d, d);
    for (int r = 0; r < d; ++r) {
      for (int col = 0; col < d; ++col) hi(r, col) = h(r * d + col, i);
    }
    const ComplexMatrix hia = hi.adjoint();
    q_w.noalias() += c.fv[i] * hia;
    q_v.noalias() += hia * c.w * c.f[i];
    const ComplexMatrix vhw = c.v * hia * c.w;
    for (int col = 0; col < d; ++col) y(i, col) = vhw(col, (col - i + d) % d).real();
  }
  const double s2 = 2.0 * scale;

  // Multiplexer angles: backpropagate y(., l) through the rotations of level l.
  for (int l = 0; l < d; ++l) {
    RealVector b = y.col(l);
    for (std::size_t r = c.schedule[l].size(); r-- > 0;) {
      const Rotation& rot = c.schedule[l][r];
      const std::size_t pi = static_cast<std::size_t>(2 * rot.mux + (rot.alpha ? 0 : 1));
      const double th = params[pi];
      const double cs = std::cos(th), sn = std::sin(th);
      const RealVector& s = c.states[l][r];
      const double dj = -sn * s(rot.j) - cs * s(rot.k);
      const double dk = cs * s(rot.j) - sn * s(rot.k);
      grad[pi] += s2 * (b(rot.j) * dj + b(rot.k) * dk);
      // b <- R^T b
      const double bj = b(rot.j), bk = b(rot.k);
      b(rot.j) = cs * bj + sn * bk;
      b(rot.k) = -sn * bj + cs * bk;
    }
  }

  // Unitary blocks: M = B_{n-1} ... B_0; tr(dB_b Z_b) with Z_b = R_b Q L_b.
  auto blocks_grad = [&](const std::vector<ComplexMatrix>& blocks, const ComplexMatrix& q, std::size_t offset) {
    const std::size_t n = blocks.size();
    std::vector<ComplexMatrix> left(n);  // L_b = B_{n-1} ... B_{b+1}
    ComplexMatrix acc = ComplexMatrix::Identity(d, d);
    for (std::size_t b = n; b-- > 0;) {
      left[b] = acc;
      acc = acc * blocks[b];
    }
    ComplexMatrix right = ComplexMatrix::Identity(d, d);  // R_b = B_{b-1} ... B_0
    for (std::size_t b = 0; b < n; ++b) {
      su_gradient(d, params.subspan(offset + b * block_len, block_len), right * q * left[b], s2,
                  grad.subspan(offset + b * block_len, block_len));
      right = blocks[b] * right;
    }
  };
  const std::size_t prior_offset = static_cast<std::size_t>(d * (d - 1));
  blocks_grad(c.prior, q_v, prior_offset);
  blocks_grad(c.posterior, q_w, prior_offset + c.prior.size() * block_len);
}

double MixtureGradient::operator()(std::span<const double> flat, std::span<double> grad) {
  const std::size_t n = ExtremeParams::flat_size(d_);
  if (flat.size() != DecompositionParams::flat_size(d_, terms_) || grad.size() != flat.size()) {
    throw std::invalid_argument("MixtureGradient: wrong parameter length");
  }
  const std::size_t t0 = static_cast<std::size_t>(terms_);
  double top = flat[0];
  for (std::size_t t = 1; t < t0; ++t) top = std::max(top, flat[t]);
  double total = 0.0;
  for (std::size_t t = 0; t < t0; ++t) total += (probs_[t] = std::exp(flat[t] - top));
  for (double& p : probs_) p /= total;

  delta_ = target_;
  for (std::size_t t = 0; t < t0; ++t) {
    forward(parts_[t], flat.subspan(t0 + t * n, n));
    delta_.noalias() -= probs_[t] * (parts_[t].a * parts_[t].a.adjoint());
  }
  solver_.compute(delta_, Eigen::ComputeEigenvectors);
  const RealVector& lam = solver_.eigenvalues();
  const double dt = 0.5 * lam.cwiseAbs().sum();
  RealVector sign(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) sign(i) = lam(i) > 0.0 ? 1.0 : (lam(i) < 0.0 ? -1.0 : 0.0);
  // dD/dM = -1/2 sign(Delta)
  const ComplexMatrix g =
      -0.5 * solver_.eigenvectors() * sign.cast<Complex>().asDiagonal() * solver_.eigenvectors().adjoint();

  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> gt(t0);
  double mean = 0.0;
  for (std::size_t t = 0; t < t0; ++t) {
    const ComplexMatrix& a = parts_[t].a;
    gt[t] = (a.adjoint() * g * a).trace().real();
    mean += probs_[t] * gt[t];
  }
  for (std::size_t t = 0; t < t0; ++t) {
    grad[t] = probs_[t] * (gt[t] - mean);
    backward(parts_[t], flat.subspan(t0 + t * n, n), g, probs_[t], grad.subspan(t0 + t * n, n));
  }
  return dt;
}

}  // namespace chansim
