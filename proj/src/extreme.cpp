#include "chansim/extreme.hpp"

#include "extreme_detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chansim {

namespace {

void require_qudit(int d, const char* what) {
  if (d < 2) throw std::invalid_argument(std::string(what) + ": dimension must be at least 2");
}

int su_size(int d) { return d * d - 1; }

}  // namespace

namespace detail {

// out = U(block) with out preallocated d x d.
void build_su(int d, std::span<const double> block, ComplexMatrix& out) {
  out.setIdentity(d, d);
  std::size_t idx = 0;
  for (int k = 1; k < d; ++k) {
    for (int j = 0; j < k; ++j) {
      const double t = block[idx++];
      const double ph = block[idx++];
      const double c = std::cos(t);
      const double s = std::sin(t);
      const Complex up = std::polar(s, ph);    // e^{ip} sin t
      const Complex down = std::polar(s, -ph); // e^{-ip} sin t
      for (int col = 0; col < d; ++col) {
        const Complex rj = out(j, col);
        const Complex rk = out(k, col);
        out(j, col) = c * rj - up * rk;
        out(k, col) = down * rj + c * rk;
      }
    }
  }
  double last = 0.0;
  for (int l = 0; l + 1 < d; ++l) {
    const double psi = block[idx++];
    last -= psi;
    out.row(l) *= std::polar(1.0, psi);
  }
  out.row(d - 1) *= std::polar(1.0, last);
}

}  // namespace detail

namespace {

using detail::build_su;

void rotate(RealVector& v, int j, int k, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double vj = v(j);
  const double vk = v(k);
  v(j) = c * vj - s * vk;
  v(k) = s * vj + c * vk;
}

// Amplitudes u(i, l) from a flat mux-angle prefix (alpha, beta per pair).
void mux_amplitudes(int d, std::span<const double> mux, RealMatrix& amps, RealVector& anc) {
  const auto pairs = multiplexer_pairs(d);
  amps.resize(d, d);
  anc.resize(d);
  for (int l = 0; l < d; ++l) {
    anc.setZero();
    anc(0) = 1.0;
    // Rightmost multiplexer acts first.
    for (std::size_t m = pairs.size(); m-- > 0;) {
      const auto [j, k] = pairs[m];
      if (l == j) {
        rotate(anc, j, k, mux[2 * m]);           // CG_jk(alpha)
      } else if (l == k) {
        rotate(anc, j, k, mux[2 * m + 1]);       // CG_kj(-beta) = G_jk(beta)
      }
    }
    amps.col(l) = anc;
  }
}

ComplexMatrix projector(int d, int level) {
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(level, level) = 1.0;
  return p;
}

// |l><l| (x) g + (1 - |l><l|) (x) 1
ComplexMatrix controlled_on(const ComplexMatrix& proj, const ComplexMatrix& g) {
  const Eigen::Index d = proj.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  return kron(proj, g) + kron(id - proj, id);
}

ComplexMatrix product_of_blocks(int d, const std::vector<std::vector<double>>& blocks) {
  ComplexMatrix acc = ComplexMatrix::Identity(d, d);
  for (const auto& b : blocks) acc = unitary_from_params(d, b) * acc;
  return acc;
}

}  // namespace

int kappa(int d) {
  require_qudit(d, "kappa");
  const long num = static_cast<long>(d - 1) * (static_cast<long>(d) * d + d + 1);
  const long den = static_cast<long>(d) * (d + 1);
  return static_cast<int>((num + den - 1) / den);
}

int parameter_count(int d) {
  require_qudit(d, "parameter_count");
  return kappa(d) * d * (d * d - 1) + d * (d * d - d) + (d - 1);
}

int channel_parameter_count(int d) {
  require_qudit(d, "channel_parameter_count");
  return d * d * d * d - d * d;
}

int prior_block_count(int d) { return (kappa(d) + 1) / 2; }
int posterior_block_count(int d) { return kappa(d) / 2; }

std::vector<std::pair<int, int>> multiplexer_pairs(int d) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = d - 1; j >= 1; --j) {
    for (int k = j - 1; k >= 0; --k) pairs.emplace_back(j, k);
  }
  return pairs;
}

ExtremeParams ExtremeParams::identity(int d) {
  require_qudit(d, "ExtremeParams::identity");
  ExtremeParams p;
  p.dim = d;
  p.mux_angles.assign(static_cast<std::size_t>(d * (d - 1) / 2), MuxAngles{});
  p.prior.assign(prior_block_count(d), std::vector<double>(su_size(d), 0.0));
  p.posterior.assign(posterior_block_count(d), std::vector<double>(su_size(d), 0.0));
  return p;
}

ExtremeParams ExtremeParams::random(int d, RandomStream& rng) {
  ExtremeParams p = identity(d);
  for (auto& m : p.mux_angles) {
    m.alpha = rng.uniform(0.0, kTwoPi);
    m.beta = rng.uniform(0.0, kTwoPi);
  }
  for (auto* blocks : {&p.prior, &p.posterior}) {
    for (auto& b : *blocks) {
      for (double& x : b) x = rng.uniform(0.0, kTwoPi);
    }
  }
  return p;
}

void ExtremeParams::validate() const {
  require_qudit(dim, "ExtremeParams");
  if (mux_angles.size() != static_cast<std::size_t>(dim * (dim - 1) / 2)) {
    throw std::invalid_argument("ExtremeParams: expected d(d-1)/2 multiplexer angle pairs");
  }
  if (prior.size() + posterior.size() != static_cast<std::size_t>(kappa(dim))) {
    throw std::invalid_argument("ExtremeParams: expected kappa(d) unitary blocks in total");
  }
  for (const auto& m : mux_angles) {
    if (!std::isfinite(m.alpha) || !std::isfinite(m.beta)) {
      throw std::invalid_argument("ExtremeParams: non-finite multiplexer angle");
    }
  }
  for (const auto* blocks : {&prior, &posterior}) {
    for (const auto& b : *blocks) {
      if (b.size() != static_cast<std::size_t>(su_size(dim))) {
        throw std::invalid_argument("ExtremeParams: unitary block must hold d^2-1 values");
      }
      for (double x : b) {
        if (!std::isfinite(x)) throw std::invalid_argument("ExtremeParams: non-finite unitary parameter");
      }
    }
  }
}

std::size_t ExtremeParams::flat_size(int d) {
  require_qudit(d, "ExtremeParams::flat_size");
  return static_cast<std::size_t>(d * (d - 1) + kappa(d) * su_size(d));
}

std::vector<double> ExtremeParams::flat() const {
  validate();
  std::vector<double> out;
  out.reserve(flat_size(dim));
  for (const auto& m : mux_angles) {
    out.push_back(m.alpha);
    out.push_back(m.beta);
  }
  for (const auto* blocks : {&prior, &posterior}) {
    for (const auto& b : *blocks) out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

ExtremeParams ExtremeParams::from_flat(int d, std::span<const double> values) {
  if (values.size() != flat_size(d)) throw std::invalid_argument("ExtremeParams::from_flat: wrong length");
  ExtremeParams p = identity(d);
  std::size_t idx = 0;
  for (auto& m : p.mux_angles) {
    m.alpha = values[idx++];
    m.beta = values[idx++];
  }
  for (auto* blocks : {&p.prior, &p.posterior}) {
    for (auto& b : *blocks) {
      for (double& x : b) x = values[idx++];
    }
  }
  return p;
}

ComplexMatrix unitary_from_params(int d, std::span<const double> block) {
  require_qudit(d, "unitary_from_params");
  if (block.size() != static_cast<std::size_t>(su_size(d))) {
    throw std::invalid_argument("unitary_from_params: block must hold d^2-1 values");
  }
  ComplexMatrix u(d, d);
  build_su(d, block, u);
  return u;
}

ComplexMatrix prior_unitary(const ExtremeParams& p) {
  p.validate();
  return product_of_blocks(p.dim, p.prior);
}

ComplexMatrix posterior_unitary(const ExtremeParams& p) {
  p.validate();
  return product_of_blocks(p.dim, p.posterior);
}

ComplexMatrix givens(int d, int j, int k, double theta) {
  if (j < 0 || k < 0 || j >= d || k >= d || j == k) throw std::invalid_argument("givens: bad level pair");
  ComplexMatrix g = ComplexMatrix::Identity(d, d);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  g(j, j) = c;
  g(k, k) = c;
  g(k, j) = s;
  g(j, k) = -s;
  return g;
}

RealMatrix multiplexer_amplitudes(const ExtremeParams& p) {
  p.validate();
  std::vector<double> mux;
  for (const auto& m : p.mux_angles) {
    mux.push_back(m.alpha);
    mux.push_back(m.beta);
  }
  RealMatrix amps;
  RealVector anc;
  mux_amplitudes(p.dim, mux, amps, anc);
  return amps;
}

ComplexMatrix dilation_unitary(const ExtremeParams& p) {
  p.validate();
  const int d = p.dim;
  const auto pairs = multiplexer_pairs(d);
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix mux_product = ComplexMatrix::Identity(n, n);
  for (std::size_t m = 0; m < pairs.size(); ++m) {
    const auto [j, k] = pairs[m];
    const ComplexMatrix cg_jk = controlled_on(projector(d, j), givens(d, j, k, p.mux_angles[m].alpha));
    const ComplexMatrix cg_kj = controlled_on(projector(d, k), givens(d, k, j, -p.mux_angles[m].beta));
    mux_product = mux_product * (cg_jk * cg_kj);
  }
  ComplexMatrix shifts = ComplexMatrix::Identity(n, n);
  for (int i = d - 1; i >= 1; --i) {
    const ComplexMatrix cx = kron(weyl_x(d, i), projector(d, i)) +
                             kron(ComplexMatrix::Identity(d, d),
                                  ComplexMatrix::Identity(d, d) - projector(d, i));
    shifts = shifts * cx;
  }
  return shifts * mux_product;
}

std::vector<ComplexMatrix> f_operators(const ExtremeParams& p) {
  const ComplexMatrix u = dilation_unitary(p);
  const int d = p.dim;
  std::vector<ComplexMatrix> fs;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix f(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) f(r, c) = u(r * d + i, c * d);
    }
    fs.push_back(std::move(f));
  }
  return fs;
}

KrausChannel extreme_kraus(const ExtremeParams& p) {
  const ComplexMatrix v = prior_unitary(p);
  const ComplexMatrix w = posterior_unitary(p);
  std::vector<ComplexMatrix> ops;
  for (const auto& f : f_operators(p)) ops.push_back(w * f * v);
  return KrausChannel(p.dim, std::move(ops));
}

BTensor::BTensor(int dim) : dim_(dim), entries_(static_cast<std::size_t>(dim) * dim * dim, Complex(0.0)) {}

Complex& BTensor::operator()(int i, int mu, int nu) {
  return entries_[(static_cast<std::size_t>(i) * dim_ + mu) * dim_ + nu];
}

Complex BTensor::operator()(int i, int mu, int nu) const {
  return entries_[(static_cast<std::size_t>(i) * dim_ + mu) * dim_ + nu];
}

ComplexMatrix BTensor::matrix(int mu) const {
  ComplexMatrix b(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int nu = 0; nu < dim_; ++nu) b(i, nu) = (*this)(i, mu, nu);
  }
  return b;
}

ComplexMatrix BTensor::product_operator(int i, int mu) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (int nu = 0; nu < dim_; ++nu) out(nu, (nu + mu) % dim_) = (*this)(i, mu, nu);
  return out;
}

ComplexMatrix weyl_coefficients(const ExtremeParams& p) {
  const RealMatrix u = multiplexer_amplitudes(p);
  const int d = p.dim;
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (int l = 0; l < d; ++l) acc += u(i, l) * std::polar(1.0, -kTwoPi * l * j / d);
      a(i, j) = acc / static_cast<double>(d);
    }
  }
  return a;
}

BTensor b_tensor(const ExtremeParams& p) {
  const ComplexMatrix a = weyl_coefficients(p);
  const int d = p.dim;
  BTensor b(d);
  for (int i = 0; i < d; ++i) {
    for (int mu = 0; mu < d; ++mu) {
      const int shifted = (i + mu) % d;
      for (int nu = 0; nu < d; ++nu) {
        Complex acc = 0.0;
        for (int k = 0; k < d; ++k) {
          for (int l = 0; l < d; ++l) {
            acc += std::conj(a(i, k)) * a(shifted, l) *
                   std::polar(1.0, kTwoPi * (mu * l + nu * (l - k)) / d);
          }
        }
        b(i, mu, nu) = acc;
      }
    }
  }
  return b;
}

ExtremalityReport check_extremality(const ExtremeParams& p, double tol) {
  const BTensor b = b_tensor(p);
  ExtremalityReport report;
  report.min_det = std::numeric_limits<double>::infinity();
  for (int mu = 0; mu < p.dim; ++mu) {
    const ComplexMatrix m = b.matrix(mu);
    const double fro = m.norm();
    const double det = fro > 0.0 ? std::abs((m / fro).determinant()) : 0.0;
    report.det_magnitudes.push_back(det);
    report.min_det = std::min(report.min_det, det);
  }
  report.classification = report.min_det > tol ? Extremality::extreme : Extremality::quasi_extreme;
  return report;
}

ComplexMatrix core_choi_matrix(const ExtremeParams& p) {
  const RealMatrix u = multiplexer_amplitudes(p);
  const int d = p.dim;
  ComplexMatrix c = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int l = 0; l < d; ++l) {
      for (int k = 0; k < d; ++k) {
        const int li = (l + i) % d;
        const int ki = (k + i) % d;
        c(l * d + li, k * d + ki) += u(i, li) * u(i, ki);
      }
    }
  }
  return c;
}

ChoiState extreme_choi(const ExtremeParams& p) {
  const ComplexMatrix v = prior_unitary(p);
  const ComplexMatrix w = posterior_unitary(p);
  const ComplexMatrix t = kron(w, v.transpose());
  return ChoiState(p.dim, t * core_choi_matrix(p) * t.adjoint());
}

ExtremeChoiEvaluator::ExtremeChoiEvaluator(int d)
    : d_(d), prior_blocks_(prior_block_count(d)), posterior_blocks_(posterior_block_count(d)) {
  v_.resize(d, d);
  w_.resize(d, d);
  block_.resize(d, d);
  fv_.resize(d, d);
  k_.resize(d, d);
  cols_.resize(d * d, d);
}

void ExtremeChoiEvaluator::accumulate(std::span<const double> params, double weight, ComplexMatrix& out) {
  const int d = d_;
  const std::size_t mux_len = static_cast<std::size_t>(d * (d - 1));
  const std::size_t block_len = static_cast<std::size_t>(su_size(d));
  if (params.size() != ExtremeParams::flat_size(d)) {
    throw std::invalid_argument("ExtremeChoiEvaluator: wrong parameter length");
  }
  mux_amplitudes(d, params.subspan(0, mux_len), amps_, anc_);

  std::size_t offset = mux_len;
  v_.setIdentity();
  for (int b = 0; b < prior_blocks_; ++b, offset += block_len) {
    build_su(d, params.subspan(offset, block_len), block_);
    v_ = block_ * v_;
  }
  w_.setIdentity();
  for (int b = 0; b < posterior_blocks_; ++b, offset += block_len) {
    build_su(d, params.subspan(offset, block_len), block_);
    w_ = block_ * w_;
  }

  for (int i = 0; i < d; ++i) {
    // Row r of F_i V is u(i, r+i) times row r+i of V.
    for (int r = 0; r < d; ++r) {
      const int src = (r + i) % d;
      fv_.row(r) = amps_(i, src) * v_.row(src);
    }
    k_.noalias() = w_ * fv_;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) cols_(r * d + c, i) = k_(r, c);
    }
  }
  out.noalias() += weight * (cols_ * cols_.adjoint());
}

}  // namespace chansim
