#include "chansim/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chansim {

namespace {

void require_dim(int d, const char* what) {
  if (d < 1) throw std::invalid_argument(std::string(what) + ": dimension must be positive");
}

}  // namespace

KrausChannel::KrausChannel(int dim, std::vector<ComplexMatrix> kraus_ops, double tol)
    : dim_(dim), ops_(std::move(kraus_ops)) {
  require_dim(dim, "KrausChannel");
  if (ops_.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
  if (ops_.size() > static_cast<std::size_t>(dim) * dim) {
    throw std::invalid_argument("KrausChannel: more than d^2 Kraus operators");
  }
  for (const auto& k : ops_) {
    if (k.rows() != dim || k.cols() != dim) {
      throw std::invalid_argument("KrausChannel: Kraus operator is not d x d");
    }
  }
  const double err = normalization_error();
  if (!(err <= tol)) {
    throw std::invalid_argument("KrausChannel: sum K^dagger K deviates from identity by " +
                                std::to_string(err));
  }
}

double KrausChannel::normalization_error() const {
  ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& k : ops_) acc.noalias() += k.adjoint() * k;
  return max_abs(acc - ComplexMatrix::Identity(dim_, dim_));
}

ChoiState::ChoiState(int dim, ComplexMatrix matrix, Tolerances tol) : dim_(dim), matrix_(std::move(matrix)) {
  require_dim(dim, "ChoiState");
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("ChoiState: matrix is not d^2 x d^2");
  }
  if (!is_hermitian(matrix_, tol.structural)) throw std::invalid_argument("ChoiState: matrix is not Hermitian");
  if (!is_psd(matrix_, tol.spectral)) throw std::invalid_argument("ChoiState: matrix is not positive semidefinite");
  if (std::abs(matrix_.trace() - Complex(dim, 0.0)) > tol.structural * dim) {
    throw std::invalid_argument("ChoiState: trace differs from d");
  }
  const ComplexMatrix reduced = partial_trace(matrix_, dim, Subsystem::first);
  if (max_abs(reduced - ComplexMatrix::Identity(dim, dim)) > tol.structural) {
    throw std::invalid_argument("ChoiState: partial trace over the output is not the identity");
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Tolerances tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() < 1 || !is_square(matrix_)) throw std::invalid_argument("DensityMatrix: not square");
  if (!is_hermitian(matrix_, tol.structural)) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > tol.structural) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
  if (!is_psd(matrix_, tol.spectral)) throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  require_dim(d, "maximally_mixed");
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(int d, int index) {
  require_dim(d, "basis_state");
  if (index < 0 || index >= d) throw std::invalid_argument("basis_state: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("pure: zero vector");
  const ComplexVector v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::random_pure(int d, RandomStream& rng) {
  require_dim(d, "random_pure");
  ComplexVector psi(d);
  for (int i = 0; i < d; ++i) psi(i) = rng.complex_normal();
  return pure(psi);
}

ComplexMatrix weyl_x(int d, int i) {
  require_dim(d, "weyl_x");
  if (i < 0 || i >= d) throw std::invalid_argument("weyl_x: index out of range");
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (int l = 0; l < d; ++l) x(l, (l + i) % d) = 1.0;
  return x;
}

ComplexMatrix weyl_z(int d, int j) {
  require_dim(d, "weyl_z");
  if (j < 0 || j >= d) throw std::invalid_argument("weyl_z: index out of range");
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (int l = 0; l < d; ++l) z(l, l) = std::polar(1.0, kTwoPi * l * j / d);
  return z;
}

ComplexMatrix haar_unitary(int n, RandomStream& rng) {
  require_dim(n, "haar_unitary");
  for (;;) {
    ComplexMatrix g(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) g(r, c) = rng.complex_normal();
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    ComplexVector phases(n);
    bool degenerate = false;
    for (int i = 0; i < n; ++i) {
      const double mag = std::abs(r(i, i));
      if (mag < 1e-300) {
        degenerate = true;
        break;
      }
      phases(i) = r(i, i) / mag;
    }
    if (degenerate) continue;
    return q * phases.asDiagonal();
  }
}

KrausChannel random_channel(int d, int env_dim, RandomStream& rng) {
  require_dim(d, "random_channel");
  if (env_dim == 0) env_dim = d * d;
  if (env_dim != d && env_dim != d * d) {
    throw std::invalid_argument("random_channel: env_dim must be d or d^2");
  }
  // Composite index s * env_dim + e (system (x) environment).
  const ComplexMatrix u = haar_unitary(d * env_dim, rng);
  std::vector<ComplexMatrix> ops;
  ops.reserve(env_dim);
  for (int e = 0; e < env_dim; ++e) {
    ComplexMatrix k(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) k(r, c) = u(r * env_dim + e, c * env_dim);
    }
    ops.push_back(std::move(k));
  }
  return KrausChannel(d, std::move(ops));
}

ComplexMatrix choi_matrix(const std::vector<ComplexMatrix>& kraus_ops) {
  if (kraus_ops.empty()) throw std::invalid_argument("choi_matrix: no Kraus operators");
  const Eigen::Index n = kraus_ops.front().size();
  ComplexMatrix cols(n, static_cast<Eigen::Index>(kraus_ops.size()));
  for (std::size_t i = 0; i < kraus_ops.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = res(kraus_ops[i]);
  return cols * cols.adjoint();
}

ChoiState kraus_to_choi(const KrausChannel& channel) {
  return ChoiState(channel.dim(), choi_matrix(channel.kraus_ops()));
}

KrausChannel choi_to_kraus(const ChoiState& choi, double rank_tol) {
  const int d = choi.dim();
  const HermitianEigen eig = hermitian_eigen(choi.matrix());
  const double top = eig.values.maxCoeff();
  std::vector<ComplexMatrix> ops;
  // Largest eigenvalues first.
  for (Eigen::Index i = eig.values.size(); i-- > 0;) {
    const double lambda = eig.values(i);
    if (!(lambda > rank_tol * top)) continue;
    ops.push_back(unres(std::sqrt(lambda) * eig.vectors.col(i), d, d));
  }
  return KrausChannel(d, std::move(ops));
}

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : channel.kraus_ops()) out.noalias() += k * rho.matrix() * k.adjoint();
  return DensityMatrix(symmetrized(out));
}

}  // namespace chansim
