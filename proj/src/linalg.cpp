#include "chansim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chansim {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_square(const ComplexMatrix& m) { return m.rows() == m.cols(); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return is_square(m) && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (!is_square(m)) return false;
  return max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())) <= tol;
}

bool is_psd(const ComplexMatrix& m, double tol) {
  if (!is_square(m)) return false;
  if (m.size() == 0) return true;
  return hermitian_eigenvalues(m).minCoeff() >= -tol;
}

ComplexMatrix symmetrized(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (!is_square(m)) throw std::invalid_argument("hermitian_eigen: matrix is not square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(m), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigen: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!is_square(m)) throw std::invalid_argument("hermitian_eigenvalues: matrix is not square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: solver failed");
  return solver.eigenvalues();
}

std::size_t numerical_rank(const ComplexMatrix& hermitian, double rel_tol) {
  if (hermitian.size() == 0) return 0;
  const RealVector ev = hermitian_eigenvalues(hermitian);
  const double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0;
  return static_cast<std::size_t>((ev.array().abs() > rel_tol * scale).count());
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix psd_sqrt_pinv(const ComplexMatrix& m, double rel_tol) {
  const HermitianEigen eig = hermitian_eigen(m);
  const double top = eig.values.size() ? eig.values.maxCoeff() : 0.0;
  RealVector inv = RealVector::Zero(eig.values.size());
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      if (eig.values(i) > rel_tol * top) inv(i) = 1.0 / std::sqrt(eig.values(i));
    }
  }
  return eig.vectors * inv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix psd_support(const ComplexMatrix& m, double rel_tol) {
  const HermitianEigen eig = hermitian_eigen(m);
  const double top = eig.values.size() ? eig.values.maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      if (eig.values(i) > rel_tol * top) keep.push_back(i);
    }
  }
  ComplexMatrix basis(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(keep[c]);
  return basis;
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector res(const ComplexMatrix& a) {
  ComplexVector v(a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  }
  return v;
}

ComplexMatrix unres(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw std::invalid_argument("unres: size mismatch");
  ComplexMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
  }
  return a;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b, double hermitian_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  if (!is_hermitian(a, hermitian_tol) || !is_hermitian(b, hermitian_tol)) {
    throw std::invalid_argument("trace_distance: inputs must be Hermitian");
  }
  return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int d, Subsystem traced) {
  if (d < 1 || m.rows() != static_cast<Eigen::Index>(d) * d || m.cols() != m.rows()) {
    throw std::invalid_argument("partial_trace: matrix is not d^2 x d^2 for d = " + std::to_string(d));
  }
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Complex acc = 0.0;
      for (int t = 0; t < d; ++t) {
        acc += traced == Subsystem::first ? m(t * d + a, t * d + b) : m(a * d + t, b * d + t);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

}  // namespace chansim
