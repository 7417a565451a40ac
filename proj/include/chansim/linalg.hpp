#pragma once

// Dense complex linear algebra used throughout chansim.
//
// Matrices are Eigen dynamic-size complex matrices. Bipartite operators on
// C^d (x) C^d use the index convention (first (x) second), i.e. the composite
// index of |a>|b> is a * d + b.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace chansim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Tolerances for invariant checks. Structural checks (normalization,
/// unitarity, partial traces) use `structural`; spectral checks (PSD,
/// rank) use `spectral`.
struct Tolerances {
  double structural = 1e-10;
  double spectral = 1e-8;
};

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

bool is_square(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

/// True when all eigenvalues of the (symmetrized) matrix are >= -tol.
bool is_psd(const ComplexMatrix& m, double tol);

/// (M + M^dagger) / 2.
ComplexMatrix symmetrized(const ComplexMatrix& m);

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

/// Eigendecomposition of the symmetrized input.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

/// Eigenvalues (ascending) of the symmetrized input.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// Number of eigenvalues above rel_tol * max(|lambda|). A zero matrix has rank 0.
std::size_t numerical_rank(const ComplexMatrix& hermitian, double rel_tol);

/// Principal square root of a PSD matrix; negative round-off eigenvalues are clipped.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Moore-Penrose pseudo-inverse of the PSD square root, restricted to
/// eigenvalues above rel_tol * largest eigenvalue.
ComplexMatrix psd_sqrt_pinv(const ComplexMatrix& m, double rel_tol);

/// Orthonormal basis (columns) of the numerical support of a PSD matrix.
ComplexMatrix psd_support(const ComplexMatrix& m, double rel_tol);

double spectral_norm(const ComplexMatrix& m);
RealVector singular_values(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Row-major vectorization: (a_00, a_01, ..., a_0n, a_10, ...)^T.
ComplexVector res(const ComplexMatrix& a);

/// Inverse of res for a rows x cols matrix.
ComplexMatrix unres(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

/// Half the sum of absolute eigenvalues of (a - b). Inputs must be Hermitian
/// within `hermitian_tol`; throws std::invalid_argument otherwise.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b,
                      double hermitian_tol = 1e-8);

enum class Subsystem { first, second };

/// Partial trace of a d^2 x d^2 operator over one tensor factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, int d, Subsystem traced);

}  // namespace chansim
