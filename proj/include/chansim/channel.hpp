#pragma once

// Channel representations: Kraus operators, Choi states, density matrices.
//
// Choi states are unnormalized (trace d) and ordered (output (x) input):
// C = sum_i res(K_i) res(K_i)^dagger with row-major res. Trace preservation
// then reads partial_trace(C, d, Subsystem::first) == identity.

#include <vector>

#include "chansim/linalg.hpp"
#include "chansim/random.hpp"

namespace chansim {

/// A CPTP map given by d x d Kraus operators. Construction validates
/// sum_i K_i^dagger K_i == 1 within `tol`.
class KrausChannel {
 public:
  KrausChannel(int dim, std::vector<ComplexMatrix> kraus_ops, double tol = Tolerances{}.structural);

  int dim() const { return dim_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

  /// max |sum K^dagger K - 1|
  double normalization_error() const;

 private:
  int dim_;
  std::vector<ComplexMatrix> ops_;
};

/// Choi-Jamiolkowski matrix of a channel (d^2 x d^2, trace d).
class ChoiState {
 public:
  ChoiState(int dim, ComplexMatrix matrix, Tolerances tol = {});

  int dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  int dim_;
  ComplexMatrix matrix_;
};

/// Hermitian, PSD, unit-trace d x d operator.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, Tolerances tol = {});

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

  static DensityMatrix maximally_mixed(int d);
  static DensityMatrix basis_state(int d, int index);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix random_pure(int d, RandomStream& rng);

 private:
  ComplexMatrix matrix_;
};

/// Shift operator X_i = sum_l |l><l+i| (indices mod d).
ComplexMatrix weyl_x(int d, int i);

/// Clock operator Z_j = diag(exp(i 2 pi l j / d)).
ComplexMatrix weyl_z(int d, int j);

/// Haar-random n x n unitary (QR of a complex Ginibre matrix with the
/// R-diagonal phase correction).
ComplexMatrix haar_unitary(int n, RandomStream& rng);

/// Random channel from a Haar-random dilation U on C^d (x) C^env_dim:
/// K_i = <i|_env U |0>_env. env_dim must be d or d^2; 0 selects d^2.
KrausChannel random_channel(int d, int env_dim, RandomStream& rng);

ChoiState kraus_to_choi(const KrausChannel& channel);

/// Raw Choi matrix sum_i res(K_i) res(K_i)^dagger without validation.
ComplexMatrix choi_matrix(const std::vector<ComplexMatrix>& kraus_ops);

/// Kraus operators K_i = unres(sqrt(lambda_i) v_i) for eigenpairs with
/// lambda_i > rank_tol * lambda_max.
KrausChannel choi_to_kraus(const ChoiState& choi, double rank_tol = 1e-9);

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho);

}  // namespace chansim
