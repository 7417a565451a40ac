#pragma once

// Block view of Choi matrices: C = sum_{k,l} |k><l| (x) C_kl with the
// output index selecting the block. Contraction factors
// B_kl = C_k^{-1/2} C_kl C_l^{-1/2} on the supports, unitarity and chain
// checks for channels of Kraus rank <= d, and blockwise mixture residuals.

#include <map>
#include <utility>
#include <vector>

#include "chansim/channel.hpp"

namespace chansim {

struct ChoiBlocks {
  int dim = 0;
  std::vector<ComplexMatrix> diag;                        // C_k = C_kk
  std::map<std::pair<int, int>, ComplexMatrix> offdiag;  // C_kl, k < l

  /// C_kl for any k, l (lower blocks via adjoint).
  ComplexMatrix block(int k, int l) const;

  /// Reassembled d^2 x d^2 matrix.
  ComplexMatrix assemble() const;

  /// Largest eigenvalue over the diagonal blocks; the scale for rank cutoffs.
  double scale() const;
};

ChoiBlocks choi_blocks(const ChoiState& choi);

/// Same partition for any d^2 x d^2 matrix (used for PSD matrices that are
/// not channel Choi states). Throws std::invalid_argument on shape mismatch.
ChoiBlocks choi_blocks(int d, const ComplexMatrix& m);

inline constexpr double kBlockRankTolerance = 1e-8;

struct Contraction {
  ComplexMatrix factor;           // B_kl (zero off the supports)
  ComplexMatrix restricted;       // B_kl in support bases of C_k (rows) and C_l (columns)
  RealVector singular_values;     // of `restricted`, descending
  double max_singular = 0.0;
  double off_support = 0.0;       // spectral norm of C_kl outside supp(C_k) x supp(C_l)
  bool support_consistent = true;
};

/// Throws std::invalid_argument unless 0 <= k < l < d.
Contraction extract_contraction(const ChoiBlocks& blocks, int k, int l,
                                double rank_tol = kBlockRankTolerance);

struct PairDiagnostics {
  int k = 0;
  int l = 0;
  RealVector singular_values;
  double unitarity_defect = 0.0;  // max |sigma - 1| on the support
  double chain_residual = 0.0;    // ||B_kl - B_{k,k+1} ... B_{l-1,l}||
};

struct GenExtCertificate {
  bool is_genext = false;
  int rank = 0;
  std::vector<int> block_ranks;
  bool rank_ok = false;
  bool unitary_ok = false;
  bool chain_ok = false;
  double max_unitarity_defect = 0.0;
  double chain_residual = 0.0;
  std::vector<PairDiagnostics> pairs;
};

/// Passing means the matrix has the block structure of a channel with
/// Kraus rank <= d: rank <= d, every B_kl unitary on the supports and
/// B_kl equal to the product of neighbouring factors. One-directional.
GenExtCertificate certify_generalized_extreme(const ChoiState& choi, double tol = 1e-7);

/// Max entrywise deviation over all blocks of C - sum_i p_i C_i.
/// Throws std::invalid_argument if the weights are not a probability vector
/// (each in [0, 1], sum within 1e-9 of 1) or dimensions differ.
double blockwise_mixture_residual(const ChoiState& target,
                                  const std::vector<std::pair<double, ChoiState>>& decomposition);

}  // namespace chansim
