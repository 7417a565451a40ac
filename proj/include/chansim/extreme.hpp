#pragma once

// Generalized extreme channels built from a multiplexer dilation.
//
// A channel is described by K_i = W F_i V where F_i = <i|_a U |0>_a and
//
//   U = (prod_{i=d-1..1} CX_i) (prod_{j=d-1..1} prod_{k=j-1..0} M_jk(alpha_jk, beta_jk)),
//   M_jk(alpha, beta) = CG_jk(alpha) CG_kj(-beta).
//
// The two-qudit space is ordered (system (x) ancilla): index s * d + a.
// CG_jk(theta) = |j><j|_s (x) G_jk(theta) rotates the ancilla under system
// control, CX_i = X_i (x) |i><i|_a shifts the system under ancilla control.
// V and W are products of SU(d) blocks; the prior blocks are applied in list
// order (prior[0] first), likewise the posterior blocks.

#include <span>
#include <utility>
#include <vector>

#include "chansim/channel.hpp"
#include "chansim/linalg.hpp"
#include "chansim/random.hpp"

namespace chansim {

/// Number of SU(d) blocks per extreme channel,
/// ceil((d-1)(d^2+d+1) / (d(d+1))).
int kappa(int d);

/// Free parameters of a d-term decomposition:
/// kappa d (d^2-1) + d (d^2-d) + (d-1).
int parameter_count(int d);

/// Number of real parameters that specify a generic qudit channel, d^4 - d^2.
int channel_parameter_count(int d);

int prior_block_count(int d);      // ceil(kappa/2)
int posterior_block_count(int d);  // floor(kappa/2)

/// Multiplexer index pairs (j, k), j > k, in the written product order
/// (j = d-1..1, k = j-1..0). The rightmost pair is applied first.
std::vector<std::pair<int, int>> multiplexer_pairs(int d);

struct MuxAngles {
  double alpha = 0.0;
  double beta = 0.0;
};

struct ExtremeParams {
  int dim = 0;
  std::vector<MuxAngles> mux_angles;           // one per multiplexer_pairs(dim) entry
  std::vector<std::vector<double>> prior;      // blocks of d^2-1 reals
  std::vector<std::vector<double>> posterior;  // blocks of d^2-1 reals

  /// All angles zero: the identity channel.
  static ExtremeParams identity(int d);

  /// Mux angles uniform in [0, 2pi); unitary parameters uniform in [0, 2pi).
  static ExtremeParams random(int d, RandomStream& rng);

  /// Throws std::invalid_argument when shapes or values are inconsistent.
  void validate() const;

  /// Flat layout: (alpha, beta) per multiplexer, then prior blocks, then posterior blocks.
  std::vector<double> flat() const;
  static ExtremeParams from_flat(int d, std::span<const double> values);
  static std::size_t flat_size(int d);
};

/// SU(d) element from d^2-1 reals: d(d-1)/2 two-level rotations
/// [[cos t, -e^{i p} sin t], [e^{-i p} sin t, cos t]] on (j, k), j < k,
/// each consuming (t, p), followed by d-1 diagonal phases with the last
/// diagonal entry fixing det = 1.
ComplexMatrix unitary_from_params(int d, std::span<const double> block);

ComplexMatrix prior_unitary(const ExtremeParams& p);      // V
ComplexMatrix posterior_unitary(const ExtremeParams& p);  // W

/// Givens rotation G_jk(theta) on C^d.
ComplexMatrix givens(int d, int j, int k, double theta);

/// Real ancilla amplitudes u(i, l) with U' |l>_s |0>_a = sum_i u(i, l) |l>_s |i>_a,
/// obtained by propagating |0>_a through the multiplexers for each system level.
RealMatrix multiplexer_amplitudes(const ExtremeParams& p);

/// Full d^2 x d^2 dilation unitary U built from the gate definitions.
ComplexMatrix dilation_unitary(const ExtremeParams& p);

/// F_i = <i|_a U |0>_a read off the dilation unitary.
std::vector<ComplexMatrix> f_operators(const ExtremeParams& p);

/// K_i = W F_i V; exactly d operators.
KrausChannel extreme_kraus(const ExtremeParams& p);

/// b_{i mu nu} = sum_{k,l} conj(a_ik) a_{i+mu,l} exp(i 2pi [mu l + nu (l-k)] / d),
/// with a_ij the Weyl coefficients of E_i = sum_j a_ij Z_j. Then
/// F_i^dagger F_{i+mu} = sum_nu b_{i mu nu} |nu><nu+mu|.
class BTensor {
 public:
  explicit BTensor(int dim);

  int dim() const { return dim_; }
  Complex& operator()(int i, int mu, int nu);
  Complex operator()(int i, int mu, int nu) const;

  /// B_mu with rows i and columns nu.
  ComplexMatrix matrix(int mu) const;

  /// sum_nu b_{i mu nu} |nu><nu+mu|
  ComplexMatrix product_operator(int i, int mu) const;

 private:
  int dim_;
  std::vector<Complex> entries_;
};

/// Weyl coefficients a_ij recovered from the diagonal amplitudes
/// (inverse discrete Fourier transform of u(i, .)).
ComplexMatrix weyl_coefficients(const ExtremeParams& p);

BTensor b_tensor(const ExtremeParams& p);

enum class Extremality { extreme, quasi_extreme };

struct ExtremalityReport {
  Extremality classification = Extremality::quasi_extreme;
  std::vector<double> det_magnitudes;  // |det B_mu| after unit-Frobenius normalization
  double min_det = 0.0;
};

ExtremalityReport check_extremality(const ExtremeParams& p, double tol = 1e-8);

/// Choi matrix of the F operators alone (V = W = 1), assembled entrywise
/// from the diagonal amplitudes; at most d nonzeros per row.
ComplexMatrix core_choi_matrix(const ExtremeParams& p);

/// Choi state of extreme_kraus(p): the core matrix conjugated by W (x) V^T.
ChoiState extreme_choi(const ExtremeParams& p);

/// Allocation-free evaluator used in optimization loops: accumulates
/// weight * Choi(extreme channel) for flat parameter vectors.
class ExtremeChoiEvaluator {
 public:
  explicit ExtremeChoiEvaluator(int d);

  /// out += weight * C^g(params)
  void accumulate(std::span<const double> params, double weight, ComplexMatrix& out);

 private:
  int d_;
  int prior_blocks_;
  int posterior_blocks_;
  RealMatrix amps_;
  ComplexMatrix v_, w_, block_, fv_, k_, cols_;
  RealVector anc_;
};

}  // namespace chansim
