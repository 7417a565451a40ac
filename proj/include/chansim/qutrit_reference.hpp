#pragma once

// Reference qutrit parameterization with closed-form Kraus operators and an
// explicit SU(3) Euler form, plus the published worked example: a random
// qutrit channel, its three-term approximation and the Table 1 parameters.

#include <array>

#include "chansim/channel.hpp"

namespace chansim {

/// SU(3) in the Euler form with angles theta_1..3 in [0, pi/2] and phases
/// phi_1..5 in [0, 2pi].
struct Su3Angles {
  std::array<double, 3> theta{};
  std::array<double, 5> phi{};
};

ComplexMatrix su3_matrix(const Su3Angles& angles);

/// One generalized extreme qutrit channel: angles (a..f) of the closed-form
/// F operators, prior rotations R3 then R2, posterior rotation R1.
struct QutritRefParams {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
  Su3Angles r1, r2, r3;

  /// Throws std::invalid_argument for out-of-range angles.
  void validate() const;
};

/// F_0, F_1, F_2 in closed form (no rotations).
std::array<ComplexMatrix, 3> qutrit_reference_f(const QutritRefParams& q);

/// K_i = R1 F_i R2 R3.
KrausChannel qutrit_reference_kraus(const QutritRefParams& q);

struct ReferenceMixture {
  std::array<QutritRefParams, 3> components;
  std::array<double, 3> probabilities{};
};

/// The three fitted components and their probabilities as tabulated.
const ReferenceMixture& table1();

/// Published per-component Choi eigenvalues (three nonzero values each).
const std::array<std::array<double, 3>, 3>& table1_eigenvalues();

/// sum_i p_i Choi(component i). The tabulated probabilities sum to 1 only to
/// four decimals, so the result is validated at 1e-3.
ChoiState table1_mixture();

/// The randomly generated target channel as printed (four decimals).
ChoiState appendix_b_target();

/// The printed approximation C' (four decimals).
ChoiState appendix_b_approximation();

/// Printed eigenvalues of the target and of the approximation.
const std::array<double, 9>& appendix_b_target_eigenvalues();
const std::array<double, 9>& appendix_b_approximation_eigenvalues();

/// Published trace distance between target and approximation.
inline constexpr double kAppendixBTraceDistance = 0.046;

/// Tolerances for matrices transcribed at four decimals.
inline constexpr Tolerances kPrintedTolerances{1e-3, 1e-3};

}  // namespace chansim
