#pragma once

// Two-qudit circuits (system (x) ancilla, index s * d + a) realizing
// generalized extreme channels: prior rotation, multiplexers, the
// ancilla-controlled shift chain and the posterior rotation.

#include <string>
#include <vector>

#include "chansim/extreme.hpp"
#include "chansim/linalg.hpp"

namespace chansim {

enum class Wire { system, ancilla };

enum class GateKind {
  givens,                       // G_jk(angle) on `target`
  diagonal_phase,               // diag(exp(i phases)) on `target`
  two_level_swap,               // X_jk on `target`
  controlled_givens,            // G_jk(angle) on `target` when the other wire is in `controls`
  controlled_swap,              // X_jk on `target` when the other wire is in `controls`
  classically_controlled_swap,  // X_jk on the system when the measured ancilla is in `controls`
};

struct GateOp {
  GateKind kind = GateKind::givens;
  Wire target = Wire::system;
  int j = 0;
  int k = 1;
  double angle = 0.0;
  std::vector<int> controls;   // levels of the other wire
  std::vector<double> phases;  // diagonal_phase only, one per level

  /// Throws std::invalid_argument when indices, controls or angles are invalid for dimension d.
  void validate(int d) const;
};

struct CircuitDescription {
  int dim = 0;
  std::vector<GateOp> gates;  // application order
  int classical_dits = 0;     // ancilla measurements used by classically controlled gates

  void validate() const;
};

/// Gate sequence for K_i = W F_i V; every classically controlled gate is
/// equivalent to its coherent controlled version under deferred measurement.
CircuitDescription synthesize(const ExtremeParams& p);

/// The five-gate realization of M_jk(alpha, beta) (application order).
std::vector<GateOp> multiplexer_gates(int j, int k, double alpha, double beta);

/// Ancilla-controlled shift chain prod_i CX_i as two-level swaps
/// (application order), flagged classically controlled.
std::vector<GateOp> shift_chain_gates(int d);

/// Transpositions (p, q), applied in order, whose product is X_i.
std::vector<std::pair<int, int>> shift_transpositions(int d, int i);

/// Two-level Givens rotations plus diagonal phases realizing a d x d
/// unitary on `wire`; always exactly d(d-1)/2 Givens rotations.
std::vector<GateOp> unitary_gates(const ComplexMatrix& u, Wire wire);

/// Left-multiplies `m` (d^2 rows) by the gate, reading classical controls coherently.
void apply_gate(const GateOp& g, int d, ComplexMatrix& m);

/// d x d matrix of a single-wire gate (givens, diagonal_phase, two_level_swap).
ComplexMatrix single_wire_matrix(const GateOp& g, int d);

/// Product of the gates in application order.
ComplexMatrix circuit_unitary(const CircuitDescription& c);

struct GateCensus {
  int givens = 0;
  int controlled_givens = 0;
  int diagonal_phase = 0;
  int two_level_swap = 0;
  int controlled_swap = 0;
  int classically_controlled_swap = 0;

  int givens_class() const { return givens + controlled_givens; }
  int controlled_swaps() const { return controlled_swap + classically_controlled_swap; }
};

GateCensus gate_counts(const CircuitDescription& c);

/// Number of bits per continuous gate in the compiled-length model.
inline constexpr double kCompileLogBase = 2.0;

struct CostEstimate {
  int continuous_gates = 0;
  long compiled_estimate = 0;  // continuous_gates * ceil(log2(d^2 / epsilon))
};

/// Order-of-magnitude model of the compiled gate count, not a compiler.
/// Throws std::invalid_argument unless 0 < epsilon < 1.
CostEstimate cost_estimate(int d, double epsilon);

/// 2 * ||U - U_approx|| (spectral norm); throws on dimension mismatch or non-unitary input.
double unitary_diamond_bound(const ComplexMatrix& u, const ComplexMatrix& u_approx);

std::string gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

/// One gate per line.
std::string circuit_listing(const CircuitDescription& c);

}  // namespace chansim
