#pragma once

// Randomized execution of a decomposition: per shot draw a component index,
// run that component's circuit on the input state and average the outputs.

#include <vector>

#include "chansim/channel.hpp"
#include "chansim/circuit.hpp"
#include "chansim/decomposer.hpp"
#include "chansim/random.hpp"

namespace chansim {

/// sum_i p_i E_i(rho)
DensityMatrix exact_mixture_apply(const DecompositionParams& decomp, const DensityMatrix& rho);

/// One realization: rho (x) |0><0| through the circuit. The ancilla is
/// measured (Born rule) before the first classically controlled gate that
/// follows an ancilla-touching gate, and traced out at the end.
DensityMatrix run_circuit_on_state(const CircuitDescription& c, const DensityMatrix& rho, RandomStream& rng);

struct SampleReport {
  long shots = 0;
  std::vector<long> empirical_counts;
  DensityMatrix estimated_state;
  DensityMatrix exact_state;
  double deviation = 0.0;  // trace distance between estimated and exact
};

SampleReport sample_circuits(const std::vector<CircuitDescription>& circuits, const std::vector<double>& probabilities,
                             const DensityMatrix& exact, const DensityMatrix& rho, long shots, RandomStream& rng);

/// Throws std::invalid_argument if shots < 1 or dimensions differ.
SampleReport sample_channel(const DecompositionParams& decomp, const DensityMatrix& rho, long shots,
                            RandomStream& rng);

}  // namespace chansim
