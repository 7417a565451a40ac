#include "chansim/sampler.hpp"

#include <stdexcept>

namespace chansim {

namespace {

bool touches_ancilla(const GateOp& g) { return g.target == Wire::ancilla; }

void conjugate(const GateOp& g, int d, ComplexMatrix& m) {
  apply_gate(g, d, m);
  m.adjointInPlace();
  apply_gate(g, d, m);
}

void measure_ancilla(int d, ComplexMatrix& m, RandomStream& rng) {
  std::vector<double> weights(static_cast<std::size_t>(d), 0.0);
  for (int s = 0; s < d; ++s) {
    for (int a = 0; a < d; ++a) weights[static_cast<std::size_t>(a)] += std::max(0.0, m(s * d + a, s * d + a).real());
  }
  const int outcome = static_cast<int>(rng.discrete(weights));
  const double p = weights[static_cast<std::size_t>(outcome)];
  for (int r = 0; r < d * d; ++r) {
    for (int c = 0; c < d * d; ++c) {
      if (r % d != outcome || c % d != outcome) m(r, c) = 0.0;
    }
  }
  m /= p;
}

}  // namespace

DensityMatrix exact_mixture_apply(const DecompositionParams& decomp, const DensityMatrix& rho) {
  decomp.validate();
  if (rho.dim() != decomp.dim) throw std::invalid_argument("exact_mixture_apply: dimension mismatch");
  const auto probs = decomp.probabilities();
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const KrausChannel ch = extreme_kraus(decomp.components[i]);
    for (const auto& k : ch.kraus_ops()) {
      out.noalias() += probs[i] * (k * rho.matrix() * k.adjoint());
    }
  }
  return DensityMatrix(symmetrized(out));
}

DensityMatrix run_circuit_on_state(const CircuitDescription& c, const DensityMatrix& rho, RandomStream& rng) {
  c.validate();
  const int d = c.dim;
  if (rho.dim() != d) throw std::invalid_argument("run_circuit_on_state: dimension mismatch");
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (int r = 0; r < d; ++r) {
    for (int s = 0; s < d; ++s) m(r * d, s * d) = rho.matrix()(r, s);
  }
  bool measured = false;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::classically_controlled_swap && !measured) {
      measure_ancilla(d, m, rng);
      measured = true;
    }
    if (touches_ancilla(g)) measured = false;
    conjugate(g, d, m);
  }
  const ComplexMatrix out = partial_trace(m, d, Subsystem::second);
  return DensityMatrix(symmetrized(out / out.trace().real()));
}

SampleReport sample_circuits(const std::vector<CircuitDescription>& circuits, const std::vector<double>& probabilities,
                             const DensityMatrix& exact, const DensityMatrix& rho, long shots, RandomStream& rng) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be >= 1");
  if (circuits.empty() || circuits.size() != probabilities.size()) {
    throw std::invalid_argument("sample: one probability per circuit required");
  }
  for (const auto& c : circuits) {
    if (c.dim != rho.dim()) throw std::invalid_argument("sample: dimension mismatch");
  }
  if (exact.dim() != rho.dim()) throw std::invalid_argument("sample: dimension mismatch");
  std::vector<long> counts(circuits.size(), 0);
  ComplexMatrix acc = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (long s = 0; s < shots; ++s) {
    const std::size_t i = rng.discrete(probabilities);
    ++counts[i];
    acc += run_circuit_on_state(circuits[i], rho, rng).matrix();
  }
  DensityMatrix estimate(symmetrized(acc / static_cast<double>(shots)));
  const double dev = trace_distance(estimate.matrix(), exact.matrix());
  return SampleReport{shots, std::move(counts), std::move(estimate), exact, dev};
}

SampleReport sample_channel(const DecompositionParams& decomp, const DensityMatrix& rho, long shots,
                            RandomStream& rng) {
  if (shots < 1) throw std::invalid_argument("sample_channel: shots must be >= 1");
  const DensityMatrix exact = exact_mixture_apply(decomp, rho);
  std::vector<CircuitDescription> circuits;
  for (const auto& c : decomp.components) circuits.push_back(synthesize(c));
  return sample_circuits(circuits, decomp.probabilities(), exact, rho, shots, rng);
}

}  // namespace chansim
