#pragma once

// Approximating a target Choi state by a convex mixture of generalized
// extreme channels, minimizing the trace distance from independent random
// starts. Probabilities are a softmax of free logits.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chansim/blocks.hpp"
#include "chansim/channel.hpp"
#include "chansim/extreme.hpp"
#include "chansim/random.hpp"

namespace chansim {

struct DecompositionParams {
  int dim = 0;
  std::vector<double> logits;              // one per component
  std::vector<ExtremeParams> components;

  int terms() const { return static_cast<int>(components.size()); }

  /// softmax(logits); sums to 1 and every entry is strictly positive.
  std::vector<double> probabilities() const;

  /// Throws std::invalid_argument on inconsistent shapes.
  void validate() const;

  /// Layout: logits, then each component's ExtremeParams::flat().
  std::vector<double> flat() const;
  static DecompositionParams from_flat(int d, int terms, std::span<const double> values);
  static std::size_t flat_size(int d, int terms);

  /// All components at identity, equal logits.
  static DecompositionParams identity(int d, int terms);

  /// Start distribution of the optimizer: angles uniform in [0, 2pi),
  /// logits standard normal.
  static DecompositionParams random(int d, int terms, RandomStream& rng);
};

/// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> logits);

enum class LocalSolver {
  adam,     // analytic subgradient with Adam steps
  simplex,  // Nelder-Mead, derivative-free
};

std::string local_solver_name(LocalSolver s);
LocalSolver local_solver_from_name(const std::string& name);

struct OptimizerConfig {
  double epsilon = 0.1;              // target diamond error; converged iff D_t <= epsilon / 2
  int max_restarts = 20;
  int max_iters_per_restart = 2000;
  std::uint64_t seed = 0;
  int terms = 0;                     // 0 selects d
  LocalSolver solver = LocalSolver::adam;
  double learning_rate = 0.02;       // adam: initial step size
  double initial_step = 0.5;         // simplex: starting edge (radians / logit units)
  double ftol = 1e-10;               // simplex collapse: objective spread ...
  double xtol = 1e-7;                // ... and vertex spread
  bool stop_when_converged = false;  // skip remaining restarts once D_t <= epsilon / 2
  int threads = 0;                   // 0 reads CHANSIM_THREADS, default 1
  bool keep_traces = false;          // store the best-so-far curve of every restart

  /// Defaults: d=2 -> 20 x 2000, d=3 -> 60 x 5000, d>=4 -> 100 x 10000.
  static OptimizerConfig defaults_for(int d);

  /// Throws std::invalid_argument when epsilon <= 0, a budget is < 1 or a step size is not positive.
  void validate() const;
};

struct RestartOutcome {
  double best = 0.0;
  int iters = 0;
  long evals = 0;  // objective (or objective + gradient) evaluations
  std::vector<double> trace;  // best-so-far per iteration (keep_traces only)
};

struct DecompositionResult {
  DecompositionParams params;
  double achieved_dt = 0.0;
  double diamond_bound = 0.0;  // 2 * achieved_dt
  bool converged = false;
  int restarts_used = 0;
  int best_restart = -1;
  std::vector<RestartOutcome> restarts;
};

/// sum_i p_i extreme_choi(component_i)
ChoiState mixture_choi(const DecompositionParams& p);

/// trace_distance(target, mixture_choi(p)); throws on dimension mismatch.
double objective(const ChoiState& target, const DecompositionParams& p);

/// Allocation-free objective over flat parameter vectors.
class MixtureObjective {
 public:
  MixtureObjective(const ChoiState& target, int terms);
  double operator()(std::span<const double> flat);
  int dim() const { return d_; }
  int terms() const { return terms_; }

 private:
  int d_;
  int terms_;
  ComplexMatrix target_;
  ComplexMatrix mix_;
  ExtremeChoiEvaluator eval_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver_;
  std::vector<double> probs_;
};

/// Trace distance together with a subgradient, evaluated analytically
/// through the softmax, the unitary blocks and the multiplexer angles.
/// At eigenvalue crossings of the difference matrix the sign of a zero
/// eigenvalue is taken as zero.
class MixtureGradient {
 public:
  MixtureGradient(const ChoiState& target, int terms);
  ~MixtureGradient();
  MixtureGradient(MixtureGradient&&) noexcept;

  double operator()(std::span<const double> flat, std::span<double> grad);
  int dim() const { return d_; }
  int terms() const { return terms_; }

 private:
  struct Component;
  int d_;
  int terms_;
  ComplexMatrix target_;
  std::vector<Component> parts_;
  ComplexMatrix delta_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver_;
  std::vector<double> probs_;

  void forward(Component& c, std::span<const double> params);
  void backward(Component& c, std::span<const double> params, const ComplexMatrix& g, double scale,
                std::span<double> grad);
};

/// Deterministic in (target, cfg): restart r draws from a stream split off
/// cfg.seed by r, and ties go to the lowest restart index.
DecompositionResult optimize(const ChoiState& target, const OptimizerConfig& cfg);

struct ComponentReport {
  double probability = 0.0;
  ExtremalityReport extremality;
  GenExtCertificate certificate;
};

struct DecompositionReport {
  double achieved_dt = 0.0;
  double diamond_bound = 0.0;
  double distinguishing_probability = 0.0;  // (1 + D_t) / 2
  double blockwise_residual = 0.0;
  bool converged = false;
  std::vector<ComponentReport> components;
};

DecompositionReport decompose_report(const DecompositionResult& result, const ChoiState& target);

/// Report for any parameter set (D_t recomputed against the target).
DecompositionReport decompose_report(const DecompositionParams& params, const ChoiState& target, double epsilon);

}  // namespace chansim
