#pragma once

// Local minimizers used by the decomposer.
//
// nelder_mead: simplex descent with dimension-adaptive coefficients
// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n);
// the simplex is rebuilt around the best vertex when it collapses.
//
// adam_descent: first-order steps with Adam moment estimates on a
// (sub)gradient; the rate is constant for the first half of the budget and
// decays geometrically to final_fraction * learning_rate over the second.

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace chansim {

struct NelderMeadOptions {
  int max_iters = 1000;        // reflect/expand/contract/shrink steps
  double initial_step = 0.5;   // edge length of the starting simplex
  double ftol = 1e-12;         // collapse: f spread below ftol ...
  double xtol = 1e-10;         // ... and every vertex within xtol of the best
  double stop_below = -std::numeric_limits<double>::infinity();  // early exit once f <= stop_below
};

struct LocalSearchResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  int iters = 0;
  long evals = 0;
  int rebuilds = 0;
  std::vector<double> best_trace;  // best value at the start and after every iteration (iters + 1 entries)
};

using Objective = std::function<double(std::span<const double>)>;

LocalSearchResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt,
                             bool keep_trace = false);

struct AdamOptions {
  int max_iters = 1000;
  double learning_rate = 0.02;
  double final_fraction = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double stop_below = -std::numeric_limits<double>::infinity();
};

/// Returns f(x) and writes a (sub)gradient into the second argument.
using GradientObjective = std::function<double(std::span<const double>, std::span<double>)>;

/// Tracks and returns the best point visited.
LocalSearchResult adam_descent(const GradientObjective& f, std::vector<double> x0, const AdamOptions& opt,
                               bool keep_trace = false);

}  // namespace chansim
