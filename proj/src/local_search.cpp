#include "chansim/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace chansim {

namespace {

struct Simplex {
  std::size_t n;
  std::vector<std::vector<double>> x;
  std::vector<double> f;
  std::vector<std::size_t> order;  // vertex indices sorted by f
  std::vector<double> sum;         // sum of all vertices

  void sort() {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
  }
  void resum() {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (const auto& v : x) {
      for (std::size_t i = 0; i < n; ++i) sum[i] += v[i];
    }
  }
};

}  // namespace

LocalSearchResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt,
                             bool keep_trace) {
  if (x0.empty()) throw std::invalid_argument("nelder_mead: empty start point");
  if (opt.max_iters < 1 || !(opt.initial_step > 0.0)) throw std::invalid_argument("nelder_mead: bad options");
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dn;
  const double rho = 0.75 - 1.0 / (2.0 * dn);
  const double sigma = 1.0 - 1.0 / dn;

  LocalSearchResult res;
  auto eval = [&](const std::vector<double>& p) {
    ++res.evals;
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  Simplex s{n, std::vector<std::vector<double>>(n + 1), std::vector<double>(n + 1), std::vector<std::size_t>(n + 1),
            std::vector<double>(n, 0.0)};
  auto build = [&](const std::vector<double>& base, double fbase, double step) {
    s.x[0] = base;
    s.f[0] = fbase;
    for (std::size_t i = 0; i < n; ++i) {
      s.x[i + 1] = base;
      s.x[i + 1][i] += step;
      s.f[i + 1] = eval(s.x[i + 1]);
    }
    s.resum();
    s.sort();
  };

  build(x0, eval(x0), opt.initial_step);
  if (keep_trace) res.best_trace.push_back(s.f[s.order[0]]);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto point = [&](double t, std::vector<double>& out) {
    // centroid + t * (centroid - worst)
    const auto& w = s.x[s.order[n]];
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (centroid[i] - w[i]);
  };
  auto replace_worst = [&](const std::vector<double>& p, double fp) {
    const std::size_t w = s.order[n];
    for (std::size_t i = 0; i < n; ++i) s.sum[i] += p[i] - s.x[w][i];
    s.x[w] = p;
    s.f[w] = fp;
  };

  while (res.iters < opt.max_iters && s.f[s.order[0]] > opt.stop_below) {
    ++res.iters;
    const std::size_t worst = s.order[n];
    for (std::size_t i = 0; i < n; ++i) centroid[i] = (s.sum[i] - s.x[worst][i]) / dn;
    const double fbest = s.f[s.order[0]];
    const double fsecond = s.f[s.order[n - 1]];
    const double fworst = s.f[worst];

    point(alpha, xr);
    const double fr = eval(xr);
    if (fr < fbest) {
      point(alpha * gamma, xe);
      const double fe = eval(xe);
      if (fe < fr) {
        replace_worst(xe, fe);
      } else {
        replace_worst(xr, fr);
      }
    } else if (fr < fsecond) {
      replace_worst(xr, fr);
    } else {
      const bool outside = fr < fworst;
      point(outside ? alpha * rho : -rho, xc);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fworst)) {
        replace_worst(xc, fc);
      } else {
        const auto& best = s.x[s.order[0]];
        for (std::size_t v = 0; v <= n; ++v) {
          if (v == s.order[0]) continue;
          for (std::size_t i = 0; i < n; ++i) s.x[v][i] = best[i] + sigma * (s.x[v][i] - best[i]);
          s.f[v] = eval(s.x[v]);
        }
        s.resum();
      }
    }
    s.sort();
    if (keep_trace) res.best_trace.push_back(s.f[s.order[0]]);

    // Collapse test; rebuild around the best vertex if budget remains.
    const std::size_t b = s.order[0];
    if (s.f[s.order[n]] - s.f[b] <= opt.ftol && res.iters < opt.max_iters) {
      double spread = 0.0;
      for (std::size_t v = 0; v <= n; ++v) {
        for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(s.x[v][i] - s.x[b][i]));
      }
      if (spread <= opt.xtol) {
        const std::vector<double> base = s.x[b];
        build(base, s.f[b], opt.initial_step);
        ++res.rebuilds;
      }
    }
  }
  res.x = s.x[s.order[0]];
  res.f = s.f[s.order[0]];
  return res;
}

LocalSearchResult adam_descent(const GradientObjective& f, std::vector<double> x0, const AdamOptions& opt,
                               bool keep_trace) {
  if (x0.empty()) throw std::invalid_argument("adam_descent: empty start point");
  if (opt.max_iters < 1 || !(opt.learning_rate > 0.0) || !(opt.final_fraction > 0.0)) {
    throw std::invalid_argument("adam_descent: bad options");
  }
  const std::size_t n = x0.size();
  std::vector<double> x = std::move(x0), g(n), m(n, 0.0), v(n, 0.0);
  LocalSearchResult res;
  res.x = x;
  const int half = opt.max_iters / 2;
  const double decay = std::log(opt.final_fraction) / std::max(1, opt.max_iters - half);
  double b1 = 1.0, b2 = 1.0;
  for (int it = 0; it < opt.max_iters; ++it) {
    const double fx = f(x, g);
    ++res.evals;
    if (fx < res.f) {
      res.f = fx;
      res.x = x;
    }
    if (keep_trace) res.best_trace.push_back(res.f);
    if (res.f <= opt.stop_below) break;
    ++res.iters;
    b1 *= opt.beta1;
    b2 *= opt.beta2;
    const double rate = opt.learning_rate * (it < half ? 1.0 : std::exp(decay * (it - half)));
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g[i];
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g[i] * g[i];
      const double mh = m[i] / (1.0 - b1);
      const double vh = v[i] / (1.0 - b2);
      x[i] -= rate * mh / (std::sqrt(vh) + 1e-12);
    }
  }
  // Score the final iterate too.
  if (res.iters == opt.max_iters) {
    const double fx = f(x, g);
    ++res.evals;
    if (fx < res.f) {
      res.f = fx;
      res.x = x;
    }
    if (keep_trace) res.best_trace.push_back(res.f);
  }
  return res;
}

}  // namespace chansim
