#include "chansim/random.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace chansim {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seeded_engine(seed)) {}

RandomStream RandomStream::split(std::uint64_t tag) const { return RandomStream(mix(seed_ ^ mix(tag))); }

RandomStream RandomStream::split(std::initializer_list<std::uint64_t> tags) const {
  RandomStream out = *this;
  for (std::uint64_t t : tags) out = out.split(t);
  return out;
}

double RandomStream::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double RandomStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RandomStream::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Complex RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

std::size_t RandomStream::discrete(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("discrete: empty weight vector");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("discrete: weights must have positive sum");
  double u = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Round-off landed past the end: return the last index with positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace chansim
