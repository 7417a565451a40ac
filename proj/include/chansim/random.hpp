#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "chansim/linalg.hpp"

namespace chansim {

/// Seeded pseudo-random stream. Child streams derived with `split` depend
/// only on the parent seed and the tag, never on how much of the parent has
/// been consumed, so parallel work can draw from independent streams
/// deterministically.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  RandomStream split(std::uint64_t tag) const;
  RandomStream split(std::initializer_list<std::uint64_t> tags) const;

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi)
  double normal();                           // standard normal
  Complex complex_normal();                  // (N(0,1) + i N(0,1)) / sqrt(2)
  std::size_t discrete(const std::vector<double>& weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Well-known stream tags for the named sub-streams used by the CLI.
namespace stream_tag {
inline constexpr std::uint64_t channel = 0x6368616eULL;
inline constexpr std::uint64_t optimizer = 0x6f707469ULL;
inline constexpr std::uint64_t sampler = 0x73616d70ULL;
inline constexpr std::uint64_t state = 0x73746174ULL;
}  // namespace stream_tag

}  // namespace chansim
