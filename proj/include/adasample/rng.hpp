#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "adasample/errors.hpp"

namespace adasample {

// One splitmix64 step; used to whiten seeds and derive sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. The raw generator is std::mt19937_64, whose
// output sequence is pinned by the standard; bounded integers and gaussians
// are produced by our own rejection sampling and Box-Muller, because the
// std distributions are implementation-defined and would break trace
// reproducibility across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  // Independent stream derived from this stream's seed and a label; does not
  // advance this stream.
  RngStream substream(std::uint64_t label) const {
    return RngStream(splitmix64(seed_ ^ splitmix64(label + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [0, n); rejection sampling, no modulo bias.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw ConfigError("bounded draw needs n >= 1");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double next_gaussian() {
    const double u = 1.0 - next_double();  // (0, 1], keeps the log finite
    const double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace adasample
