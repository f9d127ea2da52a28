#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rmtlab {

// Scrambles a seed so that nearby stream ids produce unrelated state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One reproducible sampling stream.  Stream r of a base seed is seed ^ r,
// so replicas can be split deterministically across workers.
//
// Distribution transforms are implemented here instead of through
// std::*_distribution: the standard leaves those algorithms unspecified,
// and we want identical seeds to give identical variates everywhere.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  static RngStream for_stream(std::uint64_t base_seed, std::uint64_t stream) {
    return RngStream(base_seed ^ stream);
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool coin() { return (gen_() >> 63) != 0; }

  // Box-Muller, one normal per two uniforms.
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 gen_;
};

}  // namespace rmtlab
