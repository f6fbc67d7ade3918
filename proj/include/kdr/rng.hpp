#ifndef KDR_RNG_HPP
#define KDR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace kdr {

// Counter-based generator (scheme "kdr-splitmix-v1"): every output is a pure
// function of (seed, stream, counter), so sequences are reproducible across
// platforms and independent of thread scheduling. Streams give callers
// independent substreams from one user-facing seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  std::uint64_t next_u64() { return mix(base_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); multiply-shift, no rejection loop so counter
  // consumption stays fixed.
  std::uint64_t next_below(std::uint64_t n) {
    return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace kdr

#endif
