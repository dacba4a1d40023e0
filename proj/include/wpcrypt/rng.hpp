#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "error.hpp"

namespace wpc {

// xoshiro256** seeded through splitmix64. Every draw in the library goes
// through this type so that keys and ciphertexts are bit-reproducible on any
// platform; nothing here touches std::random_device or the <random>
// distributions (whose outputs are implementation-defined).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

  // Independent stream for (seed, index); used for per-bit encryption so the
  // result does not depend on processing order.
  static Rng derive(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t t = index ^ 0xd1b54a32d192ed03ULL;
    std::uint64_t b = splitmix64(t);
    return Rng(a ^ (b * 0x9e3779b97f4a7c15ULL) ^ index);
  }

  void reseed(std::uint64_t seed) noexcept {
    seed_ = seed;
    std::uint64_t x = seed;
    for (auto& w : state_) w = splitmix64(x);
  }

  std::uint64_t seed() const noexcept { return seed_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept {
    std::uint64_t const result = rotl(state_[1] * 5, 7) * 9;
    std::uint64_t const t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, bound), bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) {
      throw Error(Errc::invalid_argument, "Rng::below(0)");
    }
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t const threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform on the closed interval [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) {
      throw Error(Errc::invalid_argument, "Rng::uniform with empty interval");
    }
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    return lo + static_cast<std::int64_t>(below(span));
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool coin() noexcept { return (next() >> 63) != 0; }

  friend bool operator==(Rng const&, Rng const&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> state_{};
};

// Inclusive integer interval used by every parameter range.
struct Range {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool empty() const noexcept { return hi < lo; }
  bool contains(std::int64_t v) const noexcept { return lo <= v && v <= hi; }
  std::int64_t draw(Rng& rng) const { return rng.uniform(lo, hi); }

  friend bool operator==(Range const&, Range const&) = default;
};

}  // namespace wpc
