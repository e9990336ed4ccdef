#ifndef INSTGEN_UTIL_RNG_HPP
#define INSTGEN_UTIL_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace instgen {

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a(std::string_view text)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

/// Seed for attempt `run` of problem `name` under a sweep's base seed.
constexpr std::uint64_t attempt_seed(std::uint64_t base, std::string_view name, std::uint64_t run)
{
  return splitmix64(splitmix64(base) ^ fnv1a(name) ^ splitmix64(run + 0x51ed2701ULL));
}

/// Seeded generator with a bounded-uniform draw that does not depend on the
/// standard library's distribution implementations.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n)
  {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t x = engine_();
    while (x >= limit) { x = engine_(); }
    return x % n;
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

}  // namespace instgen

#endif
