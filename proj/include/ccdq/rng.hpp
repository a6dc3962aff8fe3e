#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ccdq {

// Every randomized artifact (instances, shot sampling, optimizer restarts)
// draws from mt19937_64 through the explicit mappings below, so equal seeds
// reproduce bit-identical streams on any platform. The identifier is written
// into generated instance files.
inline constexpr const char* kGeneratorId = "mt19937_64/u53/box-muller";

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller, cosine branch only (two uniforms per
// draw, none cached). log1p(-u1) keeps the log argument inside (0, 1].
inline double standard_normal(std::mt19937_64& gen) {
  double u1 = uniform01(gen);
  double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log1p(-u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Stateless mixer for deriving independent child seeds from a base seed and
// coordinates (Vigna's splitmix64 finalizer).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  return splitmix64(base ^ splitmix64(salt));
}

}  // namespace ccdq
