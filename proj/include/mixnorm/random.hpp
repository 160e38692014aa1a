#pragma once

// Counter-based randomness: every draw is a pure function of (seed, stream,
// counter), so generation is order-independent and can be partitioned freely.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mixnorm::rng {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) noexcept {
  return mix64(mix64(mix64(seed) ^ stream) ^ (counter * 0xd1342543de82ef95ULL));
}

/// Sub-seed for an independent stream (restart, trial, form index, ...).
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                               std::uint64_t b = 0) noexcept {
  return hash(seed ^ 0x6a09e667f3bcc909ULL, a, b);
}

/// Uniform double in [0, 1).
constexpr double unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double sign(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t counter) noexcept {
  return (hash(seed, stream, counter) >> 63) != 0 ? -1.0 : 1.0;
}

inline std::complex<double> unimodular(std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t counter) {
  return std::polar(1.0, 2.0 * std::numbers::pi * unit(hash(seed, stream, counter)));
}

}  // namespace mixnorm::rng
