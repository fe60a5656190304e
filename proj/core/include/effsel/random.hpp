#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace effsel {

// Seed derivation. Every random stream in the library is a std::mt19937_64
// seeded from (root seed, subsystem label, indices) through these mixers, so
// results never depend on thread scheduling or call order.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a, used to turn a subsystem label into a seed offset.
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept {
  return splitmix64(seed ^ label_hash(label));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) noexcept {
  return splitmix64(splitmix64(seed) ^ a);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return derive_seed(derive_seed(seed, a), b);
}

// Uniform integer in [0, n) with Lemire's multiply-shift rejection method.
// Unbiased, and avoids the division std::uniform_int_distribution performs on
// every call; the bootstrap draws billions of indices.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) noexcept {
  __extension__ typedef unsigned __int128 u128;
  std::uint64_t x = rng();
  u128 m = static_cast<u128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = rng();
      m = static_cast<u128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace effsel
