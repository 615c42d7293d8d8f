#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>

// Seed for randomized property tests; override with DLCHAR_SEED.
inline std::uint64_t test_seed() {
  if (const char* s = std::getenv("DLCHAR_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611;
}

inline std::mt19937_64 test_rng(std::uint64_t salt = 0) { return std::mt19937_64(test_seed() ^ (salt * 0x9e3779b97f4a7c15ull)); }
