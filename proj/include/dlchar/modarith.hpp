#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

// 64-bit modular helpers shared by the character-table and cyclotomic code.
namespace dlchar::modarith {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }  // p prime

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (n % p == 0) return n == p;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      f.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) f.push_back(n);
  return f;
}

// Smallest prime l = 1 (mod m) with l > bound.
inline std::uint64_t prime_one_mod(std::uint64_t m, std::uint64_t bound) {
  std::uint64_t t = bound / m + 1;
  for (;; ++t) {
    const std::uint64_t l = t * m + 1;
    if (l <= bound) continue;
    if (is_prime(l)) return l;
  }
}

// An element of exact order m in F_l^x (m | l - 1); the smallest base that works.
inline std::uint64_t root_of_unity(std::uint64_t m, std::uint64_t l) {
  if ((l - 1) % m != 0) throw std::invalid_argument("order does not divide l - 1");
  const auto primes = prime_factors(m);
  for (std::uint64_t a = 2; a < l; ++a) {
    const std::uint64_t z = powmod(a, (l - 1) / m, l);
    bool ok = true;
    for (auto r : primes)
      if (powmod(z, m / r, l) == 1) ok = false;
    if (ok) return z;
  }
  throw std::runtime_error("no root of unity found");
}

}  // namespace dlchar::modarith
