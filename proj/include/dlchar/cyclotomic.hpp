#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dlchar::cyclotomic {

// Reduction data for Q(zeta_M) at one large prime l = 1 (mod M): the images of zeta
// under all phi(M) embeddings zeta -> z^j, j a unit mod M. An algebraic integer whose
// coefficient sum of absolute values stays below l and which vanishes at every one of
// these primes is zero, because its norm would be a nonzero integer divisible by l^phi(M).
struct PrimeData {
  std::int64_t M = 1;
  std::uint64_t l = 0;
  std::vector<std::uint64_t> zpow;   // z^k for k in [0, M)
  std::vector<std::int64_t> units;  // j coprime to M
  static const PrimeData& get(std::int64_t M);
};

// Element of Q(zeta_M) as a sparse combination sum_k c_k zeta_M^k (k in [0, M)).
// The representation is not canonical; equality goes through is_zero().
class Cyclo {
 public:
  Cyclo() = default;
  explicit Cyclo(std::int64_t M) : M_(M) {}
  static Cyclo rational(std::int64_t M, const mpq_class& r);
  static Cyclo root(std::int64_t M, std::int64_t k, const mpq_class& c = 1);

  std::int64_t modulus() const { return M_; }
  const std::vector<std::pair<std::int64_t, mpq_class>>& terms() const { return terms_; }

  Cyclo& operator+=(const Cyclo& o);
  Cyclo& operator-=(const Cyclo& o);
  Cyclo operator+(const Cyclo& o) const { return Cyclo(*this) += o; }
  Cyclo operator-(const Cyclo& o) const { return Cyclo(*this) -= o; }
  Cyclo operator-() const { return scaled(-1); }
  Cyclo operator*(const Cyclo& o) const;
  Cyclo scaled(const mpq_class& c) const;
  Cyclo conj() const;
  // Lift to Q(zeta_N) for a multiple N of M.
  Cyclo lifted(std::int64_t N) const;
  void add_term(std::int64_t k, const mpq_class& c);

  bool is_zero() const;
  bool operator==(const Cyclo& o) const { return (*this - o).is_zero(); }
  bool operator!=(const Cyclo& o) const { return !(*this == o); }

  std::optional<mpq_class> as_rational() const;
  std::complex<double> numeric() const;
  // Coordinates in the power basis 1, zeta, ..., zeta^{phi(M)-1} after reduction mod Phi_M.
  std::vector<mpq_class> power_basis() const;
  std::string to_string() const;

 private:
  void normalize();
  std::int64_t M_ = 1;
  std::vector<std::pair<std::int64_t, mpq_class>> terms_;  // sorted by exponent, nonzero
};

// Coefficients of the cyclotomic polynomial Phi_M, low degree first.
const std::vector<mpz_class>& cyclotomic_polynomial(std::int64_t M);
std::int64_t euler_phi(std::int64_t n);
// Ramanujan sum c_M(k) = trace of zeta_M^k down to Q.
std::int64_t ramanujan_sum(std::int64_t M, std::int64_t k);

nlohmann::json to_json(const Cyclo& c);

}  // namespace dlchar::cyclotomic
