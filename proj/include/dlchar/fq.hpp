#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dlchar::fq {

// F_{p^k} built on the tabulated Conway polynomial for (p, k); p <= 11, k <= 6.
// Elements are encoded as integers sum c_i p^i of their coefficient vectors
// (c_i the coefficient of x^i); the generator x is primitive, so log tables exist.
class FiniteField {
 public:
  static std::shared_ptr<const FiniteField> get(int p, int k);

  int p() const { return p_; }
  int k() const { return k_; }
  std::uint32_t size() const { return size_; }
  const std::vector<int>& modulus() const { return modulus_; }  // monic, low degree first

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::int64_t e) const;
  std::uint32_t generator() const { return k_ == 1 ? prim_root_ : p_; }  // x, or a primitive root mod p
  std::uint32_t from_int(std::int64_t v) const;  // image of an integer (prime field)
  std::int64_t log(std::uint32_t a) const;       // discrete log base generator()
  std::uint32_t exp(std::int64_t e) const;
  std::vector<int> coefficients(std::uint32_t a) const;

  // Polynomial multiplication without tables; used to build and to cross-check the tables.
  std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const;

 private:
  FiniteField(int p, int k);
  int p_, k_;
  std::uint32_t size_;
  std::uint32_t prim_root_ = 0;
  std::vector<int> modulus_;
  std::vector<std::uint32_t> exp_, log_;
};

// The tabulated polynomial (low degree first, monic); throws for (p, k) outside the table.
std::vector<int> conway_polynomial(int p, int k);

class FqElement {
 public:
  FqElement() = default;
  FqElement(std::shared_ptr<const FiniteField> f, std::uint32_t v) : f_(std::move(f)), v_(v) {}
  FqElement operator+(const FqElement& o) const { return {f_, f_->add(v_, o.v_)}; }
  FqElement operator-(const FqElement& o) const { return {f_, f_->sub(v_, o.v_)}; }
  FqElement operator*(const FqElement& o) const { return {f_, f_->mul(v_, o.v_)}; }
  FqElement inverse() const { return {f_, f_->inv(v_)}; }
  FqElement pow(std::int64_t e) const { return {f_, f_->pow(v_, e)}; }
  bool operator==(const FqElement& o) const { return v_ == o.v_; }
  bool is_zero() const { return v_ == 0; }
  std::uint32_t raw() const { return v_; }
  const FiniteField& field() const { return *f_; }

 private:
  std::shared_ptr<const FiniteField> f_;
  std::uint32_t v_ = 0;
};

// Factor a prime power q = p^k; throws if q is not a prime power.
std::pair<int, int> prime_power(std::int64_t q);
bool is_prime_power(std::int64_t q);
std::vector<std::int64_t> prime_powers_up_to(std::int64_t n);

}  // namespace dlchar::fq
