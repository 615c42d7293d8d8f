#include "dlchar/fq.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace dlchar::fq {

namespace {

// Conway polynomials C_{p,k}, coefficients of x^0..x^{k-1} (the leading 1 is implicit).
const std::map<std::pair<int, int>, std::vector<int>>& conway_table() {
  static const std::map<std::pair<int, int>, std::vector<int>> t = {
      {{2, 1}, {1}},
      {{2, 2}, {1, 1}},
      {{2, 3}, {1, 1, 0}},
      {{2, 4}, {1, 1, 0, 0}},
      {{2, 5}, {1, 0, 1, 0, 0}},
      {{2, 6}, {1, 1, 0, 1, 1, 0}},
      {{3, 1}, {1}},
      {{3, 2}, {2, 2}},
      {{3, 3}, {1, 2, 0}},
      {{3, 4}, {2, 0, 0, 2}},
      {{3, 5}, {1, 2, 0, 0, 0}},
      {{3, 6}, {2, 2, 1, 0, 2, 0}},
      {{5, 1}, {3}},
      {{5, 2}, {2, 4}},
      {{5, 3}, {3, 3, 0}},
      {{5, 4}, {2, 4, 4, 0}},
      {{5, 5}, {3, 4, 0, 0, 0}},
      {{5, 6}, {2, 0, 1, 4, 1, 0}},
      {{7, 1}, {4}},
      {{7, 2}, {3, 6}},
      {{7, 3}, {4, 0, 6}},
      {{7, 4}, {3, 4, 5, 0}},
      {{7, 5}, {4, 1, 0, 0, 0}},
      {{7, 6}, {3, 6, 4, 5, 1, 0}},
      {{11, 1}, {9}},
      {{11, 2}, {2, 7}},
      {{11, 3}, {9, 2, 0}},
      {{11, 4}, {2, 10, 8, 0}},
      {{11, 5}, {9, 0, 10, 0, 0}},
      {{11, 6}, {2, 7, 6, 4, 3, 0}},
  };
  return t;
}


}  // namespace

std::vector<int> conway_polynomial(int p, int k) {
  auto it = conway_table().find({p, k});
  if (it == conway_table().end())
    throw std::invalid_argument("no tabulated primitive polynomial for F_" + std::to_string(p) + "^" +
                                std::to_string(k));
  std::vector<int> m = it->second;
  m.push_back(1);
  return m;
}

std::shared_ptr<const FiniteField> FiniteField::get(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const FiniteField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, k}];
  if (!slot) slot.reset(new FiniteField(p, k));
  return slot;
}

FiniteField::FiniteField(int p, int k) : p_(p), k_(k), modulus_(conway_polynomial(p, k)) {
  size_ = 1;
  for (int i = 0; i < k; ++i) size_ *= p;
  const std::uint32_t n = size_ - 1;
  const std::uint32_t g = k == 1 ? static_cast<std::uint32_t>((p - modulus_[0]) % p) : static_cast<std::uint32_t>(p);
  prim_root_ = k == 1 ? g : 0;
  exp_.assign(n, 0);
  log_.assign(size_, 0);
  std::uint32_t x = 1;
  for (std::uint32_t e = 0; e < n; ++e) {
    if (e > 0 && x == 1) throw std::logic_error("tabulated polynomial is not primitive");
    exp_[e] = x;
    log_[x] = e;
    x = mul_slow(x, g);
  }
  if (x != 1) throw std::logic_error("generator order mismatch");
}

std::vector<int> FiniteField::coefficients(std::uint32_t a) const {
  std::vector<int> c(k_);
  for (int i = 0; i < k_; ++i) {
    c[i] = static_cast<int>(a % p_);
    a /= p_;
  }
  return c;
}

std::uint32_t FiniteField::add(std::uint32_t a, std::uint32_t b) const {
  if (k_ == 1) return (a + b) % p_;
  std::uint32_t r = 0, place = 1;
  for (int i = 0; i < k_; ++i) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return r;
}

std::uint32_t FiniteField::neg(std::uint32_t a) const {
  if (k_ == 1) return (p_ - a) % p_;
  std::uint32_t r = 0, place = 1;
  for (int i = 0; i < k_; ++i) {
    r += ((p_ - a % p_) % p_) * place;
    a /= p_;
    place *= p_;
  }
  return r;
}

std::uint32_t FiniteField::mul_slow(std::uint32_t a, std::uint32_t b) const {
  auto ca = coefficients(a), cb = coefficients(b);
  std::vector<int> prod(2 * k_ - 1, 0);
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
  for (int d = 2 * k_ - 2; d >= k_; --d) {
    const int c = prod[d];
    if (c == 0) continue;
    for (int i = 0; i <= k_; ++i) prod[d - k_ + i] = ((prod[d - k_ + i] - c * modulus_[i]) % p_ + p_) % p_;
  }
  std::uint32_t r = 0;
  for (int i = k_ - 1; i >= 0; --i) r = r * p_ + prod[i];
  return r;
}

std::uint32_t FiniteField::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t s = static_cast<std::uint64_t>(log_[a]) + log_[b];
  return exp_[s % (size_ - 1)];
}

std::uint32_t FiniteField::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero in finite field");
  return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
}

std::uint32_t FiniteField::pow(std::uint32_t a, std::int64_t e) const {
  if (a == 0) {
    if (e < 0) throw std::domain_error("negative power of zero");
    return e == 0 ? 1 : 0;
  }
  const std::int64_t n = size_ - 1;
  std::int64_t r = (static_cast<std::int64_t>(log_[a]) * (((e % n) + n) % n)) % n;
  return exp_[r];
}

std::uint32_t FiniteField::from_int(std::int64_t v) const { return static_cast<std::uint32_t>(((v % p_) + p_) % p_); }

std::int64_t FiniteField::log(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("log of zero");
  return log_[a];
}

std::uint32_t FiniteField::exp(std::int64_t e) const {
  const std::int64_t n = size_ - 1;
  return exp_[((e % n) + n) % n];
}

std::pair<int, int> prime_power(std::int64_t q) {
  if (q < 2) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  std::int64_t p = 2;
  while (q % p != 0) ++p;
  int k = 0;
  std::int64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  return {static_cast<int>(p), k};
}

bool is_prime_power(std::int64_t q) {
  try {
    prime_power(q);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::vector<std::int64_t> prime_powers_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t q = 2; q <= n; ++q)
    if (is_prime_power(q)) out.push_back(q);
  return out;
}

}  // namespace dlchar::fq
