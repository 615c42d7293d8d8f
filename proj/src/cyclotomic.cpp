#include "dlchar/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dlchar/modarith.hpp"

namespace dlchar::cyclotomic {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

int moebius(std::int64_t n) {
  int r = 1;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      r = -r;
    }
  if (n > 1) r = -r;
  return r;
}

std::mutex cache_mutex;

}  // namespace

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

std::int64_t ramanujan_sum(std::int64_t M, std::int64_t k) {
  const std::int64_t g = std::gcd(mod(k, M), M);
  const std::int64_t n = M / g;
  return moebius(n) * (euler_phi(M) / euler_phi(n));
}

const PrimeData& PrimeData::get(std::int64_t M) {
  static std::map<std::int64_t, PrimeData> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  PrimeData d;
  d.M = M;
  d.l = modarith::prime_one_mod(static_cast<std::uint64_t>(M), std::uint64_t{1} << 62);
  const std::uint64_t z = modarith::root_of_unity(static_cast<std::uint64_t>(M), d.l);
  d.zpow.resize(M);
  std::uint64_t acc = 1;
  for (std::int64_t k = 0; k < M; ++k, acc = modarith::mulmod(acc, z, d.l)) d.zpow[k] = acc;
  for (std::int64_t j = 1; j <= M; ++j)
    if (std::gcd(j, M) == 1) d.units.push_back(j % M);
  return cache.emplace(M, std::move(d)).first->second;
}

const std::vector<mpz_class>& cyclotomic_polynomial(std::int64_t M) {
  static std::map<std::int64_t, std::vector<mpz_class>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
  }
  // x^M - 1 divided by Phi_d for the proper divisors d
  std::vector<mpz_class> num(M + 1, 0);
  num[0] = -1;
  num[M] = 1;
  for (std::int64_t d = 1; d < M; ++d) {
    if (M % d) continue;
    const auto& den = cyclotomic_polynomial(d);
    const std::size_t dd = den.size() - 1;
    std::vector<mpz_class> quo(num.size() - dd, 0);
    for (std::size_t i = num.size(); i-- > dd;) {
      const mpz_class c = num[i];  // den is monic
      quo[i - dd] = c;
      if (c != 0)
        for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    num = std::move(quo);
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(M, std::move(num)).first->second;
}

Cyclo Cyclo::rational(std::int64_t M, const mpq_class& r) {
  Cyclo c(M);
  c.add_term(0, r);
  return c;
}

Cyclo Cyclo::root(std::int64_t M, std::int64_t k, const mpq_class& coeff) {
  Cyclo c(M);
  c.add_term(k, coeff);
  return c;
}

void Cyclo::add_term(std::int64_t k, const mpq_class& c) {
  if (c == 0) return;
  k = mod(k, M_);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const auto& t, std::int64_t v) { return t.first < v; });
  if (it != terms_.end() && it->first == k) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {k, c});
  }
}

void Cyclo::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::int64_t, mpq_class>> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const auto& t) { return t.second == 0; });
  terms_ = std::move(out);
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  if (o.M_ != M_) {
    if (terms_.empty() && M_ == 1) M_ = o.M_;
    else if (!o.terms_.empty() || o.M_ != 1) throw std::invalid_argument("cyclotomic moduli differ");
  }
  for (const auto& [k, c] : o.terms_) terms_.emplace_back(k, c);
  normalize();
  return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) { return *this += o.scaled(-1); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
  if (o.M_ != M_) throw std::invalid_argument("cyclotomic moduli differ");
  Cyclo r(M_);
  r.terms_.reserve(terms_.size() * o.terms_.size());
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) r.terms_.emplace_back((a + b) % M_, ca * cb);
  r.normalize();
  return r;
}

Cyclo Cyclo::scaled(const mpq_class& c) const {
  Cyclo r(M_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

Cyclo Cyclo::conj() const {
  Cyclo r(M_);
  for (const auto& [k, c] : terms_) r.terms_.emplace_back(mod(-k, M_), c);
  r.normalize();
  return r;
}

Cyclo Cyclo::lifted(std::int64_t N) const {
  if (N % M_ != 0) throw std::invalid_argument("lift target is not a multiple");
  Cyclo r(N);
  for (const auto& [k, c] : terms_) r.terms_.emplace_back(k * (N / M_), c);
  return r;
}

std::complex<double> Cyclo::numeric() const {
  std::complex<double> s = 0;
  for (const auto& [k, c] : terms_) s += c.get_d() * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M_));
  return s;
}

bool Cyclo::is_zero() const {
  if (terms_.empty()) return true;
  double mass = 0;
  for (const auto& t : terms_) mass += std::abs(t.second.get_d());
  if (std::abs(numeric()) > 1e-7 * (1 + mass)) return false;

  mpz_class den = 1;
  for (const auto& t : terms_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.second.get_den_mpz_t());
  std::vector<mpz_class> ints;
  mpz_class bound = 0;
  for (const auto& t : terms_) {
    mpz_class a = t.second.get_num() * (den / t.second.get_den());
    bound += abs(a);
    ints.push_back(a);
  }
  const PrimeData& pd = PrimeData::get(M_);
  if (bound >= mpz_class(std::to_string(pd.l))) {
    for (const auto& c : power_basis())
      if (c != 0) return false;
    return true;
  }
  std::vector<std::uint64_t> red;
  const mpz_class lz(std::to_string(pd.l));
  for (const auto& a : ints) {
    mpz_class r = a % lz;
    if (r < 0) r += lz;
    red.push_back(std::stoull(r.get_str()));
  }
  for (std::int64_t j : pd.units) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const std::int64_t e = static_cast<std::int64_t>((static_cast<__int128>(terms_[i].first) * j) % M_);
      s = (s + modarith::mulmod(red[i], pd.zpow[e], pd.l)) % pd.l;
    }
    if (s != 0) return false;
  }
  return true;
}

std::optional<mpq_class> Cyclo::as_rational() const {
  mpq_class r = 0;
  for (const auto& [k, c] : terms_) r += c * ramanujan_sum(M_, k);
  r /= euler_phi(M_);
  if ((*this - rational(M_, r)).is_zero()) return r;
  return std::nullopt;
}

std::vector<mpq_class> Cyclo::power_basis() const {
  const auto& phi = cyclotomic_polynomial(M_);
  const std::size_t deg = phi.size() - 1;
  std::vector<mpq_class> v(std::max<std::size_t>(M_, deg), 0);
  for (const auto& [k, c] : terms_) v[k] += c;
  for (std::size_t i = v.size(); i-- > deg;) {
    const mpq_class c = v[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) v[i - deg + j] -= c * phi[j];
  }
  v.resize(deg);
  return v;
}

std::string Cyclo::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    mpq_class a = c;
    if (!first) os << (a < 0 ? " - " : " + ");
    else if (a < 0) os << "-";
    a = abs(a);
    first = false;
    if (k == 0) {
      os << a.get_str();
      continue;
    }
    if (a != 1) os << a.get_str() << "*";
    os << "z" << M_ << "^" << k;
  }
  return os.str();
}

nlohmann::json to_json(const Cyclo& c) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& v : c.power_basis()) coeffs.push_back(v.get_str());
  return {{"M", c.modulus()}, {"power_basis", coeffs}};
}

}  // namespace dlchar::cyclotomic
