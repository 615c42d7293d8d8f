#include "dlchar/gln_tame.hpp"

#include <numeric>
#include <stdexcept>

#include "dlchar/fq.hpp"
#include "dlchar/inequalities.hpp"

namespace dlchar::gln_tame {

namespace {

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  __int128 r = 1 % m, x = ((b % m) + m) % m;
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (INT64_MAX / b)) throw std::overflow_error("q^f too large for the cyclic model");
    r *= b;
  }
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

int moebius(int n) {
  int r = 1;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      r = -r;
    }
  if (n > 1) r = -r;
  return r;
}

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

mpz_class TameTorusModel::to_N(std::int64_t log_m) const { return mpz_class(static_cast<long>(mod(log_m, M))) * (N / M); }

TameTorusModel build_tame_model(int n, int e, int f, std::int64_t q, ZetaChoice zeta) {
  if (e < 1 || f < 1 || n != e * f) throw std::invalid_argument("need n = e f with e, f >= 1");
  TameTorusModel m;
  m.n = n;
  m.e = e;
  m.f = f;
  m.q = q;
  m.p = fq::prime_power(q).first;
  if (e % m.p == 0) throw std::invalid_argument("wild ramification");
  m.kE = ipow(q, f) - 1;
  std::int64_t k = 0;
  switch (zeta.kind) {
    case ZetaChoice::Kind::Trivial: k = 0; break;
    case ZetaChoice::Kind::GeneratorPower: k = mod(zeta.value, m.kE); break;
    case ZetaChoice::Kind::Order:
      if (zeta.value < 1 || m.kE % zeta.value != 0) throw std::invalid_argument("inconsistent zeta");
      k = m.kE / zeta.value;
      break;
  }
  m.d = m.kE / std::gcd(k, m.kE);
  const std::int64_t ed = static_cast<std::int64_t>(e) * m.d;
  m.m = f;
  while (powmod(q, m.m, ed) != 1 % ed) {
    m.m += f;
    if (m.m > 100000) throw std::logic_error("no ambient degree found");
  }
  mpz_ui_pow_ui(m.N.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(m.m));
  m.N -= 1;
  m.M = std::lcm(m.kE, ed);
  m.gamma = m.M / m.kE;
  m.log_zeta_EF = mod(k * m.gamma, m.M);
  // zeta_{E/F} has order d, so its log is a multiple of M/d, hence of e
  if (m.log_zeta_EF % e != 0) throw std::logic_error("zeta_{E/F} has no e-th root in the model");
  m.log_zeta_EFe = m.log_zeta_EF / e;
  m.log_zeta_e = m.M / e;
  return m;
}

ShallowTester::ShallowTester(const TameTorusModel& model) : m_(model) {
  std::int64_t qj = 1;
  for (int j = 0; j < m_.f; ++j) {
    qj1_.push_back(mod(qj - 1, m_.M));
    qj = static_cast<std::int64_t>(static_cast<__int128>(qj) * m_.q % m_.M);
  }
}

bool ShallowTester::is_shallow(std::int64_t l, std::int64_t t) const {
  const std::int64_t M = m_.M;
  const __int128 Y = m_.y_log(mod(t, m_.kE));
  const std::int64_t lm = mod(l, M);
  for (int j = 0; j < m_.f; ++j) {
    const std::int64_t lhs = static_cast<std::int64_t>(Y * qj1_[j] % M);
    // rhs = -l ((q^j - 1) log zeta_{E/F,e} + i log zeta_e)
    const std::int64_t base = static_cast<std::int64_t>(static_cast<__int128>(qj1_[j]) * m_.log_zeta_EFe % M);
    for (int i = 0; i < m_.e; ++i) {
      if (i == 0 && j == 0) continue;
      const std::int64_t inner = mod(base + static_cast<std::int64_t>(static_cast<__int128>(i) * m_.log_zeta_e % M), M);
      const std::int64_t rhs = mod(-static_cast<std::int64_t>(static_cast<__int128>(lm) * inner % M), M);
      if (lhs == rhs) return false;
    }
  }
  return true;
}

bool is_shallow(const TameTorusModel& model, std::int64_t l, std::int64_t t) { return ShallowTester(model).is_shallow(l, t); }

std::int64_t shallow_lower_bound(const TameTorusModel& m) { return m.kE - (m.q - 1) * m.e * (m.f - 1); }

VeryRegularCounts count_very_regular(const TameTorusModel& m) {
  ShallowTester tester(m);
  VeryRegularCounts c;
  for (std::int64_t l = 0; l < m.e * m.d; ++l) {
    std::int64_t cnt = 0;
    for (std::int64_t t = 0; t < m.kE; ++t) cnt += tester.is_shallow(l, t);
    c.per_l[l] = cnt;
  }
  // [S]* has representatives l in [0, e) and y modulo k_F^x; shallowness is Z*-invariant.
  std::int64_t shallow_reps = 0;
  for (std::int64_t l = 0; l < m.e; ++l) shallow_reps += c.per_l[l];
  if (shallow_reps % (m.q - 1) != 0) throw std::logic_error("shallow set is not k_F^x-stable");
  c.star_evrs = shallow_reps / (m.q - 1);
  c.star_total = mpz_class(static_cast<long>(m.e)) * (m.kE / (m.q - 1));

  inequalities::InequalityInstance inst;
  inst.variant = inequalities::Variant::H;
  inst.numerator = c.star_total;
  inst.denominator = c.star_total - c.star_evrs;
  inst.rhs = inequalities::rhs_henniart(m.f);  // |W_{G(F_q)}(S)| = f
  c.H_holds = inequalities::evaluate(inst).holds;

  // [S]* = Z^2 / <(e, -k), (0, q^f - 1), (0, (q^f - 1)/(q - 1))> in coordinates (l, log_gamma y)
  const std::int64_t k = m.log_zeta_EF / m.gamma;
  std::vector<std::pair<std::int64_t, std::int64_t>> rel = {{m.e, -k}, {0, m.kE}, {0, m.kE / (m.q - 1)}};
  std::vector<std::pair<std::int64_t, std::int64_t>> elems;
  const std::int64_t coset = m.kE / (m.q - 1);
  for (std::int64_t l = 0; l < m.e; ++l)
    for (std::int64_t t = 0; t < coset; ++t)
      if (tester.is_shallow(l, t)) elems.emplace_back(l, t);
  c.T_holds = inequalities::generates_z2_quotient(rel, elems);
  return c;
}

bool check_star_invariance(const TameTorusModel& m) {
  ShallowTester tester(m);
  const std::int64_t k = m.log_zeta_EF / m.gamma;  // zeta_{E/F} = gamma^k
  const std::int64_t kF = m.kE / (m.q - 1);        // k_F^x generated by gamma^kF
  for (std::int64_t l = 0; l < m.e * m.d; ++l)
    for (std::int64_t t = 0; t < m.kE; ++t) {
      const bool s = tester.is_shallow(l, t);
      if (tester.is_shallow(l + m.e, t - k) != s) return false;
      if (tester.is_shallow(l, t + kF) != s) return false;
    }
  return true;
}

bool asymptotic_H_criterion(int e, int f) {
  if (e <= 1 || f <= 1) throw std::invalid_argument("asymptotic_H_criterion needs e > 1 and f > 1");
  mpq_class lhs(e, e - euler_phi(e));
  lhs.canonicalize();
  return lhs > 2 * f;
}

SlPglResult sl_pgl_variants(const TameTorusModel& m) {
  ShallowTester tester(m);
  SlPglResult r;
  // norm-one elements of S: valuation forces l = 0; N(y) = y^{e (q^f-1)/(q-1)} for y in k_E^x
  const std::int64_t norm_exp = static_cast<std::int64_t>(m.e) * (m.kE / (m.q - 1));
  for (std::int64_t t = 0; t < m.kE && !r.sl_shallow_exists; ++t)
    if ((static_cast<__int128>(t) * norm_exp) % m.kE == 0 && tester.is_shallow(0, t)) r.sl_shallow_exists = true;
  // PGL: S_ad(F_q) = <varpi_E>/<varpi_F> x k_E^x/k_F^x, Z* trivial
  const std::int64_t coset = m.kE / (m.q - 1);
  r.pgl_total = mpz_class(static_cast<long>(m.e)) * coset;
  std::int64_t cnt = 0;
  for (std::int64_t l = 0; l < m.e; ++l)
    for (std::int64_t t = 0; t < coset; ++t) cnt += tester.is_shallow(l, t);
  r.pgl_evrs = cnt;
  return r;
}

mpz_class unramified_nonshallow(int n, std::int64_t q) {
  // subgroup orders q^d - 1 for proper divisors d of n; |intersection| = q^{gcd} - 1
  std::vector<int> divs;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) divs.push_back(d);
  mpz_class total = 0;
  for (std::uint32_t mask = 1; mask < (1u << divs.size()); ++mask) {
    int g = 0;
    for (std::size_t i = 0; i < divs.size(); ++i)
      if (mask >> i & 1) g = std::gcd(g, divs[i]);
    mpz_class sz;
    mpz_ui_pow_ui(sz.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(g));
    sz -= 1;
    total += (std::popcount(mask) % 2 ? 1 : -1) * sz;
  }
  return total;
}

mpz_class degree_exactly_n(int n, std::int64_t q) {
  mpz_class s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      mpz_class qd;
      mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(d));
      s += moebius(n / d) * qd;
    }
  return s;
}

std::vector<std::pair<int, std::int64_t>> gln_unramified_exceptions(int n_max, std::int64_t q_max) {
  std::vector<std::pair<int, std::int64_t>> out;
  for (int n = 2; n <= n_max; ++n)
    for (std::int64_t q : fq::prime_powers_up_to(q_max)) {
      mpz_class qn;
      mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n));
      inequalities::InequalityInstance inst;
      inst.variant = inequalities::Variant::H;
      inst.numerator = (qn - 1) / (q - 1);
      inst.denominator = unramified_nonshallow(n, q) / (q - 1);
      inst.rhs = inequalities::rhs_henniart(n);
      if (!inequalities::evaluate(inst).holds) out.emplace_back(n, q);
    }
  return out;
}

nlohmann::json counts_json(const TameTorusModel& m, const VeryRegularCounts& c) {
  nlohmann::json j;
  j["n"] = m.n;
  j["e"] = m.e;
  j["f"] = m.f;
  j["q"] = m.q;
  j["d"] = m.d;
  j["m"] = m.m;
  j["N"] = m.N.get_str();
  nlohmann::json per = nlohmann::json::array();  // indexed by l
  for (const auto& [l, cnt] : c.per_l) per.push_back(cnt);
  j["per_l"] = per;
  j["star_total"] = c.star_total.get_str();
  j["star_evrs"] = c.star_evrs.get_str();
  j["H_holds"] = c.H_holds;
  j["T_holds"] = c.T_holds;
  return j;
}

}  // namespace dlchar::gln_tame
