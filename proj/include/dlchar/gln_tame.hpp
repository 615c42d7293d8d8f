#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace dlchar::gln_tame {

// Choice of zeta_{E/F} in k_E^x, where gamma generates k_E^x = F_{q^f}^x.
struct ZetaChoice {
  enum class Kind { Trivial, GeneratorPower, Order } kind = Kind::Trivial;
  std::int64_t value = 0;  // k for gamma^k, or the requested order d
  static ZetaChoice trivial() { return {}; }
  static ZetaChoice generator_power(std::int64_t k) { return {Kind::GeneratorPower, k}; }
  static ZetaChoice of_order(std::int64_t d) { return {Kind::Order, d}; }
};

// Cyclic discrete-log model. All roots of unity live in the cyclic subgroup of order
// M = lcm(q^f - 1, e d) of F_{q^m}^x; it embeds in Z/N (N = q^m - 1) by multiplication by N/M.
struct TameTorusModel {
  int n = 0, e = 0, f = 0;
  std::int64_t q = 0;
  int p = 0;
  std::int64_t d = 1;  // order of zeta_{E/F}
  int m = 0;           // least multiple of f with e d | q^m - 1
  mpz_class N;         // q^m - 1
  std::int64_t M = 0;  // working modulus
  std::int64_t kE = 0;          // q^f - 1
  std::int64_t gamma = 0;       // log of the generator of k_E^x (in Z/M)
  std::int64_t log_zeta_EF = 0;
  std::int64_t log_zeta_e = 0;
  std::int64_t log_zeta_EFe = 0;

  std::int64_t kE_elements() const { return kE; }
  std::int64_t y_log(std::int64_t t) const { return (t % kE) * gamma % M; }  // gamma^t
  mpz_class to_N(std::int64_t log_m) const;                                 // residue in Z/N
};

TameTorusModel build_tame_model(int n, int e, int f, std::int64_t q, ZetaChoice zeta = ZetaChoice::trivial());

// Condition (*) for the element varpi_E^l y, with y = gamma^t.
class ShallowTester {
 public:
  explicit ShallowTester(const TameTorusModel& model);
  bool is_shallow(std::int64_t l, std::int64_t t) const;

 private:
  const TameTorusModel& m_;
  std::vector<std::int64_t> qj1_;  // (q^j - 1) mod M, j < f
};

bool is_shallow(const TameTorusModel& model, std::int64_t l, std::int64_t t);

struct VeryRegularCounts {
  std::map<std::int64_t, std::int64_t> per_l;  // l in [0, e d)
  mpz_class star_total;                        // e (q^f - 1)/(q - 1)
  mpz_class star_evrs;                         // Z*-classes of shallow elements
  bool H_holds = false;
  bool T_holds = false;
};

VeryRegularCounts count_very_regular(const TameTorusModel& model);

// Lower bound (q^f - 1) - (q - 1) e (f - 1) on shallow y for each l prime to e.
std::int64_t shallow_lower_bound(const TameTorusModel& model);

// Exhaustive Z*-invariance of shallowness: (l, y) -> (l + e, zeta^{-1} y) and y -> c y, c in k_F^x.
bool check_star_invariance(const TameTorusModel& model);

// e / (e - phi(e)) > 2f: the limiting shallow ratio clears the (H) bound.
bool asymptotic_H_criterion(int e, int f);

struct SlPglResult {
  bool sl_shallow_exists = false;
  mpz_class pgl_total;
  mpz_class pgl_evrs;
};
SlPglResult sl_pgl_variants(const TameTorusModel& model);

// Unramified case counts without enumeration: non-shallow y form the union of the
// subgroups F_{q^d}^x, d | n, d < n, counted by inclusion-exclusion inside Z/(q^n - 1).
mpz_class unramified_nonshallow(int n, std::int64_t q);
// Independent closed form: number of elements of degree exactly n, sum_{d|n} mu(n/d) q^d.
mpz_class degree_exactly_n(int n, std::int64_t q);

std::vector<std::pair<int, std::int64_t>> gln_unramified_exceptions(int n_max, std::int64_t q_max);

std::int64_t euler_phi(std::int64_t n);

nlohmann::json counts_json(const TameTorusModel& model, const VeryRegularCounts& c);

}  // namespace dlchar::gln_tame
