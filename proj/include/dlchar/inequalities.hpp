#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlchar/torus.hpp"

namespace dlchar::inequalities {

enum class Variant { H, L, T };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

// Ratio-type inequality numerator / denominator > rhs.
struct InequalityInstance {
  Variant variant = Variant::H;
  mpz_class numerator;    // |[S]*|
  mpz_class denominator;  // |[S]* \ [S]*_bullet|
  mpz_class rhs;
  std::string congruence;
};

struct Verdict {
  bool holds = false;
  std::optional<mpq_class> lhs_ratio;  // nullopt = infinite (zero denominator)
  std::string lhs_string() const;
};

Verdict evaluate(const InequalityInstance& inst);

// Right-hand sides: 2|W_{G(F_q)}(S)| for H, 2^{2 |W_G| [G]/[G°] - 1} for L.
mpz_class rhs_henniart(const mpz_class& weyl_rational);
mpz_class rhs_lusztig(const mpz_class& weyl_absolute, const mpz_class& component_index);

// Toral generation: does the subset generate Z^2 / relations? Vectors are (a, b) pairs.
bool generates_z2_quotient(const std::vector<std::pair<std::int64_t, std::int64_t>>& relations,
                           const std::vector<std::pair<std::int64_t, std::int64_t>>& elements);

enum class Congruence { All, MinusOneMod3, NotMinusOneMod3 };
std::string congruence_name(Congruence c);
bool in_class(Congruence c, std::int64_t q);

// Verdict of (H) for a Coxeter-type torus where evrs = rs.
Verdict evaluate_torus_H(const torus::NonregularCounter& counter, const torus::RationalTorus& T, std::int64_t q,
                         const mpz_class& weyl_factor);

struct Threshold {
  bool all_q = false;
  std::int64_t q_min = 0;  // smallest tested q in the class from which the inequality holds
  std::string to_string() const;  // "any" or "q>=Q"
};

// Scans prime powers q <= q_max in the congruence class; throws "non-monotone over tested range".
Threshold min_q_threshold(const torus::NonregularCounter& counter, const torus::RationalTorus& T,
                          const mpz_class& weyl_factor, Congruence cls, std::int64_t q_max = 199);

// Weyl factor |W_{G(F_q)}(S)|: twisted centralizer when |W| fits the cap, else the Coxeter number.
mpz_class weyl_factor(const torus::RationalTorus& T);

struct TableRow {
  std::string type;
  std::string twist;
  Congruence congruence;
  Threshold g0_s;
  Threshold g0_g;
};

// Expected threshold cells: "any" or "q>t".
struct ExpectedRow {
  std::string type;
  Congruence congruence;
  std::string g0_s;
  std::string g0_g;
};
const std::vector<ExpectedRow>& expected_exceptional_table();

// Does a computed threshold describe the same set of tested q as the printed cell?
bool threshold_matches(const Threshold& t, const std::string& cell, Congruence cls, std::int64_t q_max = 199);

std::vector<TableRow> compute_exceptional_table(std::int64_t q_max = 199);

// Computes the table and compares it with the expected cells; throws listing any mismatching cell.
std::vector<TableRow> reproduce_exceptional_table(std::int64_t q_max = 199);

std::string table_csv(const std::vector<TableRow>& rows);

}  // namespace dlchar::inequalities
