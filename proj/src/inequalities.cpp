#include "dlchar/inequalities.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dlchar/fq.hpp"

namespace dlchar::inequalities {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::H: return "H";
    case Variant::L: return "L";
    case Variant::T: return "T";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "H") return Variant::H;
  if (s == "L") return Variant::L;
  if (s == "T") return Variant::T;
  throw std::invalid_argument("unknown inequality variant: " + s);
}

std::string Verdict::lhs_string() const {
  if (!lhs_ratio) return "infinite";
  return lhs_ratio->get_str();
}

Verdict evaluate(const InequalityInstance& inst) {
  if (inst.variant == Variant::T) throw std::invalid_argument("variant T is a generation test, not a ratio");
  if (inst.denominator < 0 || inst.numerator < inst.denominator) throw std::invalid_argument("invalid inequality instance");
  Verdict v;
  if (inst.denominator == 0) {
    v.holds = true;
    return v;
  }
  mpq_class r(inst.numerator, inst.denominator);
  r.canonicalize();
  v.lhs_ratio = r;
  v.holds = r > mpq_class(inst.rhs);
  return v;
}

mpz_class rhs_henniart(const mpz_class& weyl_rational) { return 2 * weyl_rational; }

mpz_class rhs_lusztig(const mpz_class& weyl_absolute, const mpz_class& component_index) {
  const mpz_class e = 2 * weyl_absolute * component_index - 1;
  if (!e.fits_ulong_p()) throw std::invalid_argument("exponent too large");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e.get_ui());
  return r;
}

bool generates_z2_quotient(const std::vector<std::pair<std::int64_t, std::int64_t>>& relations,
                           const std::vector<std::pair<std::int64_t, std::int64_t>>& elements) {
  // Hermite basis {(a, b), (0, c)} of the lattice spanned so far; index = a * c.
  mpz_class a = 0, b = 0, c = 0;
  auto add = [&](mpz_class v1, mpz_class v2) {
    if (v1 == 0) {
      c = gcd(c, v2);
    } else if (a == 0) {
      // previous first vector had zero first coordinate; push it into c
      c = gcd(c, b);
      a = abs(v1);
      b = v1 < 0 ? mpz_class(-v2) : v2;
    } else {
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), v1.get_mpz_t());
      const mpz_class nb = s * b + t * v2;
      const mpz_class w2 = (v1 / g) * b - (a / g) * v2;
      c = gcd(c, w2);
      a = g;
      b = nb;
    }
    if (c != 0) b %= c;
  };
  for (const auto& [x, y] : relations) add(x, y);
  for (const auto& [x, y] : elements) add(x, y);
  return abs(a) == 1 && abs(c) == 1;
}

std::string congruence_name(Congruence c) {
  switch (c) {
    case Congruence::All: return "all";
    case Congruence::MinusOneMod3: return "q=-1 mod 3";
    case Congruence::NotMinusOneMod3: return "q!=-1 mod 3";
  }
  return "?";
}

bool in_class(Congruence c, std::int64_t q) {
  switch (c) {
    case Congruence::All: return true;
    case Congruence::MinusOneMod3: return q % 3 == 2;
    case Congruence::NotMinusOneMod3: return q % 3 != 2;
  }
  return false;
}

Verdict evaluate_torus_H(const torus::NonregularCounter& counter, const torus::RationalTorus& T, std::int64_t q,
                         const mpz_class& weyl) {
  InequalityInstance inst;
  inst.variant = Variant::H;
  inst.numerator = torus::torus_order(T, q);
  inst.denominator = counter.count_nonregular(q);
  inst.rhs = rhs_henniart(weyl);
  return evaluate(inst);
}

std::string Threshold::to_string() const { return all_q ? "any" : "q>=" + std::to_string(q_min); }

Threshold min_q_threshold(const torus::NonregularCounter& counter, const torus::RationalTorus& T,
                          const mpz_class& weyl, Congruence cls, std::int64_t q_max) {
  std::vector<std::pair<std::int64_t, bool>> verdicts;
  for (std::int64_t q : fq::prime_powers_up_to(q_max))
    if (in_class(cls, q)) verdicts.emplace_back(q, evaluate_torus_H(counter, T, q, weyl).holds);
  if (verdicts.empty()) throw std::invalid_argument("empty congruence class");
  std::size_t first = verdicts.size();
  for (std::size_t i = 0; i < verdicts.size(); ++i)
    if (verdicts[i].second) {
      first = i;
      break;
    }
  if (first == verdicts.size()) throw std::runtime_error("inequality never holds over tested range");
  for (std::size_t i = first; i < verdicts.size(); ++i)
    if (!verdicts[i].second) throw std::runtime_error("non-monotone over tested range");
  Threshold t;
  t.all_q = first == 0;
  t.q_min = verdicts[first].first;
  return t;
}

mpz_class weyl_factor(const torus::RationalTorus& T) {
  try {
    return mpz_class(static_cast<unsigned long>(rootdata::twisted_centralizer_order(T.datum, T.twist)));
  } catch (const std::runtime_error&) {
    if (T.twist.label != "coxeter") throw;
    return T.datum.coxeter_number_table();
  }
}

const std::vector<ExpectedRow>& expected_exceptional_table() {
  static const std::vector<ExpectedRow> rows = {
      {"E6", Congruence::All, "any", "q>2"},
      {"E7", Congruence::MinusOneMod3, "any", "q>2"},
      {"E7", Congruence::NotMinusOneMod3, "any", "any"},
      {"E8", Congruence::All, "any", "any"},
      {"F4", Congruence::All, "any", "q>2"},
      {"G2", Congruence::MinusOneMod3, "q>2", "q>6"},
      {"G2", Congruence::NotMinusOneMod3, "any", "q>3"},
  };
  return rows;
}

bool threshold_matches(const Threshold& t, const std::string& cell, Congruence cls, std::int64_t q_max) {
  for (std::int64_t q : fq::prime_powers_up_to(q_max)) {
    if (!in_class(cls, q)) continue;
    const bool computed = t.all_q || q >= t.q_min;
    bool printed = true;
    if (cell != "any") {
      if (cell.rfind("q>", 0) != 0) throw std::invalid_argument("bad table cell: " + cell);
      printed = q > std::stoll(cell.substr(2));
    }
    if (computed != printed) return false;
  }
  return true;
}

std::vector<TableRow> compute_exceptional_table(std::int64_t q_max) {
  std::vector<TableRow> rows;
  std::string current;
  std::optional<torus::RationalTorus> T;
  std::optional<torus::NonregularCounter> counter;
  mpz_class w;
  for (const auto& e : expected_exceptional_table()) {
    if (e.type != current) {
      current = e.type;
      T = torus::make_torus(e.type, rootdata::Flavor::Adjoint, "coxeter");
      counter.emplace(*T);
      w = weyl_factor(*T);
    }
    TableRow r{e.type, "coxeter", e.congruence, {}, {}};
    r.g0_s = min_q_threshold(*counter, *T, 1, e.congruence, q_max);
    r.g0_g = min_q_threshold(*counter, *T, w, e.congruence, q_max);
    rows.push_back(r);
  }
  return rows;
}

std::vector<TableRow> reproduce_exceptional_table(std::int64_t q_max) {
  auto rows = compute_exceptional_table(q_max);
  const auto& expected = expected_exceptional_table();
  std::ostringstream bad;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& e = expected[i];
    if (!threshold_matches(rows[i].g0_s, e.g0_s, e.congruence, q_max))
      bad << e.type << " [" << congruence_name(e.congruence) << "] G0=S: computed " << rows[i].g0_s.to_string()
          << ", table " << e.g0_s << "; ";
    if (!threshold_matches(rows[i].g0_g, e.g0_g, e.congruence, q_max))
      bad << e.type << " [" << congruence_name(e.congruence) << "] G0=G: computed " << rows[i].g0_g.to_string()
          << ", table " << e.g0_g << "; ";
  }
  if (!bad.str().empty()) throw std::runtime_error("exceptional table mismatch: " + bad.str());
  return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "type,twist,congruence,threshold_G0_S,threshold_G0_G\n";
  for (const auto& r : rows)
    os << r.type << ',' << r.twist << ',' << congruence_name(r.congruence) << ',' << r.g0_s.to_string() << ','
       << r.g0_g.to_string() << '\n';
  return os.str();
}

}  // namespace dlchar::inequalities
