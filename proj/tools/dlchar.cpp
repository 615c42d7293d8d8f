// dlchar command-line front end. Every subcommand writes one JSON document (or CSV) to stdout;
// the output depends only on the arguments, so repeated runs are byte-identical.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlchar/dl.hpp"
#include "dlchar/finitegrp.hpp"
#include "dlchar/fq.hpp"
#include "dlchar/gln_tame.hpp"
#include "dlchar/inequalities.hpp"
#include "dlchar/rootdata.hpp"
#include "dlchar/torus.hpp"

using nlohmann::json;
namespace dl = dlchar::dl;
namespace fg = dlchar::finitegrp;
namespace gt = dlchar::gln_tame;
namespace iq = dlchar::inequalities;
namespace rd = dlchar::rootdata;
namespace tr = dlchar::torus;
using dlchar::cyclotomic::Cyclo;

namespace {

// Thrown for bad user input; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json big(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

json ratio_json(const iq::Verdict& v) { return v.lhs_string(); }

// Collects checks; the first failure's label goes to stderr.
struct Report {
  json doc;
  json checks = json::array();
  bool pass = true;
  std::string first_failure;

  Report(const std::string& command, json inputs) {
    doc["schema"] = 1;
    doc["command"] = command;
    doc["inputs"] = std::move(inputs);
  }
  void check(const std::string& label, bool ok, json detail = nullptr) {
    json c{{"label", label}, {"pass", ok}};
    if (!detail.is_null()) c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
    if (!ok && pass) first_failure = label;
    pass = pass && ok;
  }
  int emit(json results) {
    doc["results"] = std::move(results);
    if (!checks.empty()) doc["checks"] = checks;
    doc["pass"] = pass;
    std::cout << doc.dump(2) << "\n";
    if (!pass) {
      std::cerr << "dlchar: check failed: " << first_failure << "\n";
      return 1;
    }
    return 0;
  }
};

// ---- reproduce-table ----

int cmd_reproduce_table(std::int64_t q_max, bool csv) {
  Report rep("reproduce-table", {{"qmax", q_max}});
  std::vector<iq::TableRow> rows;
  try {
    rows = iq::reproduce_exceptional_table(q_max);
  } catch (const std::runtime_error& e) {
    rep.check("exceptional table", false, e.what());
    return rep.emit(nullptr);
  }
  if (csv) {
    std::cout << iq::table_csv(rows);
    return 0;
  }
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"type", r.type},
                   {"twist", r.twist},
                   {"congruence", iq::congruence_name(r.congruence)},
                   {"threshold_G0_S", r.g0_s.to_string()},
                   {"threshold_G0_G", r.g0_g.to_string()}});
  rep.check("exceptional table", true);
  return rep.emit(out);
}

// ---- count-rs ----

int cmd_count_rs(const std::string& type, const std::string& flavor, const std::string& twist, std::int64_t q) {
  if (!dlchar::fq::is_prime_power(q)) throw UsageError("q must be a prime power");
  const auto T = tr::make_torus(type, rd::parse_flavor(flavor), twist);
  Report rep("count-rs", {{"type", type}, {"flavor", flavor}, {"twist", twist}, {"q", q}});
  return rep.emit(tr::torus_record(T, q));
}

// ---- check-inequality ----

// 2^e < x, without materializing 2^e when it cannot matter.
bool ratio_exceeds_power_of_two(const mpz_class& num, const mpz_class& den, const mpz_class& e) {
  if (den == 0) return true;
  const std::size_t bits = mpz_sizeinbase(num.get_mpz_t(), 2);
  if (!e.fits_ulong_p() || e.get_ui() >= bits) return false;  // num/den <= num < 2^bits <= 2^e
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, e.get_ui());
  return num > p * den;
}

int cmd_check_inequality_torus(iq::Variant v, const std::string& type, const std::string& flavor,
                               const std::string& twist, std::int64_t q) {
  if (!dlchar::fq::is_prime_power(q)) throw UsageError("q must be a prime power");
  if (v == iq::Variant::T) throw UsageError("variant T is defined for the GL_n tame torus (use --e/--f)");
  const auto T = tr::make_torus(type, rd::parse_flavor(flavor), twist);
  tr::NonregularCounter counter(T);
  Report rep("check-inequality", {{"variant", iq::variant_name(v)}, {"type", type}, {"flavor", flavor},
                                  {"twist", twist}, {"q", q}});
  const mpz_class num = tr::torus_order(T, q);
  const mpz_class den = counter.count_nonregular(q);
  json res{{"numerator", big(num)}, {"denominator", big(den)}};
  if (v == iq::Variant::H) {
    const mpz_class w = iq::weyl_factor(T);
    const auto verdict = iq::evaluate_torus_H(counter, T, q, w);
    res["rhs"] = big(iq::rhs_henniart(w));
    res["lhs"] = ratio_json(verdict);
    res["holds"] = verdict.holds;
    rep.check("Henniart inequality (rs locus)", verdict.holds);
  } else {
    const mpz_class e = 2 * mpz_class(std::to_string(rd::weyl_order_from_degrees(T.datum))) - 1;
    const bool holds = ratio_exceeds_power_of_two(num, den, e);
    res["rhs"] = "2^" + e.get_str();
    res["holds"] = holds;
    rep.check("Lusztig inequality (rs locus)", holds);
  }
  return rep.emit(res);
}

std::int64_t default_q_for(int e) {
  std::int64_t q = 2;
  while (!dlchar::fq::is_prime_power(q) || e % dlchar::fq::prime_power(q).first == 0) ++q;
  return q;
}

int cmd_check_inequality_gln(iq::Variant v, int e, int f, std::int64_t q) {
  if (e < 1 || f < 1) throw UsageError("--e and --f must be positive");
  if (q == 0) q = default_q_for(e);
  const int n = e * f;
  const auto model = gt::build_tame_model(n, e, f, q);
  const auto c = gt::count_very_regular(model);
  Report rep("check-inequality", {{"variant", iq::variant_name(v)}, {"n", n}, {"e", e}, {"f", f}, {"q", q}});
  json res{{"star_total", c.star_total.get_str()}, {"star_evrs", c.star_evrs.get_str()}};
  bool holds = false;
  std::string label;
  switch (v) {
    case iq::Variant::H:
      holds = c.H_holds;
      label = "Henniart inequality (evrs)";
      break;
    case iq::Variant::T:
      holds = c.T_holds;
      label = "toral generation (evrs generates [S]*)";
      break;
    case iq::Variant::L: {
      mpz_class w = 1;  // |W_G| = n!
      for (int i = 2; i <= n; ++i) w *= i;
      holds = ratio_exceeds_power_of_two(c.star_total, c.star_total - c.star_evrs, 2 * w - 1);
      res["rhs"] = "2^" + mpz_class(2 * w - 1).get_str();
      label = "Lusztig inequality (evrs)";
      break;
    }
  }
  res["holds"] = holds;
  rep.check(label, holds);
  return rep.emit(res);
}

// ---- gln-shallow / gln-exceptions ----

int cmd_gln_shallow(int n, int e, int f, std::int64_t q, std::optional<std::int64_t> zeta) {
  if (e < 1 || f < 1 || n != e * f) throw UsageError("need n = e * f with e, f >= 1");
  const auto choice = zeta ? gt::ZetaChoice::generator_power(*zeta) : gt::ZetaChoice::trivial();
  const auto model = gt::build_tame_model(n, e, f, q, choice);
  const auto c = gt::count_very_regular(model);
  json in{{"n", n}, {"e", e}, {"f", f}, {"q", q}};
  if (zeta) in["zeta"] = *zeta;
  Report rep("gln-shallow", in);
  json res = gt::counts_json(model, c);
  const std::int64_t bound = gt::shallow_lower_bound(model);
  res["shallow_lower_bound"] = bound;
  bool bound_ok = true;
  for (const auto& [l, cnt] : c.per_l)
    if (std::gcd<std::int64_t>(l, e) == 1 && cnt < bound) bound_ok = false;
  rep.check("shallow count lower bound", bound_ok);
  return rep.emit(res);
}

int cmd_gln_exceptions(int n_max, std::int64_t q_max) {
  if (n_max < 1 || q_max < 2) throw UsageError("need nmax >= 1 and qmax >= 2");
  Report rep("gln-exceptions", {{"nmax", n_max}, {"qmax", q_max}});
  json out = json::array();
  for (const auto& [n, q] : gt::gln_unramified_exceptions(n_max, q_max)) out.push_back({n, q});
  return rep.emit(out);
}

// ---- verify ----

struct Oracle {
  dl::ProductModel m;
  std::vector<dl::GreenTable> greens;
  fg::CharacterTable table;
  std::vector<std::vector<Cyclo>> irr;
  dl::DLCache cache;

  explicit Oracle(dl::ProductModel model) : m(std::move(model)), greens(dl::builtin_green_tables(m.q)) {
    table = fg::character_table(*m.G, m.cls);
    irr = dl::lifted_characters(m, table);
    cache = dl::build_cache(m, greens);
  }
};

int elliptic_torus(const dl::ProductModel& m) {
  for (std::size_t t = 0; t < m.tori.size(); ++t)
    if (m.tori[t].elliptic) return static_cast<int>(t);
  throw std::logic_error("no elliptic torus in the catalog");
}

void suite_jordan(const dl::ProductModel& m, Report& rep, json& res) {
  const auto r = dl::jordan_exhaustive(m);
  res["elements_mod_center"] = r.elements;  // [G′] = G′ / Z_G
  rep.check("Jordan map injective", r.injective);
  rep.check("Jordan map conjugation-equivariant", r.equivariant);
  rep.check("Jordan map rejects elements outside G′", r.rejects_outside);
}

void suite_scalar(const dl::ProductModel& m, Report& rep, json& res) {
  const auto greens = dl::builtin_green_tables(m.q);
  const auto pairs = dl::all_pairs(m);
  std::int64_t checked = 0, failed = 0;
  json first_bad = nullptr;
  for (const auto& p1 : pairs)
    for (const auto& p2 : pairs) {
      const auto r = dl::scalar_product_check(m, p1, p2, greens);
      ++checked;
      if (!r.agree) {
        if (first_bad.is_null()) first_bad = {p1.to_string(m), p2.to_string(m), r.formula, r.brute.to_string()};
        ++failed;
      }
    }
  res["pairs"] = pairs.size();
  res["products_checked"] = checked;
  res["disagreements"] = failed;
  rep.check("scalar product formula", failed == 0, first_bad);
}

void suite_rho_ss(const Oracle& o, Report& rep, json& res) {
  std::int64_t checked = 0, failed = 0;
  for (std::size_t r = 0; r < o.irr.size(); ++r)
    for (std::size_t c = 0; c < o.m.classes(); ++c)
      if (o.m.unip_part[c] == 0) {
        ++checked;
        if (!dl::rho_ss_identity_check(o.m, o.cache, o.irr[r], static_cast<int>(c))) ++failed;
      }
  res["irreducibles"] = o.irr.size();
  res["identities_checked"] = checked;
  res["failures"] = failed;
  rep.check("semisimple-value identity", failed == 0);
}

void suite_henniart(const Oracle& o, std::uint64_t seed, Report& rep, json& res) {
  const int t = elliptic_torus(o.m);
  const auto rs = dl::rs_locus(o.m);
  const auto hyp = dl::henniart_hypothesis(o.m, t, rs);
  res["hypothesis"] = hyp.per_torus;
  rep.check("Henniart inequality (rs locus)", hyp.holds);
  if (!hyp.holds) return;
  std::vector<std::size_t> rs_classes;
  for (std::size_t c = 0; c < rs.size(); ++c)
    if (rs[c]) rs_classes.push_back(c);
  std::mt19937_64 rng(seed);
  std::int64_t tested = 0, matched = 0, rejected = 0;
  json first_bad = nullptr;
  for (const auto& chi : o.m.tori[t].characters()) {
    const dl::CharPair p{t, chi, 0, 0};
    if (!dl::in_general_position(o.m, p)) continue;
    ++tested;
    const auto R = dl::dl_character(o.m, p, o.greens);
    bool ok = false;
    try {
      const auto match = dl::henniart_unique(o.m, p, dl::restrict_to(rs, R.values), o.table, o.greens);
      const std::int64_t eps_exp = R.epsilon == 1 ? 0 : o.m.M / 2;
      ok = match.equals_epsilon_R && match.c_exponent == eps_exp && dl::is_cuspidal(o.m, o.irr[match.rho]);
    } catch (const std::runtime_error& e) {
      if (first_bad.is_null()) first_bad = {p.to_string(o.m), e.what()};
    }
    if (ok) ++matched;
    auto bad = R.values;
    bad[rs_classes[rng() % rs_classes.size()]] += Cyclo::rational(o.m.M, 1);
    try {
      dl::henniart_unique(o.m, p, dl::restrict_to(rs, bad), o.table, o.greens);
    } catch (const std::runtime_error& e) {
      if (std::string(e.what()) == "no match") ++rejected;
    }
  }
  res["torus"] = o.m.tori[t].name;
  res["general_position"] = tested;
  res["matched"] = matched;
  res["perturbations_rejected"] = rejected;
  rep.check("Henniart uniqueness", tested > 0 && matched == tested, first_bad);
  rep.check("Henniart uniqueness rejects perturbed values", rejected == tested);
}

void suite_ztilde(const Oracle& o, Report& rep, json& res) {
  json out = json::array();
  bool structure = true, roundtrip = true;
  const auto rs = dl::rs_locus(o.m);
  const bool hyp = dl::lusztig_hypothesis(o.m, rs).holds;
  for (std::size_t r = 0; r < o.irr.size(); ++r) {
    const auto z = dl::compute_Ztilde(o.m, o.cache, o.irr[r]);
    if (z.empty()) structure = false;
    for (const auto& e : z)
      if (!dl::geom_conjugate(o.m, dl::CharPair{z[0].torus, z[0].exps, 0, 0}, dl::CharPair{e.torus, e.exps, 0, 0}))
        structure = false;
    json entry{{"degree", o.table.degrees[r]}, {"Ztilde", dl::ztilde_to_json(o.m, z)}};
    if (hyp) {
      const auto rec = dl::reconstruct_from_values(o.m, dl::restrict_to(rs, o.irr[r]));
      const bool ok = rec.solution == z && rec.solutions_found == static_cast<std::int64_t>(o.m.tori.size());
      entry["reconstructed"] = ok;
      roundtrip = roundtrip && ok;
    }
    out.push_back(std::move(entry));
  }
  res["irreducibles"] = out;
  res["lusztig_hypothesis"] = hyp;
  rep.check("Ztilde is one geometric conjugacy class", structure);
  if (hyp) rep.check("Ztilde reconstructed from rs values", roundtrip);
}

void suite_unipotent(const Oracle& o, Report& rep, json& res) {
  const auto rs = dl::rs_locus(o.m);
  const bool hyp = dl::lusztig_hypothesis(o.m, rs).holds;
  res["lusztig_hypothesis"] = hyp;
  rep.check("Lusztig inequality (rs locus)", hyp);
  if (!hyp) return;
  json unip = json::array();
  bool agree = true;
  for (std::size_t r = 0; r < o.irr.size(); ++r) {
    const bool det = dl::unipotent_detect(o.m, o.irr[r], rs);
    if (det) unip.push_back(r);
    agree = agree && det == dl::unipotent_by_definition(o.m, o.cache, o.irr[r]);
  }
  res["unipotent"] = unip;
  rep.check("unipotent criterion", agree);
}

int cmd_verify(const std::string& group, const std::string& suite, std::int64_t a, std::int64_t b,
               std::uint64_t seed) {
  static const std::vector<std::string> suites = {"jordan", "scalar", "rho-ss", "henniart", "ztilde", "unipotent"};
  if (std::find(suites.begin(), suites.end(), suite) == suites.end()) throw UsageError("unknown suite: " + suite);
  json in{{"group", group}, {"suite", suite}};
  if (a != 1 || b != 1) {
    in["a"] = a;
    in["b"] = b;
  }
  if (suite == "henniart") in["seed"] = seed;
  Report rep("verify", in);
  json res = json::object();
  auto m = dl::build_model(group, a, b);
  res["group_order"] = m.G->order();
  res["classes"] = m.classes();
  if (suite == "jordan") {
    suite_jordan(m, rep, res);
  } else if (suite == "scalar") {
    suite_scalar(m, rep, res);
  } else {
    if (!m.connected()) throw UsageError("suite " + suite + " runs on the connected group only (a = b = 1)");
    const Oracle o(std::move(m));
    const auto tc = fg::check_character_table(*o.m.G, o.m.cls, o.table);
    rep.check("character table self-check", tc.all());
    if (suite == "rho-ss") suite_rho_ss(o, rep, res);
    if (suite == "henniart") suite_henniart(o, seed, rep, res);
    if (suite == "ztilde") suite_ztilde(o, rep, res);
    if (suite == "unipotent") suite_unipotent(o, rep, res);
  }
  return rep.emit(res);
}

// ---- catalog ----

int cmd_catalog(const std::string& group) {
  json in = json::object();
  if (!group.empty()) in["group"] = group;
  Report rep("catalog", in);
  json res;
  json data = json::array();
  for (const char* type : {"A1", "A2", "B2", "G2", "F4", "E6", "E7", "E8"})
    data.push_back(rd::to_json(rd::build_root_datum(type, rd::Flavor::Adjoint)));
  res["root_data"] = data;
  res["twists"] = {"split", "coxeter", "word:<labels>"};
  if (!group.empty()) {
    const auto m = dl::build_model(group);
    json tori = json::array();
    for (const auto& T : m.tori)
      tori.push_back({{"name", T.name},
                      {"elliptic", T.elliptic},
                      {"split_rank", T.split_rank},
                      {"order", T.order()},
                      {"generator_orders", T.gen_orders},
                      {"generators", [&] {
                         json g = json::array();
                         for (int x : T.gens) g.push_back(fg::to_string(*m.G->field, m.G->element(x)));
                         return g;
                       }()}});
    res["tori"] = tori;
    json greens = json::array();
    for (const auto& g : dl::builtin_green_tables(m.q)) {
      json vals = json::array();
      for (const auto& [key, v] : g.values) vals.push_back({{"torus", key.first}, {"unipotent", key.second}, {"Q", v}});
      greens.push_back({{"scope", g.scope}, {"values", vals}});
    }
    res["green_tables"] = greens;
  }
  return rep.emit(res);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deligne-Lusztig character data, regular semisimple counts and uniqueness checks"};
  app.require_subcommand(1);
  std::uint64_t seed = 0x5eed;
  app.add_option("--seed", seed, "seed for randomized checks");

  auto* rt = app.add_subcommand("reproduce-table", "exceptional-type thresholds for Coxeter tori");
  bool csv = false;
  std::int64_t table_qmax = 199;
  rt->add_flag("--csv", csv, "emit CSV instead of JSON");
  rt->add_option("--qmax", table_qmax, "largest prime power scanned")->check(CLI::Range(2, 100000));

  auto* crs = app.add_subcommand("count-rs", "order and regular count of a rational maximal torus");
  std::string type, flavor = "adjoint", twist = "coxeter";
  std::int64_t q = 0;
  crs->add_option("--type", type, "Cartan type, e.g. G2")->required();
  crs->add_option("--flavor", flavor, "adjoint | sc | gl");
  crs->add_option("--twist", twist, "split | coxeter | word:1,2,...");
  crs->add_option("--q", q, "prime power")->required();

  auto* ci = app.add_subcommand("check-inequality", "evaluate (H), (L) or the toral generation condition (T)");
  std::string variant;
  int e = 0, f = 0;
  std::int64_t ci_q = 0;
  std::string ci_type, ci_flavor = "adjoint", ci_twist = "coxeter";
  ci->add_option("--variant", variant, "H | L | T")->required()->check(CLI::IsMember({"H", "L", "T"}));
  ci->add_option("--e", e, "ramification index (GL_n tame torus)");
  ci->add_option("--f", f, "residue degree (GL_n tame torus)");
  ci->add_option("--q", ci_q, "prime power");
  ci->add_option("--type", ci_type, "Cartan type (Coxeter-type torus instead of the GL_n model)");
  ci->add_option("--flavor", ci_flavor, "adjoint | sc | gl");
  ci->add_option("--twist", ci_twist, "split | coxeter | word:...");

  auto* gs = app.add_subcommand("gln-shallow", "shallow (very regular) counts for the tame torus in GL_n");
  int gn = 0, ge = 0, gf = 0;
  std::int64_t gq = 0, zeta_k = 0;
  gs->add_option("--n", gn)->required();
  gs->add_option("--e", ge)->required();
  gs->add_option("--f", gf)->required();
  gs->add_option("--q", gq)->required();
  auto* zeta_opt = gs->add_option("--zeta", zeta_k, "zeta_{E/F} = gamma^k");

  auto* ge_cmd = app.add_subcommand("gln-exceptions", "unramified (n, q) where (H) fails");
  int nmax = 0;
  std::int64_t qmax = 0;
  ge_cmd->add_option("--nmax", nmax)->required();
  ge_cmd->add_option("--qmax", qmax)->required();

  auto* vf = app.add_subcommand("verify", "brute-force verification suites on a small matrix group");
  std::string group, suite;
  std::int64_t va = 1, vb = 1;
  vf->add_option("--group", group, "GLn(q) or SLn(q)")->required();
  vf->add_option("--suite", suite, "jordan | scalar | rho-ss | henniart | ztilde | unipotent")->required();
  vf->add_option("--a", va, "Z_G = Z(G°) x aZ");
  vf->add_option("--b", vb, "Z* = bZ, a | b");

  auto* cat = app.add_subcommand("catalog", "built-in root data, tori and Green tables");
  std::string cat_group;
  cat->add_option("--group", cat_group, "also list the torus catalog of GL2(q)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (*rt) code = cmd_reproduce_table(table_qmax, csv);
    if (*crs) code = cmd_count_rs(type, flavor, twist, q);
    if (*ci) {
      const auto v = iq::parse_variant(variant);
      if (!ci_type.empty()) {
        if (ci_q == 0) throw UsageError("--q is required with --type");
        code = cmd_check_inequality_torus(v, ci_type, ci_flavor, ci_twist, ci_q);
      } else {
        code = cmd_check_inequality_gln(v, e, f, ci_q);
      }
    }
    if (*gs) code = cmd_gln_shallow(gn, ge, gf, gq, *zeta_opt ? std::optional<std::int64_t>(zeta_k) : std::nullopt);
    if (*ge_cmd) code = cmd_gln_exceptions(nmax, qmax);
    if (*vf) code = cmd_verify(group, suite, va, vb, seed);
    if (*cat) code = cmd_catalog(cat_group);
  } catch (const UsageError& ex) {
    std::cerr << "dlchar: " << ex.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "dlchar: invalid argument: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "dlchar: " << ex.what() << "\n";
    return 1;
  }
  // timing goes to stderr so stdout stays byte-identical between runs
  if (std::getenv("DLCHAR_TIMING")) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    std::cerr << "elapsed " << dt.count() << " s\n";
  }
  return code;
}
