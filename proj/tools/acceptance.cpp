// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
// Everything is exact; there are no tolerances to tune.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "dlchar/dl.hpp"
#include "dlchar/finitegrp.hpp"
#include "dlchar/fq.hpp"
#include "dlchar/gln_tame.hpp"
#include "dlchar/inequalities.hpp"
#include "dlchar/torus.hpp"

using namespace dlchar;
using cyclotomic::Cyclo;
using rootdata::Flavor;

namespace {

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("DLCHAR_SEED")) return std::strtoull(s, nullptr, 0);
  return 0x5eed;
}

// Collects the first few mismatches so a FAIL line says what went wrong.
struct Log {
  std::vector<std::string> notes;
  bool ok = true;
  void fail(const std::string& s) {
    ok = false;
    if (notes.size() < 5) notes.push_back(s);
  }
  void expect(bool cond, const std::string& s) {
    if (!cond) fail(s);
  }
};

mpz_class poly(std::initializer_list<long> coeffs_high_first, long q) {
  mpz_class r = 0;
  for (long c : coeffs_high_first) r = r * q + c;
  return r;
}

struct Oracle {
  dl::ProductModel m;
  std::vector<dl::GreenTable> greens;
  finitegrp::CharacterTable table;
  std::vector<std::vector<Cyclo>> irr;
  dl::DLCache cache;
  explicit Oracle(const std::string& spec) : m(dl::build_model(spec)), greens(dl::builtin_green_tables(m.q)) {
    table = finitegrp::character_table(*m.G, m.cls);
    irr = dl::lifted_characters(m, table);
    cache = dl::build_cache(m, greens);
  }
};

const Oracle& oracle(const std::string& spec) {
  static std::map<std::string, std::unique_ptr<Oracle>> cache;
  auto& o = cache[spec];
  if (!o) o = std::make_unique<Oracle>(spec);
  return *o;
}

// ---- 1: exceptional table ----
void c1(Log& log) {
  using torus::make_torus;
  torus::NonregularCounter e6(make_torus("E6", Flavor::Adjoint, "coxeter"));
  torus::NonregularCounter e7(make_torus("E7", Flavor::Adjoint, "coxeter"));
  torus::NonregularCounter e8(make_torus("E8", Flavor::Adjoint, "coxeter"));
  torus::NonregularCounter f4(make_torus("F4", Flavor::Adjoint, "coxeter"));
  torus::NonregularCounter g2(make_torus("G2", Flavor::Adjoint, "coxeter"));
  struct Row {
    const char* type;
    const torus::NonregularCounter& c;
    std::function<mpz_class(long)> order, nonreg;
  };
  const std::vector<Row> rows = {
      {"E6", e6, [](long q) -> mpz_class { return poly({1, 0, -1, 0, 1}, q) * poly({1, 1, 1}, q); },
       [](long q) -> mpz_class { return poly({1, 1, 1}, q); }},
      {"E7", e7, [](long q) -> mpz_class { return poly({1, 0, 0, -1, 0, 0, 1}, q) * poly({1, 1}, q); },
       [](long q) -> mpz_class { return (q % 3 == 2 ? 3 : 1) * poly({1, 1}, q); }},
      {"E8", e8, [](long q) -> mpz_class { return poly({1, 1, 0, -1, -1, -1, 0, 1, 1}, q); }, [](long) { return mpz_class(1); }},
      {"F4", f4, [](long q) -> mpz_class { return poly({1, 0, -1, 0, 1}, q); }, [](long) { return mpz_class(1); }},
      {"G2", g2, [](long q) -> mpz_class { return poly({1, -1, 1}, q); }, [](long q) { return mpz_class(q % 3 == 2 ? 3 : 1); }},
  };
  for (const auto& r : rows) {
    const auto T = make_torus(r.type, Flavor::Adjoint, "coxeter");
    for (long q : fq::prime_powers_up_to(199)) {
      log.expect(torus::torus_order(T, q) == r.order(q), std::string(r.type) + " order at q=" + std::to_string(q));
      log.expect(r.c.count_nonregular(q) == r.nonreg(q), std::string(r.type) + " nonregular at q=" + std::to_string(q));
    }
  }
  try {
    const auto table = inequalities::reproduce_exceptional_table(199);
    log.expect(table.size() == inequalities::expected_exceptional_table().size(), "row count");
  } catch (const std::exception& e) {
    log.fail(e.what());
  }
}

// ---- 2: GL_n unramified exceptions ----
void c2(Log& log) {
  using P = std::pair<int, std::int64_t>;
  const std::vector<P> expected = {{2, 2}, {2, 3}, {4, 2}, {6, 2}};
  const auto got = gln_tame::gln_unramified_exceptions(12, 16);
  log.expect(got == expected, "exception set differs (" + std::to_string(got.size()) + " entries)");
}

// ---- 3: f = 1 ----
void c3(Log& log) {
  for (int n = 1; n <= 100; ++n) {
    const std::int64_t phi = gln_tame::euler_phi(n);
    const bool h_expected = n == phi || mpq_class(n, n - phi) > 2;
    int tried = 0;
    for (std::int64_t q = 2; tried < 2 && q < 400; ++q) {
      if (!fq::is_prime_power(q) || n % fq::prime_power(q).first == 0) continue;
      ++tried;
      const auto c = gln_tame::count_very_regular(gln_tame::build_tame_model(n, n, 1, q));
      const std::string at = "n=" + std::to_string(n) + " q=" + std::to_string(q);
      log.expect(c.H_holds == h_expected, "(H) at " + at);
      log.expect(c.T_holds, "(T) at " + at);
    }
    log.expect(tried == 2, "no admissible q for n=" + std::to_string(n));
  }
}

// ---- 4: shallow-count lower bound and Z*-invariance ----
void c4(Log& log) {
  for (int e = 1; e <= 12; ++e)
    for (int f : {2, 3, 5})
      for (std::int64_t q : {3, 5, 7, 9}) {
        if (e % fq::prime_power(q).first == 0) continue;
        const auto m = gln_tame::build_tame_model(e * f, e, f, q);
        const auto c = gln_tame::count_very_regular(m);
        const std::int64_t bound = gln_tame::shallow_lower_bound(m);
        const std::string at = "e=" + std::to_string(e) + " f=" + std::to_string(f) + " q=" + std::to_string(q);
        for (const auto& [l, cnt] : c.per_l)
          if (std::gcd<std::int64_t>(l, e) == 1) log.expect(cnt >= bound, "bound at " + at + " l=" + std::to_string(l));
        log.expect(gln_tame::check_star_invariance(m), "Z* invariance at " + at);
      }
}

// ---- 5: scalar products ----
void c5(Log& log) {
  for (const char* spec : {"GL2(3)", "GL2(5)"}) {
    const auto m = dl::build_model(spec);
    const auto greens = dl::builtin_green_tables(m.q);
    const auto pairs = dl::all_pairs(m);
    for (const auto& p1 : pairs)
      for (const auto& p2 : pairs)
        if (!dl::scalar_product_check(m, p1, p2, greens).agree)
          log.fail(std::string(spec) + ": " + p1.to_string(m) + " vs " + p2.to_string(m));
  }
}

// ---- 6: semisimple-value identity ----
void c6(Log& log) {
  const auto& o = oracle("GL2(3)");
  int identity_class = o.m.cls.class_of[o.m.G->index_of(finitegrp::identity(2))];
  bool saw_identity = false;
  for (std::size_t r = 0; r < o.irr.size(); ++r)
    for (std::size_t c = 0; c < o.m.classes(); ++c) {
      if (o.m.unip_part[c] != 0) continue;
      saw_identity = saw_identity || static_cast<int>(c) == identity_class;
      log.expect(dl::rho_ss_identity_check(o.m, o.cache, o.irr[r], static_cast<int>(c)),
                 "irreducible " + std::to_string(r) + " at class " + std::to_string(c));
    }
  log.expect(saw_identity, "identity class not treated as semisimple");
}

// ---- 7: Henniart uniqueness on GL2(11) ----
void c7(Log& log) {
  const auto& o = oracle("GL2(11)");
  const auto rs = dl::rs_locus(o.m);
  int t = -1;
  for (std::size_t i = 0; i < o.m.tori.size(); ++i)
    if (o.m.tori[i].elliptic) t = static_cast<int>(i);
  if (t < 0 || !dl::henniart_hypothesis(o.m, t, rs).holds) {
    log.fail("hypothesis fails on the nonsplit torus");
    return;
  }
  int tested = 0;
  for (const auto& chi : o.m.tori[t].characters()) {
    const dl::CharPair p{t, chi, 0, 0};
    if (!dl::in_general_position(o.m, p)) continue;
    ++tested;
    const auto R = dl::dl_character(o.m, p, o.greens);
    const std::string at = p.to_string(o.m);
    try {
      const auto match = dl::henniart_unique(o.m, p, dl::restrict_to(rs, R.values), o.table, o.greens);
      // c = epsilon = -1 for the nonsplit torus
      log.expect(match.c_exponent == o.m.M / 2 && match.equals_epsilon_R, "c != epsilon at " + at);
      log.expect(dl::is_cuspidal(o.m, o.irr[match.rho]), "non-cuspidal match at " + at);
    } catch (const std::exception& e) {
      log.fail(at + ": " + e.what());
    }
    // perturb every regular semisimple class in turn would be slow; take three spread out
    int perturbed = 0;
    for (std::size_t k = 0; k < rs.size() && perturbed < 3; k += rs.size() / 3 + 1) {
      std::size_t c = k;
      while (c < rs.size() && !rs[c]) ++c;
      if (c == rs.size()) break;
      auto bad = R.values;
      bad[c] += Cyclo::rational(o.m.M, 1);
      ++perturbed;
      try {
        dl::henniart_unique(o.m, p, dl::restrict_to(rs, bad), o.table, o.greens);
        log.fail("perturbed input accepted at " + at);
      } catch (const std::runtime_error& e) {
        log.expect(std::string(e.what()) == "no match", "perturbed input: " + std::string(e.what()));
      }
    }
  }
  log.expect(tested == 110, "general-position count " + std::to_string(tested));
}

// ---- 8: reconstruction round trip ----
void c8(Log& log) {
  const auto& o = oracle("GL2(11)");
  const auto rs = dl::rs_locus(o.m);
  for (std::size_t r = 0; r < o.irr.size(); ++r) {
    try {
      const auto rec = dl::reconstruct_from_values(o.m, dl::restrict_to(rs, o.irr[r]));
      log.expect(rec.solution == dl::compute_Ztilde(o.m, o.cache, o.irr[r]), "mismatch at " + std::to_string(r));
      // one solution per torus means no second candidate anywhere
      log.expect(rec.solutions_found == static_cast<std::int64_t>(o.m.tori.size()),
                 "extra solutions at " + std::to_string(r));
    } catch (const std::exception& e) {
      log.fail(std::to_string(r) + ": " + e.what());
    }
  }
}

// ---- 9: unipotent detector ----
void c9(Log& log) {
  const auto& o = oracle("GL2(11)");
  const auto rs = dl::rs_locus(o.m);
  std::vector<std::size_t> found;
  for (std::size_t r = 0; r < o.irr.size(); ++r)
    if (dl::unipotent_detect(o.m, o.irr[r], rs)) found.push_back(r);
  // trivial: degree 1 and constant; Steinberg: degree q and trivial on the center
  log.expect(found.size() == 2, std::to_string(found.size()) + " unipotent irreducibles detected");
  for (std::size_t r : found) {
    const auto d = o.table.degrees[r];
    bool trivial_on_center = true;
    for (int z : o.m.center)
      if (o.irr[r][o.m.cls.class_of[z]] != Cyclo::rational(o.m.M, d)) trivial_on_center = false;
    log.expect(trivial_on_center && (d == 1 || d == o.m.q), "detected degree " + std::to_string(d));
    log.expect(dl::unipotent_by_definition(o.m, o.cache, o.irr[r]), "definition disagrees");
  }
}

// ---- 10: structural suites ----
void c10(Log& log, std::uint64_t seed) {
  for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {1, 2}, {2, 4}}) {
    const auto m = dl::build_model("GL2(3)", a, b);
    const auto r = dl::jordan_exhaustive(m);
    const std::string at = " (a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")";
    log.expect(r.injective, "Jordan injectivity" + at);
    log.expect(r.equivariant, "Jordan equivariance" + at);
    log.expect(r.rejects_outside, "Jordan domain" + at);
  }
  for (std::int64_t q : {3, 4, 5, 7, 8, 9}) {
    const auto m = dl::build_model("GL2(" + std::to_string(q) + ")");
    for (const auto& g : dl::check_green_tables(m, dl::builtin_green_tables(q)))
      log.expect(g.orthogonality && g.identity_values, "Green table " + g.scope + " at q=" + std::to_string(q));
  }
  const auto ded = finitegrp::dedekind_property_trials(1000, seed);
  log.expect(ded.instances == 1000 && ded.failures == 0, "Dedekind trials: " + std::to_string(ded.failures) + " failures");
  for (const char* spec : {"GL2(2)", "GL2(3)", "SL2(3)", "GL2(4)", "GL2(5)", "SL2(5)", "GL3(2)"}) {
    const auto G = finitegrp::group_from_spec(spec);
    const auto cls = finitegrp::conjugacy_classes(G);
    const auto t = finitegrp::character_table(G, cls);
    log.expect(finitegrp::check_character_table(G, cls, t).all(), std::string("table self-check ") + spec);
  }
  const auto& o = oracle("GL2(11)");
  log.expect(finitegrp::check_character_table(*o.m.G, o.m.cls, o.table).all(), "table self-check GL2(11)");
}

}  // namespace

int main() {
  const std::uint64_t seed = seed_from_env();
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Log&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exceptional table, q <= 199", c1},
      {2, "GL_n unramified exceptions, n <= 12, q <= 16", c2},
      {3, "f = 1: (H) iff n/(n - phi(n)) > 2, (T) always, n <= 100", c3},
      {4, "shallow-count lower bound and Z*-invariance", c4},
      {5, "scalar-product formula on GL2(3), GL2(5)", c5},
      {6, "semisimple-value identity on GL2(3)", c6},
      {7, "Henniart uniqueness on GL2(11), nonsplit torus", c7},
      {8, "Ztilde reconstruction round trip on GL2(11)", c8},
      {9, "unipotent detector on GL2(11)", c9},
      {10, "structural suites (Jordan, Green, Dedekind, tables)", [seed](Log& l) { c10(l, seed); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Log log;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(log);
    } catch (const std::exception& e) {
      log.fail(std::string("exception: ") + e.what());
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    std::printf("[%s] %2d  %s  (%.1f s)\n", log.ok ? "PASS" : "FAIL", c.id, c.name, dt.count());
    for (const auto& n : log.notes) std::printf("         %s\n", n.c_str());
    std::fflush(stdout);
    if (!log.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
