#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "dlchar/dl.hpp"
#include "test_support.hpp"

using namespace dlchar::dl;
using dlchar::cyclotomic::Cyclo;
namespace fg = dlchar::finitegrp;

namespace {

struct Fixture {
  ProductModel m;
  std::vector<GreenTable> greens;
  fg::CharacterTable table;
  std::vector<std::vector<Cyclo>> irr;
  DLCache cache;
  explicit Fixture(const std::string& spec) : m(build_model(spec)), greens(builtin_green_tables(m.q)) {
    table = fg::character_table(*m.G, m.cls);
    irr = lifted_characters(m, table);
    cache = build_cache(m, greens);
  }
};

const Fixture& gl2(int q) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[q];
  if (!f) f = std::make_unique<Fixture>("GL2(" + std::to_string(q) + ")");
  return *f;
}

int trivial_index(const Fixture& f) { return 0; }

int steinberg_index(const Fixture& f) {
  for (std::size_t i = 0; i < f.table.degrees.size(); ++i)
    if (f.table.degrees[i] == f.m.q) {
      bool inflated = true;  // the Steinberg character is trivial on Z°
      for (int z : f.m.center)
        if (f.irr[i][f.m.cls.class_of[z]] != Cyclo::rational(f.m.M, f.m.q)) inflated = false;
      if (inflated) return static_cast<int>(i);
    }
  return -1;
}

CharPair nonsplit_pair(const ProductModel& m, std::int64_t c) { return CharPair{1, {c}, 0, 0}; }

}  // namespace

TEST_CASE("catalog tori") {
  const auto& f = gl2(3);
  REQUIRE(f.m.tori.size() == 2);
  CHECK(f.m.tori[0].order() == 4);
  CHECK(f.m.tori[1].order() == 8);
  CHECK(f.m.tori[0].characters().size() == 4);
  CHECK(f.m.torus_conjugators[0].size() == 6);  // q(q+1)/2 split tori
  CHECK(f.m.torus_conjugators[1].size() == 3);  // q(q-1)/2 nonsplit tori
  CHECK(f.m.center.size() == 2);
  CHECK(f.m.coset_reps.size() == 24);
  CHECK_THROWS_WITH(build_model("GL2(2)"), "torus catalog needs q >= 3");
  CHECK_THROWS_WITH(build_model("SL2(3)"), "torus catalog supports GL2 only");
  CHECK_THROWS_WITH(build_model("GL2(3)", 2, 3), "b must be a multiple of a");
}

TEST_CASE("extended Jordan decomposition and classification") {
  const auto& f = gl2(3);
  const auto& G = *f.m.G;
  // unipotent element
  fg::Matrix u = fg::identity(2);
  u.at(0, 1) = 1;
  const int ui = G.index_of(u);
  auto j = extended_jordan(f.m, ui);
  CHECK(j.s == 0);
  CHECK(j.u == ui);
  // central element
  fg::Matrix z = fg::identity(2);
  z.at(0, 0) = z.at(1, 1) = 2;
  const int zi = G.index_of(z);
  j = extended_jordan(f.m, zi);
  CHECK(j.s == zi);
  CHECK(j.u == 0);
  CHECK(j.s_bar == 0);
  // identity: semisimple, not regular
  auto c = classify(f.m, 0);
  CHECK(c.semisimple);
  CHECK(!c.regular);
  // diag(1,2): regular split
  fg::Matrix d = fg::identity(2);
  d.at(1, 1) = 2;
  c = classify(f.m, G.index_of(d));
  CHECK(c.semisimple);
  CHECK(c.regular);
  CHECK(!c.elliptic);
  CHECK(f.m.tori[c.torus].order() == 4);
  // order 8: regular elliptic
  c = classify(f.m, f.m.tori[1].gens[0]);
  CHECK(c.regular);
  CHECK(c.elliptic);
  // g = s u with s = -1 central and u unipotent
  const int g = G.mul(zi, ui);
  j = extended_jordan(f.m, g);
  CHECK(j.s == zi);
  CHECK(j.u == ui);
  CHECK(G.mul(j.s, j.u) == g);
  CHECK(!classify(f.m, g).semisimple);
}

TEST_CASE("Jordan map on the product model") {
  auto m = build_model("GL2(3)", 2, 4);
  CHECK_THROWS_WITH(extended_jordan(m, 5, 1), "not in G′");
  CHECK_NOTHROW(extended_jordan(m, 5, 2));
  auto rep = jordan_exhaustive(m);
  CHECK(rep.elements == 24);
  CHECK(rep.injective);
  CHECK(rep.equivariant);
  CHECK(rep.rejects_outside);
  // order-8 element: Jordan pair has trivial unipotent part and regular semisimple part
  const int g = m.tori[1].gens[0];
  auto j = extended_jordan(m, g, 2);
  CHECK(j.u == 0);
  CHECK(classify(m, j.s, 2).regular);
}

TEST_CASE("Green tables satisfy orthogonality") {
  for (int q : {3, 4, 5, 7}) {
    auto m = build_model("GL2(" + std::to_string(q) + ")");
    for (const auto& chk : check_green_tables(m, builtin_green_tables(q))) {
      CAPTURE(q);
      CAPTURE(chk.scope);
      CHECK(chk.orthogonality);
      CHECK(chk.identity_values);
    }
  }
  // the sign -1 at the regular unipotent class for the nonsplit torus breaks orthogonality
  auto m = build_model("GL2(3)");
  auto bad = builtin_green_tables(3);
  bad[0].values[{"nonsplit", "u"}] = -1;
  CHECK(!check_green_tables(m, bad)[0].orthogonality);
  auto missing = builtin_green_tables(3);
  missing[0].values.erase({"split", "u"});
  CHECK_THROWS_WITH(dl_character(m, CharPair{0, {0, 0}, 0, 0}, missing), "Green value missing");
}

TEST_CASE("DL characters: closed form equals the literal sum") {
  for (int q : {3, 4}) {
    const auto& f = gl2(q);
    for (const auto& p : all_pairs(f.m)) {
      auto R = dl_character(f.m, p, f.greens);
      auto L = dl_character_literal(f.m, p, f.greens);
      for (std::size_t c = 0; c < R.values.size(); ++c) CHECK(R.values[c] == L.values[c]);
    }
  }
  auto m = build_model("GL2(3)", 2, 4);
  auto greens = builtin_green_tables(3);
  for (const auto& p0 : all_pairs(m))
    for (std::int64_t w = 0; w < 2; ++w) {
      CharPair p = p0;
      p.omega_A = w;
      auto R = dl_character(m, p, greens);
      auto L = dl_character_literal(m, p, greens);
      for (std::size_t c = 0; c < R.values.size(); ++c) CHECK(R.values[c] == L.values[c]);
    }
}

TEST_CASE("DL character values") {
  const auto& f = gl2(5);
  // degree of a nonsplit DL character: -(q-1) = -4, so epsilon * R(1) = 4
  auto R = dl_character(f.m, nonsplit_pair(f.m, 1), f.greens);
  CHECK(R.epsilon == -1);
  CHECK(R.values[f.m.cls.class_of[0]] == Cyclo::rational(f.m.M, -4));
  // at a regular elliptic gamma: theta(gamma) + theta(gamma^q)
  const int gamma = f.m.tori[1].gens[0];
  const std::int64_t step = f.m.M / 24;
  CHECK(R.values[f.m.cls.class_of[gamma]] == Cyclo::root(f.m.M, step) + Cyclo::root(f.m.M, 5 * step));
  // Dixon oracle contains the degree 4 cuspidal with these values up to sign
  bool found = false;
  for (const auto& rho : f.irr) {
    bool eq = true;
    for (std::size_t c = 0; c < rho.size() && eq; ++c) eq = rho[c] == R.values[c].scaled(-1);
    found |= eq;
  }
  CHECK(found);
}

TEST_CASE("DL characters vanish off G′") {
  auto m = build_model("GL2(3)", 3, 6);
  auto greens = builtin_green_tables(3);
  for (const auto& p : all_pairs(m)) {
    auto R = dl_character(m, p, greens);
    for (std::int64_t k = 0; k < m.b; ++k)
      for (std::size_t c = 0; c < m.classes(); ++c)
        if (k % m.a) CHECK(R.values[m.cell(c, k)].is_zero());
  }
  CHECK_THROWS_WITH(dl_character(m, CharPair{0, {0, 0}, 2, 0}, greens), "central character mismatch");
}

TEST_CASE("scalar product formula on GL2(3) and GL2(5)") {
  for (int q : {3, 5}) {
    const auto& f = gl2(q);
    const auto pairs = all_pairs(f.m);
    // brute force through integer pairings of the cached DL characters
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = 0; j < pairs.size(); ++j) {
        const std::int64_t brute = dlchar::finitegrp::integer_inner_product(
            f.cache.images[i], f.cache.conj_images[j], f.m.cls.sizes, (std::int64_t)f.m.G->order(), f.m.M);
        // formula count from the twisted normalizer
        std::int64_t count = 0;
        const auto& G = *f.m.G;
        if (pairs[i].torus == pairs[j].torus) {
          for (int x = 0; x < (int)G.order(); ++x) {
            bool norm = true, same = true;
            for (int g : f.m.tori[pairs[i].torus].gens) {
              const int y = G.mul(G.mul(x, g), G.inverse(x));
              if (!f.m.tori[pairs[i].torus].coords.count(y)) {
                norm = false;
                break;
              }
              if (theta_log(f.m, pairs[i], g) != theta_log(f.m, pairs[j], y)) same = false;
            }
            if (norm && same) ++count;
          }
          count /= f.m.tori[pairs[i].torus].order();
        }
        CHECK(brute == count);
      }
    // the packaged check on a sample, including exact cyclotomic inner products
    auto rng = test_rng(q);
    for (int t = 0; t < 20; ++t) {
      const auto& p1 = pairs[rng() % pairs.size()];
      const auto& p2 = pairs[rng() % pairs.size()];
      auto chk = scalar_product_check(f.m, p1, p2, f.greens);
      CHECK(chk.agree);
    }
  }
  // examples
  const auto& f = gl2(3);
  CHECK(scalar_product_check(f.m, nonsplit_pair(f.m, 1), nonsplit_pair(f.m, 1), f.greens).formula == 1);
  CHECK(scalar_product_check(f.m, CharPair{0, {0, 1}, 0, 0}, nonsplit_pair(f.m, 1), f.greens).formula == 0);
  // conjugated tori
  CharPair conj{1, {1}, 0, f.m.torus_conjugators[1][1]};
  auto chk = scalar_product_check(f.m, conj, nonsplit_pair(f.m, 1), f.greens);
  CHECK(chk.agree);
  CHECK(chk.formula == 1);
}

TEST_CASE("scalar products and truncations in the product model") {
  auto m = build_model("GL2(3)", 2, 4);
  auto greens = builtin_green_tables(3);
  const auto pairs = all_pairs(m);
  const auto rs = rs_locus(m);
  const auto ell = elliptic_rs_locus(m);
  auto rng = test_rng(7);
  for (int t = 0; t < 40; ++t) {
    CharPair p1 = pairs[rng() % pairs.size()], p2 = pairs[rng() % pairs.size()];
    p1.omega_A = static_cast<std::int64_t>(rng() % 2);
    p2.omega_A = static_cast<std::int64_t>(rng() % 2);
    CHECK(scalar_product_check(m, p1, p2, greens).agree);
    auto R1 = dl_character(m, p1, greens), R2 = dl_character(m, p2, greens);
    for (const auto* mask : {&rs, &ell}) {
      const Cyclo star_bullet = model_inner(m, R1.values, R2.values, true, Part::Bullet, mask);
      const Cyclo star_circ = model_inner(m, R1.values, R2.values, true, Part::Circ, mask);
      CHECK(star_circ == innerprod2_rhs(m, p1, p2, *mask));
      CHECK(star_bullet + star_circ == model_inner(m, R1.values, R2.values, true));
      if (p1.omega_A == p2.omega_A) {
        const Cyclo bullet = model_inner(m, R1.values, R2.values, false, Part::Bullet, mask);
        const Cyclo circ = model_inner(m, R1.values, R2.values, false, Part::Circ, mask);
        CHECK(bullet == innerprod_rhs(m, p1, p2, *mask));
        CHECK(bullet + circ == model_inner(m, R1.values, R2.values, false));
      }
    }
    CHECK(twist_invariance_check(m, p1, p2, greens));
  }
  // no theta is in general position once the free part enters the Weyl group
  CHECK(!in_general_position(m, CharPair{1, {1}, 0, 0}));
}

TEST_CASE("genuineness in general position") {
  const auto& f = gl2(5);
  for (std::size_t i = 0; i < f.cache.pairs.size(); ++i) {
    if (!in_general_position(f.m, f.cache.pairs[i])) continue;
    const int eps = f.cache.chars[i].epsilon;
    for (const auto& rho : f.irr) CHECK(eps * integer_pairing(f.m, rho, f.cache.chars[i].values) >= 0);
    CHECK(integer_pairing(f.m, f.cache.chars[i].values, f.cache.chars[i].values) == 1);
  }
}

TEST_CASE("geometric conjugacy") {
  const auto& f = gl2(5);
  const CharPair s1{0, {0, 0}, 0, 0}, n1{1, {0}, 0, 0};
  CHECK(geom_conjugate(f.m, s1, s1, 1));
  CHECK(geom_conjugate(f.m, s1, n1));
  CHECK_THROWS_WITH(geom_conjugate(f.m, s1, n1, 1), "k_max too small to decide");
  // distinct <q>-orbits on characters of F_25^x
  CHECK(!geom_conjugate(f.m, nonsplit_pair(f.m, 1), nonsplit_pair(f.m, 2)));
  CHECK(geom_conjugate(f.m, nonsplit_pair(f.m, 1), nonsplit_pair(f.m, 5)));
  // split (a, a) meets nonsplit a(q+1)
  CHECK(geom_conjugate(f.m, CharPair{0, {3, 3}, 0, 0}, nonsplit_pair(f.m, 18)));
  CHECK(geom_conjugate(f.m, CharPair{0, {1, 2}, 0, 0}, CharPair{0, {2, 1}, 0, 0}, 1));
  // larger k never changes the verdict
  for (std::int64_t c1 = 0; c1 < 24; ++c1)
    for (std::int64_t c2 = 0; c2 < 24; c2 += 5)
      CHECK(geom_conjugate(f.m, nonsplit_pair(f.m, c1), nonsplit_pair(f.m, c2), 2) ==
            geom_conjugate(f.m, nonsplit_pair(f.m, c1), nonsplit_pair(f.m, c2), 6));
}

TEST_CASE("Ztilde structure on GL2(3) and GL2(5)") {
  for (int q : {3, 5}) {
    const auto& f = gl2(q);
    for (std::size_t r = 0; r < f.irr.size(); ++r) {
      CAPTURE(r);
      auto z = compute_Ztilde(f.m, f.cache, f.irr[r]);
      REQUIRE(!z.empty());
      std::map<int, std::set<std::vector<std::int64_t>>> per_torus;
      for (const auto& e : z) {
        CHECK(per_torus[e.torus].insert(e.exps).second);
        CHECK(per_torus[e.torus].size() <= 2);
        CHECK(geom_conjugate(f.m, CharPair{z[0].torus, z[0].exps, 0, 0}, CharPair{e.torus, e.exps, 0, 0}));
      }
      if (is_cuspidal(f.m, f.irr[r]))
        for (const auto& e : z) CHECK(f.m.tori[e.torus].elliptic);
    }
  }
  const auto& f = gl2(3);
  auto z = compute_Ztilde(f.m, f.cache, f.irr[trivial_index(f)]);
  REQUIRE(z.size() == 2);
  CHECK(z[0] == ZEntry{0, {0, 0}, 1});
  // R_nonsplit(1) = 1 - St
  CHECK(z[1] == ZEntry{1, {0}, 1});
  const int st = steinberg_index(f);
  REQUIRE(st >= 0);
  auto zs = compute_Ztilde(f.m, f.cache, f.irr[st]);
  REQUIRE(zs.size() == 2);
  CHECK(zs[0] == ZEntry{0, {0, 0}, 1});
  CHECK(zs[1] == ZEntry{1, {0}, -1});
}

TEST_CASE("semisimple-value identity on GL2(3) and GL2(5)") {
  for (int q : {3, 5}) {
    const auto& f = gl2(q);
    for (const auto& rho : f.irr)
      for (std::size_t c = 0; c < f.m.classes(); ++c)
        if (f.m.unip_part[c] == 0) CHECK(rho_ss_identity_check(f.m, f.cache, rho, static_cast<int>(c)));
  }
  const auto& f = gl2(3);
  fg::Matrix u = fg::identity(2);
  u.at(0, 1) = 1;
  CHECK_THROWS(rho_ss_identity_check(f.m, f.cache, f.irr[0], f.m.cls.class_of[f.m.G->index_of(u)]));
}

TEST_CASE("hypotheses at small q fail cleanly") {
  const auto& f = gl2(3);
  const auto rs = rs_locus(f.m);
  CHECK(!lusztig_hypothesis(f.m, rs).holds);
  CHECK_THROWS_WITH(reconstruct_from_values(f.m, restrict_to(rs, f.irr[0])), "hypothesis fails");
  CHECK_THROWS_WITH(unipotent_detect(f.m, f.irr[0], rs), "hypothesis fails");
  CHECK(!henniart_hypothesis(f.m, 1, rs).holds);
}

TEST_CASE("evrs subset classifies as elliptic regular semisimple") {
  for (int q : {3, 4, 5}) {
    auto m = build_model("GL2(" + std::to_string(q) + ")");
    const auto ev = evrs_subset(m);
    for (std::size_t c = 0; c < m.classes(); ++c)
      if (ev[c]) {
        auto cl = classify(m, m.cls.reps[c]);
        CHECK(cl.semisimple);
        CHECK(cl.regular);
        CHECK(cl.elliptic);
      }
    CHECK(ev == elliptic_rs_locus(m));
  }
}

TEST_CASE("GL2(11): uniqueness theorems") {
  const auto& f = gl2(11);
  REQUIRE(f.irr.size() == 120);
  const auto rs = rs_locus(f.m);
  REQUIRE(lusztig_hypothesis(f.m, rs).holds);
  REQUIRE(henniart_hypothesis(f.m, 1, rs).holds);

  SUBCASE("reconstruction round trip") {
    for (std::size_t r = 0; r < f.irr.size(); ++r) {
      auto rec = reconstruct_from_values(f.m, restrict_to(rs, f.irr[r]));
      CHECK(rec.solution == compute_Ztilde(f.m, f.cache, f.irr[r]));
      CHECK(rec.solutions_found == 2);
    }
    // constant input gives trivial characters only
    std::vector<Cyclo> constant(f.m.classes(), Cyclo::rational(f.m.M, 3));
    auto rec = reconstruct_from_values(f.m, restrict_to(rs, constant));
    for (const auto& e : rec.solution) {
      CHECK(std::all_of(e.exps.begin(), e.exps.end(), [](std::int64_t x) { return x == 0; }));
      CHECK(e.n == 3);
    }
    // random values are not character combinations
    auto rng = test_rng(99);
    std::vector<Cyclo> noise;
    for (std::size_t c = 0; c < f.m.classes(); ++c)
      noise.push_back(Cyclo::root(f.m.M, static_cast<std::int64_t>(rng() % f.m.M), static_cast<long>(rng() % 5) + 1));
    CHECK_THROWS_WITH(reconstruct_from_values(f.m, restrict_to(rs, noise)), "no solution");
  }

  SUBCASE("Henniart uniqueness on the nonsplit torus") {
    int tested = 0;
    for (std::int64_t c = 0; c < 120; ++c) {
      const CharPair p = nonsplit_pair(f.m, c);
      if (!in_general_position(f.m, p)) continue;
      ++tested;
      auto R = dl_character(f.m, p, f.greens);
      auto match = henniart_unique(f.m, p, restrict_to(rs, R.values), f.table, f.greens);
      CHECK(match.c_exponent == f.m.M / 2);  // c = epsilon = -1
      CHECK(match.equals_epsilon_R);
      CHECK(is_cuspidal(f.m, f.irr[match.rho]));
      // negated input: same representation, c = +1
      std::vector<Cyclo> neg;
      for (const auto& v : R.values) neg.push_back(v.scaled(-1));
      auto m2 = henniart_unique(f.m, p, restrict_to(rs, neg), f.table, f.greens);
      CHECK(m2.rho == match.rho);
      CHECK(m2.c_exponent == 0);
      // perturb one regular semisimple class
      auto bad = R.values;
      for (std::size_t k = 0; k < bad.size(); ++k)
        if (rs[k]) {
          bad[k] += Cyclo::rational(f.m.M, 1);
          break;
        }
      CHECK_THROWS_WITH(henniart_unique(f.m, p, restrict_to(rs, bad), f.table, f.greens), "no match");
    }
    CHECK(tested == 110);  // theta^q != theta
  }

  SUBCASE("unipotent detector") {
    const int st = steinberg_index(f);
    for (std::size_t r = 0; r < f.irr.size(); ++r) {
      const bool det = unipotent_detect(f.m, f.irr[r], rs);
      CHECK(det == unipotent_by_definition(f.m, f.cache, f.irr[r]));
      CHECK(det == (r == 0 || static_cast<int>(r) == st));
    }
  }
}
