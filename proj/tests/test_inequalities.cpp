#include <doctest.h>

#include "dlchar/fq.hpp"
#include "dlchar/inequalities.hpp"

using namespace dlchar;
using namespace dlchar::inequalities;
using rootdata::Flavor;

TEST_CASE("evaluate examples") {
  // GL_2 nonsplit torus, rs elements: |T| = q^2 - 1, non-rs = q - 1, W-order 2
  for (long q : {3, 5}) {
    auto T = torus::make_torus("A1", Flavor::GLStyle, "coxeter");
    torus::NonregularCounter c(T);
    InequalityInstance inst{Variant::H, torus::torus_order(T, q), c.count_nonregular(q), rhs_henniart(2), "all"};
    auto v = evaluate(inst);
    CHECK(v.holds == (q == 5));
    CHECK(*v.lhs_ratio == mpq_class(q + 1));
  }
  auto g2 = torus::make_torus("G2", Flavor::Adjoint, "coxeter");
  auto v = evaluate_torus_H(torus::NonregularCounter(g2), g2, 7, 6);
  CHECK(v.holds);
  CHECK(*v.lhs_ratio == 43);
  auto v5 = evaluate_torus_H(torus::NonregularCounter(g2), g2, 5, 6);
  CHECK_FALSE(v5.holds);
  CHECK(*v5.lhs_ratio == 7);
  InequalityInstance vac{Variant::H, 5, 0, 100, "all"};
  CHECK(evaluate(vac).holds);
  CHECK(evaluate(vac).lhs_string() == "infinite");
}

TEST_CASE("right-hand sides") {
  CHECK(rhs_lusztig(2, 1) == 8);
  CHECK(rhs_henniart(6) == 12);
}

TEST_CASE("trivial Weyl factor reduces H to lhs > 2") {
  InequalityInstance a{Variant::H, 5, 2, rhs_henniart(1), ""}, b{Variant::H, 4, 2, rhs_henniart(1), ""};
  CHECK(evaluate(a).holds);
  CHECK_FALSE(evaluate(b).holds);
}

TEST_CASE("toral generation in Z^2 quotients") {
  // Z/12 as Z^2 / <(12, 0), (0, 1)>: units generate, multiples of 2 do not
  std::vector<std::pair<std::int64_t, std::int64_t>> rel = {{12, 0}, {0, 1}};
  CHECK(generates_z2_quotient(rel, {{1, 0}, {5, 0}, {7, 0}, {11, 0}}));
  CHECK_FALSE(generates_z2_quotient(rel, {{2, 0}, {4, 0}, {6, 0}}));
  CHECK(generates_z2_quotient({{4, 0}, {0, 6}}, {{2, 3}, {1, 0}, {0, 1}}));
  CHECK_FALSE(generates_z2_quotient({{4, 0}, {0, 6}}, {{2, 3}, {0, 2}}));
}

TEST_CASE("min_q thresholds") {
  auto f4 = torus::make_torus("F4", Flavor::Adjoint, "coxeter");
  torus::NonregularCounter cf4(f4);
  CHECK(min_q_threshold(cf4, f4, 1, Congruence::All).all_q);
  auto e6 = torus::make_torus("E6", Flavor::Adjoint, "coxeter");
  auto t = min_q_threshold(torus::NonregularCounter(e6), e6, 12, Congruence::All);
  CHECK_FALSE(t.all_q);
  CHECK(t.q_min == 3);
  auto g2 = torus::make_torus("G2", Flavor::Adjoint, "coxeter");
  auto tg = min_q_threshold(torus::NonregularCounter(g2), g2, 6, Congruence::NotMinusOneMod3);
  CHECK(tg.q_min == 4);
  CHECK(threshold_matches(tg, "q>3", Congruence::NotMinusOneMod3));
  CHECK_FALSE(threshold_matches(tg, "q>4", Congruence::NotMinusOneMod3));
}

TEST_CASE("Weyl factors") {
  CHECK(weyl_factor(torus::make_torus("G2", Flavor::Adjoint, "coxeter")) == 6);
  CHECK(weyl_factor(torus::make_torus("E8", Flavor::Adjoint, "coxeter")) == 30);
}

TEST_CASE("exceptional table reproduces, with sharp thresholds") {
  auto rows = reproduce_exceptional_table();
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) {
    auto T = torus::make_torus(r.type, Flavor::Adjoint, "coxeter");
    torus::NonregularCounter c(T);
    const mpz_class w = weyl_factor(T);
    for (const auto& [th, weyl] : {std::pair{r.g0_s, mpz_class(1)}, std::pair{r.g0_g, w}}) {
      if (th.all_q) continue;
      // the previous prime power in the class fails, the threshold holds
      std::int64_t prev = 0;
      for (auto q : fq::prime_powers_up_to(th.q_min - 1))
        if (in_class(r.congruence, q)) prev = q;
      REQUIRE(prev > 0);
      CHECK_FALSE(evaluate_torus_H(c, T, prev, weyl).holds);
      CHECK(evaluate_torus_H(c, T, th.q_min, weyl).holds);
    }
  }
}
