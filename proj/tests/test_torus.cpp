#include <doctest.h>

#include "dlchar/fq.hpp"
#include "dlchar/torus.hpp"
#include "test_support.hpp"

using namespace dlchar;
using namespace dlchar::torus;
using rootdata::Flavor;

namespace {

mpz_class poly(std::initializer_list<long> coeffs_high_first, long q) {
  mpz_class r = 0;
  for (long c : coeffs_high_first) r = r * q + c;
  return r;
}

}  // namespace

TEST_CASE("torus orders") {
  auto split = make_torus("A1", Flavor::GLStyle, "split");
  CHECK(torus_order(split, 5) == 16);
  CHECK(torus_order(make_torus("G2", Flavor::Adjoint, "coxeter"), 4) == 13);
  CHECK(torus_order(make_torus("E6", Flavor::Adjoint, "coxeter"), 2) == 91);
}

TEST_CASE("kernel counts") {
  auto T = make_torus("A2", Flavor::Adjoint, "coxeter");
  CHECK(kernel_count(T, 5, {}) == torus_order(T, 5));
  auto sl2 = make_torus("A1", Flavor::SimplyConnected, "split");
  CHECK(sl2.datum.roots[0] == rootdata::Vec{2});
  CHECK(kernel_count(sl2, 7, {0, 1}) == 2);
  CHECK_THROWS_WITH(kernel_count(make_torus("A2", Flavor::Adjoint, "coxeter"), 5, {0}), "subset not F-stable");
}

TEST_CASE("G2 Coxeter kernel with Z/3 torsion") {
  auto T = make_torus("G2", Flavor::Adjoint, "coxeter");
  auto orbits = rootdata::root_orbits(T.datum, T.twist);
  bool found = false;
  for (const auto& o : orbits) {
    lattice::IntMatrix R(2, o.size());
    for (std::size_t c = 0; c < o.size(); ++c)
      for (int i = 0; i < 2; ++i) R(i, c) = static_cast<long>(T.datum.roots[o[c]][i]);
    auto coker = lattice::cokernel_of_columns(R);
    if (coker.torsion.order() == 3) {
      found = true;
      for (long q : {2, 5, 8, 11, 17})
        CHECK(kernel_count(T, q, o) % 3 == 0);
    }
  }
  CHECK(found);
}

TEST_CASE("non-regular counts for the table examples") {
  auto F4 = make_torus("F4", Flavor::Adjoint, "coxeter");
  for (long q : {2, 3, 4, 5, 7, 8, 9}) CHECK(count_nonregular(F4, q) == 1);
  auto E7 = make_torus("E7", Flavor::Adjoint, "coxeter");
  CHECK(count_nonregular(E7, 5) == 18);
  CHECK(count_nonregular(E7, 7) == 8);
}

TEST_CASE("enumeration oracle") {
  auto G2 = make_torus("G2", Flavor::Adjoint, "coxeter");
  auto e = enumerate_torus(G2, 5);
  CHECK(e.order == 21);
  CHECK(e.regular == 18);
  auto gl2 = make_torus("A1", Flavor::GLStyle, "coxeter");
  auto g = enumerate_torus(gl2, 3);
  CHECK(g.order == 8);
  CHECK(g.regular == 6);
  auto B2 = make_torus("B2", Flavor::Adjoint, "coxeter");
  CHECK(enumerate_torus(B2, 3).order == 10);
  CHECK_THROWS_WITH(enumerate_torus(make_torus("F4", Flavor::Adjoint, "coxeter"), 2), "unsupported twist shape");
}

TEST_CASE("enumeration agrees with inclusion-exclusion wherever it applies") {
  struct Case {
    std::string type;
    Flavor flavor;
    std::string twist;
  };
  const std::vector<Case> cases = {{"A1", Flavor::GLStyle, "split"}, {"A1", Flavor::GLStyle, "coxeter"},
                                   {"A2", Flavor::GLStyle, "coxeter"}, {"A2", Flavor::GLStyle, "word:1"},
                                   {"A3", Flavor::GLStyle, "coxeter"}, {"A3", Flavor::GLStyle, "word:1,3"},
                                   {"B2", Flavor::Adjoint, "coxeter"}, {"B2", Flavor::Adjoint, "split"},
                                   {"B3", Flavor::Adjoint, "coxeter"}, {"G2", Flavor::Adjoint, "coxeter"},
                                   {"G2", Flavor::Adjoint, "split"}, {"G2", Flavor::Adjoint, "word:1"}};
  for (const auto& c : cases) {
    auto T = make_torus(c.type, c.flavor, c.twist);
    for (long q : {2, 3, 4, 5, 7, 8, 9, 11, 13}) {
      EnumerationResult e;
      try {
        e = enumerate_torus(T, q, 200000);
      } catch (const std::invalid_argument&) {
        continue;  // field degree outside the table, or too many points
      }
      INFO(T.label << " q=" << q);
      CHECK(mpz_class(e.order) == torus_order(T, q));
      CHECK(mpz_class(e.regular) == count_regular(T, q));
    }
  }
}

TEST_CASE("regular + nonregular = order, and conjugation invariance") {
  auto rng = test_rng(3);
  for (const std::string type : {"A2", "B2", "G2", "B3", "F4"}) {
    auto T = make_torus(type, Flavor::Adjoint, "coxeter");
    std::uniform_int_distribution<int> gen(1, T.datum.semisimple_rank), len(0, 12);
    NonregularCounter base(T);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> word(len(rng));
      for (auto& s : word) s = gen(rng);
      RationalTorus C = T;
      C.twist = rootdata::conjugate_twist(T.datum, T.twist, rootdata::from_word(T.datum, word));
      NonregularCounter conj(C);
      for (long q : {2, 3, 5, 7, 16, 49}) {
        CHECK(conj.count_nonregular(q) == base.count_nonregular(q));
        CHECK(torus_order(C, q) == torus_order(T, q));
      }
    }
  }
}

TEST_CASE("closed-form Coxeter torus polynomials for every prime power q <= 199") {
  NonregularCounter e6(make_torus("E6", Flavor::Adjoint, "coxeter"));
  NonregularCounter e7(make_torus("E7", Flavor::Adjoint, "coxeter"));
  NonregularCounter e8(make_torus("E8", Flavor::Adjoint, "coxeter"));
  NonregularCounter f4(make_torus("F4", Flavor::Adjoint, "coxeter"));
  NonregularCounter g2(make_torus("G2", Flavor::Adjoint, "coxeter"));
  for (long q : fq::prime_powers_up_to(199)) {
    const bool minus_one = q % 3 == 2;
    INFO("q=" << q);
    CHECK(e6.count_nonregular(q) == poly({1, 1, 1}, q));
    CHECK(e7.count_nonregular(q) == (minus_one ? 3 : 1) * poly({1, 1}, q));
    CHECK(e8.count_nonregular(q) == 1);
    CHECK(f4.count_nonregular(q) == 1);
    CHECK(g2.count_nonregular(q) == (minus_one ? 3 : 1));
  }
}
