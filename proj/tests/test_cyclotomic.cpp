#include <doctest.h>

#include <cmath>

#include "dlchar/cyclotomic.hpp"
#include "test_support.hpp"

using dlchar::cyclotomic::Cyclo;
using namespace dlchar::cyclotomic;

TEST_CASE("basic relations among roots of unity") {
  Cyclo s = Cyclo::rational(3, 1) + Cyclo::root(3, 1) + Cyclo::root(3, 2);
  CHECK(s.is_zero());
  CHECK((Cyclo::root(4, 1) * Cyclo::root(4, 1)) == Cyclo::rational(4, -1));
  CHECK(Cyclo::root(12, 3).lifted(24) == Cyclo::root(24, 6));
  CHECK(!Cyclo::root(5, 1).is_zero());
  CHECK(Cyclo::root(7, 3).conj() == Cyclo::root(7, 4));
}

TEST_CASE("as_rational on Gauss periods and non-rational values") {
  // zeta_5 + zeta_5^4 + zeta_5^2 + zeta_5^3 = -1
  Cyclo s(5);
  for (int k = 1; k < 5; ++k) s.add_term(k, 1);
  auto r = s.as_rational();
  REQUIRE(r.has_value());
  CHECK(*r == -1);
  CHECK(!Cyclo::root(5, 1).as_rational().has_value());
  // 2 cos(2pi/8)^2 = 2: (zeta_8 + zeta_8^7)^2
  Cyclo c = Cyclo::root(8, 1) + Cyclo::root(8, 7);
  auto r2 = (c * c).as_rational();
  REQUIRE(r2.has_value());
  CHECK(*r2 == 2);
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<mpz_class>{-1, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<mpz_class>{1, -1, 1});
  // Phi_105 is the first with a coefficient -2
  bool has_minus_two = false;
  for (const auto& c : cyclotomic_polynomial(105)) has_minus_two |= (c == -2);
  CHECK(has_minus_two);
  CHECK(cyclotomic_polynomial(105).size() == static_cast<std::size_t>(euler_phi(105) + 1));
  CHECK(ramanujan_sum(12, 0) == 4);
  CHECK(ramanujan_sum(12, 1) == 0);
  CHECK(ramanujan_sum(12, 6) == -4);
}

TEST_CASE("is_zero agrees with numeric evaluation on random sums") {
  auto rng = test_rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t M = 1 + static_cast<std::int64_t>(rng() % 60);
    Cyclo a(M);
    const int terms = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < terms; ++t) a.add_term(static_cast<std::int64_t>(rng() % M), static_cast<long>(rng() % 7) - 3);
    // add a known relation to make zeros common
    Cyclo z = a;
    if (trial % 2 == 0 && M % 2 == 0) z += Cyclo::root(M, 0) + Cyclo::root(M, M / 2);
    const bool numeric_zero = std::abs(z.numeric()) < 1e-9;
    CHECK(z.is_zero() == numeric_zero);
    // power basis agrees with the numeric value
    auto pb = z.power_basis();
    std::complex<double> v = 0;
    for (std::size_t k = 0; k < pb.size(); ++k) v += pb[k].get_d() * std::polar(1.0, 2 * M_PI * double(k) / double(M));
    CHECK(std::abs(v - z.numeric()) < 1e-8);
  }
}

TEST_CASE("huge coefficients fall back to exact reduction") {
  mpq_class big("123456789012345678901234567890");
  Cyclo a = Cyclo::root(7, 1, big) - Cyclo::root(7, 1, big);
  CHECK(a.is_zero());
  Cyclo b(7);
  for (int k = 0; k < 7; ++k) b.add_term(k, big);
  CHECK(b.is_zero());
  b.add_term(3, mpq_class(1, 3));
  CHECK(!b.is_zero());
}

TEST_CASE("json export uses the power basis") {
  auto j = to_json(Cyclo::root(3, 2));
  CHECK(j["M"] == 3);
  CHECK(j["power_basis"].size() == 2);
}
