#include <doctest.h>

#include "dlchar/lattice.hpp"
#include "test_support.hpp"

using namespace dlchar::lattice;

namespace {

// Cofactor expansion, the textbook definition; independent of the Bareiss and SNF code.
long long cofactor_det(const std::vector<std::vector<long long>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  long long s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long long> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    s += (c % 2 ? -1 : 1) * m[0][c] * cofactor_det(minor);
  }
  return s;
}

bool is_divisor_chain(const IntMatrix& D) {
  const std::size_t n = std::min(D.rows(), D.cols());
  for (std::size_t i = 0; i < D.rows(); ++i)
    for (std::size_t j = 0; j < D.cols(); ++j)
      if (i != j && D(i, j) != 0) return false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (D(i, i) < 0) return false;
    if (D(i, i) == 0 && D(i + 1, i + 1) != 0) return false;
    if (D(i, i) != 0 && D(i + 1, i + 1) % D(i, i) != 0) return false;
  }
  return true;
}

void check_snf(const IntMatrix& M) {
  auto s = smith_normal_form(M);
  CHECK(s.U * M * s.V == s.D);
  CHECK(is_unimodular(s.U));
  CHECK(is_unimodular(s.V));
  CHECK(is_divisor_chain(s.D));
}

}  // namespace

TEST_CASE("smith form of small examples") {
  auto s = smith_normal_form(IntMatrix::identity(3));
  CHECK(s.D == IntMatrix::identity(3));
  auto d = smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 3}}));
  CHECK(d.D == IntMatrix::from_rows({{1, 0}, {0, 6}}));
  check_snf(IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}));
  check_snf(IntMatrix::from_rows({{0, 0}, {0, 0}}));
  check_snf(IntMatrix::from_rows({{6, 4, 0}, {9, 6, 3}}));
}

TEST_CASE("random unimodular matrices reduce to the identity") {
  auto rng = test_rng(1);
  std::uniform_int_distribution<int> pick(0, 4), coeff(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix W = IntMatrix::identity(5);
    for (int step = 0; step < 20; ++step) {
      int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      IntMatrix E = IntMatrix::identity(5);
      E(i, j) = coeff(rng);
      W = W * E;
    }
    auto s = smith_normal_form(W);
    CHECK(s.D == IntMatrix::identity(5));
  }
}

TEST_CASE("SNF is idempotent on divisor chains") {
  IntMatrix D = IntMatrix::from_rows({{1, 0, 0}, {0, 4, 0}, {0, 0, 12}});
  CHECK(smith_normal_form(D).D == D);
}

TEST_CASE("cokernel examples") {
  auto c = cokernel(IntMatrix::from_rows({{2, 0}, {0, 2}}));
  REQUIRE(c.has_value());
  CHECK(c->order() == 4);
  CHECK(c->divisors.size() == 2);
  CHECK_FALSE(cokernel(IntMatrix::from_rows({{0}})).has_value());
  // q c - 1 for the G2 Coxeter element in the simple-root basis, q = 4
  // c = s1 s2 with s1 = [[-1,3],[0,1]], s2 = [[1,0],[1,-1]]
  IntMatrix s1 = IntMatrix::from_rows({{-1, 3}, {0, 1}}), s2 = IntMatrix::from_rows({{1, 0}, {1, -1}});
  IntMatrix cox = s1 * s2;
  auto g = cokernel(cox.scaled(4) - IntMatrix::identity(2));
  REQUIRE(g.has_value());
  CHECK(g->order() == 13);
  CHECK(g->divisors.size() == 1);
}

TEST_CASE("random 4x4: cokernel order equals |det| by cofactor expansion") {
  auto rng = test_rng(2);
  std::uniform_int_distribution<int> entry(-9, 9);
  int done = 0;
  while (done < 500) {
    std::vector<std::vector<long long>> raw(4, std::vector<long long>(4));
    std::vector<std::vector<long>> rows(4, std::vector<long>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) rows[i][j] = raw[i][j] = entry(rng);
    const long long det = cofactor_det(raw);
    if (det == 0) continue;
    auto c = cokernel(IntMatrix::from_rows(rows));
    REQUIRE(c.has_value());
    CHECK(c->order() == static_cast<long>(std::llabs(det)));
    CHECK(determinant(IntMatrix::from_rows(rows)) == static_cast<long>(det));
    ++done;
  }
}

TEST_CASE("rectangular cokernel keeps the free part") {
  auto c = cokernel_of_columns(IntMatrix::from_rows({{2}, {0}}));
  CHECK(c.free_rank == 1);
  CHECK(c.torsion.order() == 2);
}
