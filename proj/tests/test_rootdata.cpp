#include <doctest.h>

#include <map>
#include <set>

#include "dlchar/rootdata.hpp"

using namespace dlchar::rootdata;

namespace {

// Brute-force centralizer count over the full matrix group.
std::uint64_t brute_centralizer(const RootDatum& d, const Twist& t) {
  std::uint64_t n = 0;
  for (const auto& x : enumerate_weyl_group(d, 100000))
    if (x * t.tau == t.tau * x) ++n;
  return n;
}

}  // namespace

TEST_CASE("catalog root counts and pairing") {
  const std::map<std::string, std::size_t> counts = {{"A1", 2}, {"A2", 6}, {"B2", 8}, {"B3", 18}, {"G2", 12},
                                                     {"F4", 48}, {"E6", 72}, {"E7", 126}, {"E8", 240}, {"D4", 24}};
  for (const auto& [type, n] : counts)
    for (Flavor f : {Flavor::Adjoint, Flavor::SimplyConnected}) {
      auto d = build_root_datum(type, f);
      CHECK(d.roots.size() == n);
      for (std::size_t i = 0; i < d.roots.size(); ++i) CHECK(d.pair(d.roots[i], d.coroots[i]) == 2);
      // reflections permute the roots
      for (int s = 0; s < d.semisimple_rank; ++s) CHECK_NOTHROW(make_weyl_element(d, d.reflection(s)));
    }
  auto gl = build_root_datum("A1", Flavor::GLStyle);
  CHECK(gl.rank == 2);
  CHECK(gl.roots == std::vector<Vec>{{1, -1}, {-1, 1}});
  CHECK_THROWS_AS(build_root_datum("X9", Flavor::Adjoint), std::invalid_argument);
  CHECK_THROWS_AS(build_root_datum("G2", Flavor::GLStyle), std::invalid_argument);
}

TEST_CASE("G2 simple root lengths follow Bourbaki numbering") {
  auto d = build_root_datum("G2", Flavor::Adjoint);
  // alpha_1 short: its coroot pairs with alpha_2 to -3
  CHECK(d.pair(d.roots[1], d.coroots[0]) == -3);
  CHECK(d.pair(d.roots[0], d.coroots[1]) == -1);
}

TEST_CASE("Coxeter element orders match the table") {
  for (const std::string type : {"A1", "A2", "A4", "B2", "B3", "B4", "D4", "G2", "F4", "E6", "E7", "E8"}) {
    auto d = build_root_datum(type, Flavor::Adjoint);
    CHECK(matrix_order(coxeter_element(d).matrix) == d.coxeter_number_table());
  }
  auto a1 = build_root_datum("A1", Flavor::Adjoint);
  CHECK(coxeter_element(a1).matrix.a == std::vector<std::int64_t>{-1});
  auto gl4 = build_root_datum("A3", Flavor::GLStyle);
  auto c = coxeter_element(gl4).matrix;
  CHECK(matrix_order(c) == 4);
  for (int j = 0; j < 4; ++j) {
    int ones = 0;
    for (int i = 0; i < 4; ++i) ones += c(i, j) == 1;
    CHECK(ones == 1);
  }
}

TEST_CASE("Weyl group orders") {
  CHECK(weyl_group_order(build_root_datum("A2", Flavor::Adjoint)) == 6);
  CHECK(weyl_group_order(build_root_datum("G2", Flavor::Adjoint)) == 12);
  CHECK(weyl_group_order(build_root_datum("B3", Flavor::Adjoint)) == 48);
  CHECK(weyl_group_order(build_root_datum("A3", Flavor::GLStyle)) == 24);
  CHECK(weyl_group_order(build_root_datum("F4", Flavor::Adjoint)) == 1152);
  CHECK(weyl_group_order(build_root_datum("E6", Flavor::Adjoint)) == 51840);
  CHECK(enumerate_weyl_group(build_root_datum("F4", Flavor::Adjoint), 100000).size() == 1152);
  CHECK_THROWS_WITH(weyl_group_order(build_root_datum("E8", Flavor::Adjoint)), "group too large");
  // degree products against orbit enumeration wherever the latter is cheap
  for (const char* t : {"A1", "A2", "A4", "B2", "B4", "C3", "D4", "D5", "G2", "F4", "E6", "E7"}) {
    const auto d = build_root_datum(t, Flavor::Adjoint);
    CHECK(weyl_order_from_degrees(d) == weyl_group_order(d));
  }
  CHECK(weyl_order_from_degrees(build_root_datum("E8", Flavor::Adjoint)) == 696729600ULL);
}

TEST_CASE("twisted centralizers") {
  auto a2 = build_root_datum("A2", Flavor::Adjoint);
  CHECK(twisted_centralizer_order(a2, split_twist(a2)) == 6);
  CHECK(twisted_centralizer_order(a2, coxeter_twist(a2)) == 3);
  auto g2 = build_root_datum("G2", Flavor::Adjoint);
  CHECK(twisted_centralizer_order(g2, coxeter_twist(g2)) == 6);
  for (const std::string type : {"A2", "A3", "B2", "B3", "G2", "F4", "D4"}) {
    auto d = build_root_datum(type, Flavor::Adjoint);
    CHECK(twisted_centralizer_order(d, split_twist(d)) == weyl_group_order(d));
    for (const auto& t : {coxeter_twist(d), parse_twist(d, "word:1"), parse_twist(d, "word:1,2,1")})
      CHECK(twisted_centralizer_order(d, t) == brute_centralizer(d, t));
  }
  auto e8 = build_root_datum("E8", Flavor::Adjoint);
  CHECK_THROWS_WITH(twisted_centralizer_order(e8, coxeter_twist(e8)), "group too large");
}

TEST_CASE("E6 and E7 Coxeter centralizers equal h") {
  for (const std::string type : {"E6", "E7"}) {
    auto d = build_root_datum(type, Flavor::Adjoint);
    CHECK(twisted_centralizer_order(d, coxeter_twist(d)) == static_cast<std::uint64_t>(d.coxeter_number_table()));
  }
}

TEST_CASE("root orbits") {
  auto a2 = build_root_datum("A2", Flavor::Adjoint);
  CHECK(root_orbits(a2, split_twist(a2)).size() == 6);
  for (const std::string type : {"A2", "G2", "B3", "F4", "E6", "E7", "E8"}) {
    auto d = build_root_datum(type, Flavor::Adjoint);
    auto orbits = root_orbits(d, coxeter_twist(d));
    CHECK(orbits.size() == static_cast<std::size_t>(d.semisimple_rank));
    std::size_t total = 0;
    for (const auto& o : orbits) {
      CHECK(o.size() == static_cast<std::size_t>(d.coxeter_number_table()));
      total += o.size();
    }
    CHECK(total == d.roots.size());
  }
}

TEST_CASE("split rank of twists") {
  auto gl2 = build_root_datum("A1", Flavor::GLStyle);
  CHECK(split_rank(split_twist(gl2)) == 2);
  CHECK(split_rank(coxeter_twist(gl2)) == 1);
  auto g2 = build_root_datum("G2", Flavor::Adjoint);
  CHECK(split_rank(coxeter_twist(g2)) == 0);
}

TEST_CASE("JSON round trip") {
  auto d = build_root_datum("F4", Flavor::Adjoint);
  auto j = to_json(d);
  auto back = root_datum_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.roots == d.roots);
  CHECK(back.coroots == d.coroots);
}
