#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dlchar::rootdata {

using Vec = std::vector<std::int64_t>;

// Small integer square matrix acting on column vectors of X.
struct SmallMatrix {
  int n = 0;
  std::vector<std::int64_t> a;  // row-major

  static SmallMatrix identity(int n);
  std::int64_t& operator()(int i, int j) { return a[i * n + j]; }
  std::int64_t operator()(int i, int j) const { return a[i * n + j]; }
  SmallMatrix operator*(const SmallMatrix& o) const;
  Vec apply(const Vec& v) const;
  bool operator==(const SmallMatrix& o) const { return n == o.n && a == o.a; }
  bool is_identity() const;
};

enum class Flavor { Adjoint, SimplyConnected, GLStyle };

std::string flavor_name(Flavor f);
Flavor parse_flavor(const std::string& s);

struct RootDatum {
  std::string type;  // e.g. "G2", "A1", "B3"
  Flavor flavor = Flavor::Adjoint;
  int rank = 0;                     // rank of X
  int semisimple_rank = 0;          // number of simple roots
  std::vector<Vec> roots;           // in X; the first semisimple_rank are the simple roots (Bourbaki order)
  std::vector<Vec> coroots;         // in Y = Hom(X, Z), dual coordinates
  std::vector<Vec> simple_coeffs;   // each root as an integer combination of simple roots

  std::int64_t pair(const Vec& x, const Vec& y) const;
  int root_index(const Vec& r) const;  // -1 if not a root
  bool is_positive(int idx) const;
  Vec two_rho() const;                 // sum of positive roots
  SmallMatrix reflection(int simple) const;
  int coxeter_number_table() const;    // built-in h per type
};

RootDatum build_root_datum(const std::string& type, Flavor flavor);

struct WeylElement {
  SmallMatrix matrix;
  std::vector<int> perm;  // perm[i] = index of matrix * roots[i]
  int word_length = -1;
};

WeylElement make_weyl_element(const RootDatum& d, const SmallMatrix& m);
WeylElement from_word(const RootDatum& d, const std::vector<int>& word);  // s_{w0} s_{w1} ... (1-based labels)
WeylElement coxeter_element(const RootDatum& d);

int matrix_order(const SmallMatrix& m, int limit = 1000);

struct Twist {
  WeylElement w;
  SmallMatrix sigma;  // diagram automorphism; identity for split groups
  SmallMatrix tau;    // w * sigma
  int order = 0;
  std::string label;
};

Twist make_twist(const RootDatum& d, const WeylElement& w, const std::string& label);
Twist split_twist(const RootDatum& d);
Twist coxeter_twist(const RootDatum& d);
Twist parse_twist(const RootDatum& d, const std::string& label);  // "split", "coxeter", "word:1,2,1"
Twist conjugate_twist(const RootDatum& d, const Twist& t, const WeylElement& x);  // x tau x^{-1}

constexpr std::uint64_t kDefaultWeylCap = 3'000'000;

// |W| by layered enumeration of the W-orbit of 2*rho; throws "group too large" beyond cap.
std::uint64_t weyl_group_order(const RootDatum& d, std::uint64_t cap = kDefaultWeylCap);
// Product of the degrees of the basic invariants, from the type label; no enumeration.
std::uint64_t weyl_order_from_degrees(const RootDatum& d);

// Full element list as matrices (small groups only).
std::vector<SmallMatrix> enumerate_weyl_group(const RootDatum& d, std::uint64_t cap);

std::uint64_t twisted_centralizer_order(const RootDatum& d, const Twist& t,
                                        std::uint64_t cap = kDefaultWeylCap);

std::vector<std::vector<int>> root_orbits(const RootDatum& d, const Twist& t);

// Rank of the tau-fixed sublattice (the F_q-split rank of the torus).
int split_rank(const Twist& t);

nlohmann::json to_json(const RootDatum& d);
RootDatum root_datum_from_json(const nlohmann::json& j);

}  // namespace dlchar::rootdata
