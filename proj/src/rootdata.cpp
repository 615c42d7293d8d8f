#include "dlchar/rootdata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "dlchar/lattice.hpp"

namespace dlchar::rootdata {

SmallMatrix SmallMatrix::identity(int n) {
  SmallMatrix m{n, std::vector<std::int64_t>(n * n, 0)};
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

SmallMatrix SmallMatrix::operator*(const SmallMatrix& o) const {
  SmallMatrix r{n, std::vector<std::int64_t>(n * n, 0)};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto x = (*this)(i, k);
      if (x == 0) continue;
      for (int j = 0; j < n; ++j) r(i, j) += x * o(k, j);
    }
  return r;
}

Vec SmallMatrix::apply(const Vec& v) const {
  Vec r(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

bool SmallMatrix::is_identity() const { return *this == identity(n); }

std::string flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Adjoint: return "adjoint";
    case Flavor::SimplyConnected: return "simply-connected";
    case Flavor::GLStyle: return "GL";
  }
  return "?";
}

Flavor parse_flavor(const std::string& s) {
  if (s == "adjoint" || s == "ad") return Flavor::Adjoint;
  if (s == "simply-connected" || s == "sc") return Flavor::SimplyConnected;
  if (s == "GL" || s == "gl") return Flavor::GLStyle;
  throw std::invalid_argument("unknown flavor: " + s);
}

std::int64_t RootDatum::pair(const Vec& x, const Vec& y) const {
  std::int64_t s = 0;
  for (int i = 0; i < rank; ++i) s += x[i] * y[i];
  return s;
}

int RootDatum::root_index(const Vec& r) const {
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (roots[i] == r) return static_cast<int>(i);
  return -1;
}

bool RootDatum::is_positive(int idx) const {
  for (auto c : simple_coeffs[idx])
    if (c < 0) return false;
  return true;
}

Vec RootDatum::two_rho() const {
  Vec s(rank, 0);
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (is_positive(static_cast<int>(i)))
      for (int k = 0; k < rank; ++k) s[k] += roots[i][k];
  return s;
}

SmallMatrix RootDatum::reflection(int i) const {
  // s_i(x) = x - <x, a_i^v> a_i
  SmallMatrix m = SmallMatrix::identity(rank);
  for (int r = 0; r < rank; ++r)
    for (int c = 0; c < rank; ++c) m(r, c) -= roots[i][r] * coroots[i][c];
  return m;
}

int RootDatum::coxeter_number_table() const {
  const char t = type[0];
  const int n = std::stoi(type.substr(1));
  switch (t) {
    case 'A': return n + 1;
    case 'B':
    case 'C': return 2 * n;
    case 'D': return 2 * n - 2;
    case 'E': return n == 6 ? 12 : n == 7 ? 18 : 30;
    case 'F': return 12;
    case 'G': return 6;
  }
  throw std::logic_error("no Coxeter number for " + type);
}

std::uint64_t weyl_order_from_degrees(const RootDatum& d) {
  const char t = d.type[0];
  const std::uint64_t n = std::stoul(d.type.substr(1));
  std::uint64_t fact = 1;
  for (std::uint64_t i = 2; i <= n; ++i) fact *= i;
  switch (t) {
    case 'A': return fact * (n + 1);
    case 'B':
    case 'C': return fact << n;
    case 'D': return fact << (n - 1);
    case 'E': return n == 6 ? 51840 : n == 7 ? 2903040 : 696729600;
    case 'F': return 1152;
    case 'G': return 12;
  }
  throw std::logic_error("no Weyl group order for " + d.type);
}

namespace {

// Cartan matrix with a[i][j] = <alpha_j, alpha_i^vee>, Bourbaki numbering.
std::vector<std::vector<int>> cartan_matrix(char t, int n) {
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) a[i][i] = 2;
  auto link = [&](int i, int j) { a[i - 1][j - 1] = a[j - 1][i - 1] = -1; };
  switch (t) {
    case 'A':
      for (int i = 1; i < n; ++i) link(i, i + 1);
      break;
    case 'B':
      for (int i = 1; i < n; ++i) link(i, i + 1);
      if (n >= 2) a[n - 1][n - 2] = -2;  // alpha_n short
      break;
    case 'C':
      for (int i = 1; i < n; ++i) link(i, i + 1);
      if (n >= 2) a[n - 2][n - 1] = -2;  // alpha_n long
      break;
    case 'D':
      for (int i = 1; i < n - 1; ++i) link(i, i + 1);
      link(n - 2, n);
      break;
    case 'E':
      link(1, 3);
      link(3, 4);
      link(2, 4);
      for (int i = 4; i < n; ++i) link(i, i + 1);
      break;
    case 'F':
      link(1, 2);
      link(2, 3);
      link(3, 4);
      a[2][1] = -2;  // <alpha_2, alpha_3^vee>, alpha_3 short
      break;
    case 'G':
      a[0][1] = -3;  // alpha_1 short
      a[1][0] = -1;
      break;
  }
  return a;
}

void validate_type(char t, int n) {
  bool ok = false;
  switch (t) {
    case 'A': ok = n >= 1 && n <= 12; break;
    case 'B': ok = n >= 2 && n <= 8; break;
    case 'C': ok = n >= 3 && n <= 8; break;
    case 'D': ok = n >= 4 && n <= 8; break;
    case 'E': ok = n >= 6 && n <= 8; break;
    case 'F': ok = n == 4; break;
    case 'G': ok = n == 2; break;
  }
  if (!ok) throw std::invalid_argument("unsupported type");
}

}  // namespace

RootDatum build_root_datum(const std::string& type, Flavor flavor) {
  if (type.size() < 2) throw std::invalid_argument("unsupported type");
  const char t = type[0];
  int n = 0;
  try {
    n = std::stoi(type.substr(1));
  } catch (...) {
    throw std::invalid_argument("unsupported type");
  }
  validate_type(t, n);
  if (flavor == Flavor::GLStyle && t != 'A') throw std::invalid_argument("GL-style flavor exists only for type A");

  RootDatum d;
  d.type = type;
  d.flavor = flavor;
  d.semisimple_rank = n;
  std::vector<Vec> simple, simple_co;
  if (flavor == Flavor::GLStyle) {
    d.rank = n + 1;
    for (int i = 0; i < n; ++i) {
      Vec a(n + 1, 0);
      a[i] = 1;
      a[i + 1] = -1;
      simple.push_back(a);
      simple_co.push_back(a);
    }
  } else {
    d.rank = n;
    auto A = cartan_matrix(t, n);
    for (int i = 0; i < n; ++i) {
      Vec a(n, 0), c(n, 0);
      for (int j = 0; j < n; ++j) {
        if (flavor == Flavor::Adjoint) {
          a[j] = (i == j);   // X has basis alpha_j
          c[j] = A[i][j];    // <alpha_j, alpha_i^vee>
        } else {
          a[j] = A[j][i];    // alpha_i = sum_j <alpha_i, alpha_j^vee> omega_j
          c[j] = (i == j);
        }
      }
      simple.push_back(a);
      simple_co.push_back(c);
    }
  }

  // closure of (root, coroot, coefficient) triples under simple reflections
  auto pr = [&](const Vec& x, const Vec& y) {
    std::int64_t s = 0;
    for (int k = 0; k < d.rank; ++k) s += x[k] * y[k];
    return s;
  };
  std::map<Vec, int> seen;
  std::deque<int> queue;
  for (int i = 0; i < n; ++i) {
    Vec coeff(n, 0);
    coeff[i] = 1;
    seen[simple[i]] = i;
    d.roots.push_back(simple[i]);
    d.coroots.push_back(simple_co[i]);
    d.simple_coeffs.push_back(coeff);
    queue.push_back(i);
  }
  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    for (int i = 0; i < n; ++i) {
      const Vec& r = d.roots[idx];
      const Vec& c = d.coroots[idx];
      const std::int64_t k = pr(r, simple_co[i]);
      const std::int64_t kc = pr(simple[i], c);
      Vec r2 = r, c2 = c, co2 = d.simple_coeffs[idx];
      for (int m = 0; m < d.rank; ++m) {
        r2[m] -= k * simple[i][m];
        c2[m] -= kc * simple_co[i][m];
      }
      co2[i] -= k;
      if (seen.count(r2)) continue;
      seen[r2] = static_cast<int>(d.roots.size());
      d.roots.push_back(r2);
      d.coroots.push_back(c2);
      d.simple_coeffs.push_back(co2);
      queue.push_back(static_cast<int>(d.roots.size()) - 1);
    }
  }
  for (std::size_t i = 0; i < d.roots.size(); ++i)
    if (pr(d.roots[i], d.coroots[i]) != 2) throw std::logic_error("root datum construction: <a, a^v> != 2");
  return d;
}

WeylElement make_weyl_element(const RootDatum& d, const SmallMatrix& m) {
  WeylElement w{m, {}, -1};
  std::map<Vec, int> index;
  for (std::size_t i = 0; i < d.roots.size(); ++i) index[d.roots[i]] = static_cast<int>(i);
  w.perm.resize(d.roots.size());
  for (std::size_t i = 0; i < d.roots.size(); ++i) {
    auto it = index.find(m.apply(d.roots[i]));
    if (it == index.end()) throw std::invalid_argument("matrix does not permute the roots");
    w.perm[i] = it->second;
  }
  return w;
}

WeylElement from_word(const RootDatum& d, const std::vector<int>& word) {
  SmallMatrix m = SmallMatrix::identity(d.rank);
  for (int s : word) {
    if (s < 1 || s > d.semisimple_rank) throw std::invalid_argument("simple reflection label out of range");
    m = m * d.reflection(s - 1);
  }
  WeylElement w = make_weyl_element(d, m);
  w.word_length = static_cast<int>(word.size());
  return w;
}

WeylElement coxeter_element(const RootDatum& d) {
  std::vector<int> word(d.semisimple_rank);
  std::iota(word.begin(), word.end(), 1);
  return from_word(d, word);
}

int matrix_order(const SmallMatrix& m, int limit) {
  SmallMatrix p = m;
  for (int k = 1; k <= limit; ++k) {
    if (p.is_identity()) return k;
    p = p * m;
  }
  throw std::runtime_error("matrix order exceeds limit");
}

Twist make_twist(const RootDatum& d, const WeylElement& w, const std::string& label) {
  Twist t;
  t.w = w;
  t.sigma = SmallMatrix::identity(d.rank);
  t.tau = w.matrix * t.sigma;
  t.order = matrix_order(t.tau);
  t.label = label;
  return t;
}

Twist split_twist(const RootDatum& d) { return make_twist(d, from_word(d, {}), "split"); }

Twist coxeter_twist(const RootDatum& d) { return make_twist(d, coxeter_element(d), "coxeter"); }

Twist parse_twist(const RootDatum& d, const std::string& label) {
  if (label == "split" || label == "identity") return split_twist(d);
  if (label == "coxeter") return coxeter_twist(d);
  if (label.rfind("word:", 0) == 0) {
    std::vector<int> word;
    std::stringstream ss(label.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) word.push_back(std::stoi(tok));
    return make_twist(d, from_word(d, word), label);
  }
  throw std::invalid_argument("unknown twist: " + label);
}

namespace {

// Inverse of a Weyl group matrix via its finite order: x^{-1} = x^{ord-1}.
SmallMatrix weyl_inverse(const SmallMatrix& x) {
  const int k = matrix_order(x);
  SmallMatrix r = SmallMatrix::identity(x.n);
  for (int i = 1; i < k; ++i) r = r * x;
  return r;
}

struct MatrixHash {
  std::size_t operator()(const SmallMatrix& m) const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : m.a) h = (h ^ static_cast<std::size_t>(v + 1000)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

Twist conjugate_twist(const RootDatum& d, const Twist& t, const WeylElement& x) {
  const SmallMatrix xi = weyl_inverse(x.matrix);
  // x (w sigma) x^{-1} = (x w sigma x^{-1} sigma^{-1}) sigma; sigma is the identity in the catalog
  Twist r = make_twist(d, make_weyl_element(d, x.matrix * t.w.matrix * xi), t.label + "^x");
  return r;
}

std::uint64_t weyl_group_order(const RootDatum& d, std::uint64_t cap) {
  // Track w(2 rho) through its pairings with the simple coroots, packed 7 bits each;
  // |<w(2rho), a_i^v>| <= 2(h-1) < 64, and the pairings determine the orbit point.
  const int n = d.semisimple_rank;
  if (n > 9) throw std::runtime_error("group too large");
  std::vector<std::vector<std::int64_t>> cartan(n, std::vector<std::int64_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cartan[i][j] = d.pair(d.roots[i], d.coroots[j]);  // <a_i, a_j^v>
  auto pack = [&](const std::vector<std::int64_t>& c) {
    std::uint64_t key = 0;
    for (int i = 0; i < n; ++i) key |= static_cast<std::uint64_t>(c[i] + 64) << (7 * i);
    return key;
  };
  auto unpack = [&](std::uint64_t key) {
    std::vector<std::int64_t> c(n);
    for (int i = 0; i < n; ++i) c[i] = static_cast<std::int64_t>((key >> (7 * i)) & 127) - 64;
    return c;
  };
  const Vec start = d.two_rho();
  std::vector<std::int64_t> c0(n);
  for (int i = 0; i < n; ++i) c0[i] = d.pair(start, d.coroots[i]);
  std::vector<std::uint64_t> layer{pack(c0)};
  std::uint64_t total = 1;
  while (!layer.empty()) {
    std::vector<std::uint64_t> next;
    next.reserve(layer.size() * 2);
    for (std::uint64_t key : layer) {
      const auto c = unpack(key);
      for (int i = 0; i < n; ++i) {
        if (c[i] <= 0) continue;
        auto u = c;
        for (int j = 0; j < n; ++j) u[j] -= c[i] * cartan[i][j];
        next.push_back(pack(u));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    total += next.size();
    if (total > cap) throw std::runtime_error("group too large");
    layer = std::move(next);
  }
  return total;
}

std::vector<SmallMatrix> enumerate_weyl_group(const RootDatum& d, std::uint64_t cap) {
  std::unordered_set<SmallMatrix, MatrixHash> seen;
  std::vector<SmallMatrix> out{SmallMatrix::identity(d.rank)};
  seen.insert(out[0]);
  for (std::size_t head = 0; head < out.size(); ++head)
    for (int i = 0; i < d.semisimple_rank; ++i) {
      SmallMatrix m = out[head] * d.reflection(i);
      if (seen.insert(m).second) {
        out.push_back(m);
        if (out.size() > cap) throw std::runtime_error("group too large");
      }
    }
  return out;
}

std::uint64_t twisted_centralizer_order(const RootDatum& d, const Twist& t, std::uint64_t cap) {
  const std::uint64_t order = weyl_group_order(d, cap);
  // orbit of tau under conjugation by W (generated by simple reflections)
  std::unordered_set<SmallMatrix, MatrixHash> seen{t.tau};
  std::vector<SmallMatrix> frontier{t.tau};
  std::vector<SmallMatrix> refl;
  for (int i = 0; i < d.semisimple_rank; ++i) refl.push_back(d.reflection(i));
  while (!frontier.empty()) {
    std::vector<SmallMatrix> next;
    for (const auto& m : frontier)
      for (const auto& s : refl) {
        SmallMatrix c = s * m * s;
        if (seen.insert(c).second) next.push_back(std::move(c));
      }
    frontier = std::move(next);
  }
  if (order % seen.size() != 0) throw std::logic_error("class size does not divide |W|");
  return order / seen.size();
}

std::vector<std::vector<int>> root_orbits(const RootDatum& d, const Twist& t) {
  const WeylElement w = make_weyl_element(d, t.tau);
  std::vector<char> done(d.roots.size(), 0);
  std::vector<std::vector<int>> orbits;
  for (std::size_t i = 0; i < d.roots.size(); ++i) {
    if (done[i]) continue;
    std::vector<int> orb;
    int j = static_cast<int>(i);
    while (!done[j]) {
      done[j] = 1;
      orb.push_back(j);
      j = w.perm[j];
    }
    orbits.push_back(std::move(orb));
  }
  return orbits;
}

int split_rank(const Twist& t) {
  const int n = t.tau.n;
  lattice::IntMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = static_cast<long>(t.tau(i, j) - (i == j ? 1 : 0));
  return n - static_cast<int>(lattice::smith_invariants(m).size());
}

nlohmann::json to_json(const RootDatum& d) {
  nlohmann::json j;
  j["type"] = d.type;
  j["flavor"] = flavor_name(d.flavor);
  j["rank"] = d.rank;
  j["semisimple_rank"] = d.semisimple_rank;
  j["basis"] = d.flavor == Flavor::Adjoint           ? "simple roots"
               : d.flavor == Flavor::SimplyConnected ? "fundamental weights"
                                                     : "standard e_i";
  j["pairing"] = "dot product of X and Y coordinates";
  j["roots"] = d.roots;
  j["coroots"] = d.coroots;
  return j;
}

RootDatum root_datum_from_json(const nlohmann::json& j) {
  RootDatum d = build_root_datum(j.at("type").get<std::string>(), parse_flavor(j.at("flavor").get<std::string>()));
  if (j.at("roots").get<std::vector<Vec>>() != d.roots || j.at("coroots").get<std::vector<Vec>>() != d.coroots)
    throw std::invalid_argument("root datum JSON does not match the catalog entry");
  return d;
}

}  // namespace dlchar::rootdata
