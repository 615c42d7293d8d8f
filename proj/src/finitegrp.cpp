#include "dlchar/finitegrp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "dlchar/modarith.hpp"

namespace dlchar::finitegrp {

using modarith::invmod;
using modarith::mulmod;
using modarith::powmod;
using u64 = std::uint64_t;

std::size_t default_cap() {
  if (const char* env = std::getenv("DLCHAR_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("DLCHAR_CAP is not a number");
    }
  }
  return 2'000'000;
}

Matrix identity(int n) {
  Matrix m;
  m.n = n;
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix multiply(const fq::FiniteField& F, const Matrix& x, const Matrix& y) {
  Matrix r;
  r.n = x.n;
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      std::uint32_t s = 0;
      for (int k = 0; k < x.n; ++k) s = F.add(s, F.mul(x.at(i, k), y.at(k, j)));
      r.at(i, j) = s;
    }
  return r;
}

std::uint32_t determinant(const fq::FiniteField& F, const Matrix& x) {
  Matrix m = x;
  std::uint32_t det = 1;
  for (int c = 0; c < m.n; ++c) {
    int piv = -1;
    for (int r = c; r < m.n; ++r)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < m.n; ++j) std::swap(m.at(piv, j), m.at(c, j));
      det = F.neg(det);
    }
    det = F.mul(det, m.at(c, c));
    const std::uint32_t inv = F.inv(m.at(c, c));
    for (int r = c + 1; r < m.n; ++r) {
      const std::uint32_t f = F.mul(m.at(r, c), inv);
      if (f == 0) continue;
      for (int j = c; j < m.n; ++j) m.at(r, j) = F.sub(m.at(r, j), F.mul(f, m.at(c, j)));
    }
  }
  return det;
}

namespace {

Matrix matrix_inverse(const fq::FiniteField& F, const Matrix& x) {
  Matrix m = x, inv = identity(x.n);
  for (int c = 0; c < m.n; ++c) {
    int piv = -1;
    for (int r = c; r < m.n; ++r)
      if (m.at(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::invalid_argument("singular matrix");
    for (int j = 0; j < m.n; ++j) {
      std::swap(m.at(piv, j), m.at(c, j));
      std::swap(inv.at(piv, j), inv.at(c, j));
    }
    const std::uint32_t s = F.inv(m.at(c, c));
    for (int j = 0; j < m.n; ++j) {
      m.at(c, j) = F.mul(m.at(c, j), s);
      inv.at(c, j) = F.mul(inv.at(c, j), s);
    }
    for (int r = 0; r < m.n; ++r) {
      if (r == c || m.at(r, c) == 0) continue;
      const std::uint32_t f = m.at(r, c);
      for (int j = 0; j < m.n; ++j) {
        m.at(r, j) = F.sub(m.at(r, j), F.mul(f, m.at(c, j)));
        inv.at(r, j) = F.sub(inv.at(r, j), F.mul(f, inv.at(c, j)));
      }
    }
  }
  return inv;
}

}  // namespace

std::string to_string(const fq::FiniteField& F, const Matrix& x) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < x.n; ++i) {
    if (i) os << ",";
    os << "[";
    for (int j = 0; j < x.n; ++j) {
      if (j) os << ",";
      if (F.k() == 1) {
        os << x.at(i, j);
      } else {
        // coefficients of the polynomial basis, constant term first
        const auto c = F.coefficients(x.at(i, j));
        os << "(";
        for (std::size_t t = 0; t < c.size(); ++t) os << (t ? " " : "") << c[t];
        os << ")";
      }
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

std::uint64_t MatrixGroup::key(const Matrix& m) const {
  std::uint64_t k = 0;
  const std::uint64_t q = field->size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k = k * q + m.at(i, j);
  return k;
}

int MatrixGroup::index_of(const Matrix& m) const {
  auto it = index_.find(key(m));
  return it == index_.end() ? -1 : it->second;
}

int MatrixGroup::mul(int i, int j) const {
  const int r = index_of(multiply(*field, elements_[i], elements_[j]));
  if (r < 0) throw std::logic_error("product left the group");
  return r;
}

int MatrixGroup::power(int i, std::int64_t e) const {
  if (e < 0) {
    i = inverse_[i];
    e = -e;
  }
  int r = 0, b = i;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}

int MatrixGroup::element_order(int i) const {
  int o = 1;
  for (int x = i; x != 0; x = mul(x, i)) ++o;
  return o;
}

MatrixGroup enumerate_group(std::shared_ptr<const fq::FiniteField> field, int n, std::vector<Matrix> gens,
                            std::size_t cap, std::string name) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("matrix size out of range");
  if (std::log2(static_cast<double>(field->size())) * n * n > 63.5) throw std::invalid_argument("matrix key does not fit");
  MatrixGroup G;
  G.field = field;
  G.n = n;
  G.name = std::move(name);
  G.generators = std::move(gens);
  const Matrix id = identity(n);
  G.elements_.push_back(id);
  G.index_.emplace(G.key(id), 0);
  for (std::size_t head = 0; head < G.elements_.size(); ++head) {
    for (const auto& g : G.generators) {
      Matrix m = multiply(*field, G.elements_[head], g);
      const auto k = G.key(m);
      if (G.index_.count(k)) continue;
      if (G.elements_.size() >= cap) throw std::runtime_error("cap exceeded");
      G.index_.emplace(k, static_cast<int>(G.elements_.size()));
      G.elements_.push_back(m);
    }
  }
  G.inverse_.resize(G.elements_.size());
  for (std::size_t i = 0; i < G.elements_.size(); ++i) {
    const int j = G.index_of(matrix_inverse(*field, G.elements_[i]));
    if (j < 0) throw std::logic_error("inverse left the group");
    G.inverse_[i] = j;
  }
  return G;
}

namespace {

std::vector<Matrix> transvections(const fq::FiniteField& F, int n) {
  std::vector<Matrix> gens;
  std::uint32_t basis = 1;  // x^t is encoded as p^t
  for (int t = 0; t < F.k(); ++t, basis *= F.p())
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        Matrix m = identity(n);
        m.at(i, j) = basis;
        gens.push_back(m);
      }
  return gens;
}

}  // namespace

MatrixGroup general_linear(int n, std::int64_t q, std::size_t cap) {
  const auto [p, k] = fq::prime_power(q);
  auto F = fq::FiniteField::get(p, k);
  std::vector<Matrix> gens;
  Matrix d = identity(n);
  d.at(0, 0) = F->generator();
  gens.push_back(d);
  for (auto& t : transvections(*F, n)) gens.push_back(t);
  return enumerate_group(F, n, gens, cap, "GL" + std::to_string(n) + "(" + std::to_string(q) + ")");
}

MatrixGroup special_linear(int n, std::int64_t q, std::size_t cap) {
  const auto [p, k] = fq::prime_power(q);
  auto F = fq::FiniteField::get(p, k);
  return enumerate_group(F, n, transvections(*F, n), cap, "SL" + std::to_string(n) + "(" + std::to_string(q) + ")");
}

MatrixGroup group_from_spec(const std::string& spec, std::size_t cap) {
  static const std::regex re(R"(^(GL|SL)(\d)\((\d+)\)$)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw std::invalid_argument("unrecognized group spec: " + spec);
  const int n = std::stoi(m[2]);
  const std::int64_t q = std::stoll(m[3]);
  if (!fq::is_prime_power(q)) throw std::invalid_argument("q is not a prime power: " + spec);
  return m[1] == "GL" ? general_linear(n, q, cap) : special_linear(n, q, cap);
}

int ConjugacyClasses::power_class(const MatrixGroup& G, int c, std::int64_t e) const {
  return class_of[G.power(reps[c], e)];
}

ConjugacyClasses conjugacy_classes(const MatrixGroup& G) {
  ConjugacyClasses cls;
  const int N = static_cast<int>(G.order());
  cls.class_of.assign(N, -1);
  std::vector<int> gens, gens_inv;
  for (const auto& g : G.generators) {
    const int i = G.index_of(g);
    gens.push_back(i);
    gens_inv.push_back(G.inverse(i));
  }
  for (int start = 0; start < N; ++start) {
    if (cls.class_of[start] >= 0) continue;
    const int c = static_cast<int>(cls.reps.size());
    cls.reps.push_back(start);
    std::vector<int> orbit{start};
    cls.class_of[start] = c;
    for (std::size_t h = 0; h < orbit.size(); ++h)
      for (std::size_t t = 0; t < gens.size(); ++t) {
        const int y = G.mul(G.mul(gens[t], orbit[h]), gens_inv[t]);
        if (cls.class_of[y] < 0) {
          cls.class_of[y] = c;
          orbit.push_back(y);
        }
      }
    cls.sizes.push_back(static_cast<std::int64_t>(orbit.size()));
  }
  for (std::size_t c = 0; c < cls.reps.size(); ++c) {
    cls.centralizer_orders.push_back(static_cast<std::int64_t>(N) / cls.sizes[c]);
    cls.orders.push_back(G.element_order(cls.reps[c]));
    cls.inverse_class.push_back(cls.class_of[G.inverse(cls.reps[c])]);
    cls.exponent = std::lcm<std::int64_t>(cls.exponent, cls.orders.back());
  }
  return cls;
}

std::uint64_t dixon_prime(std::int64_t group_order, std::int64_t max_class, std::int64_t exponent) {
  const double bound = 2.0 * std::sqrt(static_cast<double>(group_order)) * static_cast<double>(max_class);
  return modarith::prime_one_mod(static_cast<u64>(exponent), static_cast<u64>(std::ceil(bound)));
}

namespace {

// ---- dense linear algebra and polynomials over F_l ----

using Mat = std::vector<std::vector<u64>>;
using Poly = std::vector<u64>;  // low degree first

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, u64 l) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 inv_lead = invmod(m.back(), l);
  while (a.size() > dm) {
    const u64 c = mulmod(a.back(), inv_lead, l);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t j = 0; j <= dm; ++j) a[shift + j] = (a[shift + j] + l - mulmod(c, m[j], l)) % l;
    trim(a);
  }
  return a;
}

Poly poly_div(Poly a, const Poly& m, u64 l) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  if (a.size() <= dm) return {};
  Poly q(a.size() - dm, 0);
  const u64 inv_lead = invmod(m.back(), l);
  while (a.size() > dm) {
    const u64 c = mulmod(a.back(), inv_lead, l);
    const std::size_t shift = a.size() - 1 - dm;
    q[shift] = c;
    for (std::size_t j = 0; j <= dm; ++j) a[shift + j] = (a[shift + j] + l - mulmod(c, m[j], l)) % l;
    a.pop_back();
  }
  return q;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, u64 l) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], l)) % l;
  return poly_mod(r, m, l);
}

Poly poly_powmod(Poly base, u64 e, const Poly& m, u64 l) {
  Poly r{1};
  base = poly_mod(base, m, l);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, l);
    e >>= 1;
    if (e) base = poly_mulmod(base, base, m, l);
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, u64 l) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, l);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const u64 inv = invmod(a.back(), l);
    for (auto& c : a) c = mulmod(c, inv, l);
  }
  return a;
}

void split_roots(const Poly& g, u64 l, std::vector<u64>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back(mulmod(l - g[0], invmod(g[1], l), l));
    return;
  }
  for (u64 a = 1;; ++a) {
    Poly h = poly_powmod(Poly{a % l, 1}, (l - 1) / 2, g, l);
    if (h.empty()) h = {0};
    h[0] = (h[0] + l - 1) % l;
    trim(h);
    Poly d = poly_gcd(g, h, l);
    if (d.size() > 1 && d.size() < g.size()) {
      split_roots(d, l, out);
      split_roots(poly_div(g, d, l), l, out);
      return;
    }
    if (a > 200) throw std::runtime_error("ell search failed");
  }
}

std::vector<u64> distinct_roots(const Poly& f, u64 l) {
  Poly xl = poly_powmod(Poly{0, 1}, l, f, l);
  xl.resize(std::max<std::size_t>(xl.size(), 2), 0);
  xl[1] = (xl[1] + l - 1) % l;
  trim(xl);
  Poly g = poly_gcd(f, xl, l);
  std::vector<u64> roots;
  split_roots(g, l, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Row-reduce in place; returns pivot columns.
std::vector<int> rref(Mat& a, u64 l, int ncols) {
  std::vector<int> piv;
  int row = 0;
  const int nrows = static_cast<int>(a.size());
  for (int c = 0; c < ncols && row < nrows; ++c) {
    int p = -1;
    for (int r = row; r < nrows; ++r)
      if (a[r][c]) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[row]);
    const u64 inv = invmod(a[row][c], l);
    for (auto& v : a[row]) v = mulmod(v, inv, l);
    for (int r = 0; r < nrows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      const u64 f = a[r][c];
      for (std::size_t j = 0; j < a[r].size(); ++j) a[r][j] = (a[r][j] + l - mulmod(f, a[row][j], l)) % l;
    }
    piv.push_back(c);
    ++row;
  }
  return piv;
}

// Basis (as columns) of the kernel of a d x d matrix.
Mat nullspace(Mat a, u64 l) {
  const int d = static_cast<int>(a.size());
  auto piv = rref(a, l, d);
  std::vector<bool> is_piv(d, false);
  for (int c : piv) is_piv[c] = true;
  Mat basis;  // list of column vectors
  for (int f = 0; f < d; ++f) {
    if (is_piv[f]) continue;
    std::vector<u64> v(d, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = (l - a[r][f]) % l;
    basis.push_back(v);
  }
  return basis;
}

Poly charpoly(Mat H, u64 l) {
  const int n = static_cast<int>(H.size());
  // Hessenberg reduction by similarity
  for (int m = 1; m + 1 < n; ++m) {
    int i = m;
    while (i < n && H[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(H[i], H[m]);
      for (int r = 0; r < n; ++r) std::swap(H[r][i], H[r][m]);
    }
    const u64 inv = invmod(H[m][m - 1], l);
    for (int r = m + 1; r < n; ++r) {
      const u64 u = mulmod(H[r][m - 1], inv, l);
      if (u == 0) continue;
      for (int c = 0; c < n; ++c) H[r][c] = (H[r][c] + l - mulmod(u, H[m][c], l)) % l;
      for (int c = 0; c < n; ++c) H[c][m] = (H[c][m] + mulmod(u, H[c][r], l)) % l;
    }
  }
  std::vector<Poly> p(n + 1);
  p[0] = {1};
  for (int m = 1; m <= n; ++m) {
    Poly cur(m + 1, 0);
    // (X - h_mm) p_{m-1}
    for (std::size_t j = 0; j < p[m - 1].size(); ++j) {
      cur[j + 1] = (cur[j + 1] + p[m - 1][j]) % l;
      cur[j] = (cur[j] + l - mulmod(H[m - 1][m - 1], p[m - 1][j], l)) % l;
    }
    u64 t = 1;
    for (int i = 1; i < m; ++i) {
      t = mulmod(t, H[m - i][m - i - 1], l);
      const u64 f = mulmod(t, H[m - i - 1][m - 1], l);
      if (f == 0) continue;
      for (std::size_t j = 0; j < p[m - i - 1].size(); ++j) cur[j] = (cur[j] + l - mulmod(f, p[m - i - 1][j], l)) % l;
    }
    p[m] = cur;
  }
  return p[n];
}

}  // namespace

CharacterTable character_table(const MatrixGroup& G, const ConjugacyClasses& cls, std::size_t class_cap) {
  const int r = static_cast<int>(cls.count());
  if (static_cast<std::size_t>(r) > class_cap) throw std::runtime_error("class count exceeds cap");
  const auto N = static_cast<std::int64_t>(G.order());
  const std::int64_t e = cls.exponent;
  const std::int64_t max_class = *std::max_element(cls.sizes.begin(), cls.sizes.end());
  CharacterTable tab;
  tab.M = e;
  tab.ell = dixon_prime(N, max_class, e);
  const u64 l = tab.ell;
  tab.zeta_mod_ell = modarith::root_of_unity(static_cast<u64>(e), l);

  // For each element x and class k: class of x^{-1} g_k, reused by every random combination.
  std::vector<std::vector<int>> partner(r, std::vector<int>(N));
  for (int k = 0; k < r; ++k)
    for (int x = 0; x < N; ++x) partner[k][x] = cls.class_of[G.mul(G.inverse(x), cls.reps[k])];

  std::mt19937_64 rng(0x5eedULL);
  auto combination = [&]() {
    std::vector<u64> c(r);
    for (auto& v : c) v = rng() % (l - 1) + 1;
    Mat B(r, std::vector<u64>(r, 0));
    for (int k = 0; k < r; ++k)
      for (int x = 0; x < N; ++x) {
        auto& cell = B[cls.class_of[x]][k];
        cell = (cell + c[partner[k][x]]) % l;
      }
    return B;
  };

  // spaces of simultaneous eigenvectors, columns stored as rows of length r
  std::vector<Mat> pending{Mat()};
  for (int i = 0; i < r; ++i) {
    std::vector<u64> v(r, 0);
    v[i] = 1;
    pending[0].push_back(v);
  }
  std::vector<std::vector<u64>> eigvecs;
  for (int round = 0; !pending.empty(); ++round) {
    if (round > 30) throw std::runtime_error("ell search failed");
    const Mat B = combination();
    std::vector<Mat> next;
    for (const Mat& V : pending) {
      const int d = static_cast<int>(V.size());
      // Solve V C = B V through row reduction of [V | BV]
      Mat aug(r, std::vector<u64>(2 * d, 0));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < d; ++j) {
          aug[i][j] = V[j][i];
          u64 s = 0;
          for (int k = 0; k < r; ++k) s = (s + mulmod(B[i][k], V[j][k], l)) % l;
          aug[i][d + j] = s;
        }
      auto piv = rref(aug, l, d);
      if (static_cast<int>(piv.size()) != d) throw std::logic_error("eigenspace basis lost rank");
      Mat C(d, std::vector<u64>(d));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) C[i][j] = aug[i][d + j];
      const auto roots = distinct_roots(charpoly(C, l), l);
      int found = 0;
      for (u64 lambda : roots) {
        Mat A = C;
        for (int i = 0; i < d; ++i) A[i][i] = (A[i][i] + l - lambda) % l;
        Mat W = nullspace(A, l);
        found += static_cast<int>(W.size());
        Mat sub;
        for (const auto& w : W) {
          std::vector<u64> v(r, 0);
          for (int j = 0; j < d; ++j)
            if (w[j])
              for (int i = 0; i < r; ++i) v[i] = (v[i] + mulmod(w[j], V[j][i], l)) % l;
          sub.push_back(v);
        }
        if (sub.size() == 1)
          eigvecs.push_back(sub[0]);
        else
          next.push_back(sub);
      }
      if (found != d) throw std::runtime_error("ell search failed");
    }
    pending = std::move(next);
  }
  if (static_cast<int>(eigvecs.size()) != r) throw std::runtime_error("ell search failed");

  const u64 Nl = static_cast<u64>(N) % l;
  struct Raw {
    std::int64_t degree;
    std::vector<u64> values;
  };
  std::vector<Raw> raws;
  for (auto v : eigvecs) {
    if (v[0] == 0) throw std::runtime_error("ell search failed");
    const u64 inv0 = invmod(v[0], l);
    for (auto& x : v) x = mulmod(x, inv0, l);
    u64 S = 0;
    for (int i = 0; i < r; ++i)
      S = (S + mulmod(mulmod(v[i], v[cls.inverse_class[i]], l), invmod(static_cast<u64>(cls.sizes[i]) % l, l), l)) % l;
    const u64 d2 = mulmod(Nl, invmod(S, l), l);
    std::int64_t deg = 0;
    for (std::int64_t d = 1; d * d <= N; ++d)
      if (static_cast<u64>(d * d) % l == d2) {
        deg = d;
        break;
      }
    if (deg == 0) throw std::runtime_error("ell search failed");
    Raw raw{deg, std::vector<u64>(r)};
    for (int i = 0; i < r; ++i)
      raw.values[i] = mulmod(mulmod(v[i], static_cast<u64>(deg), l), invmod(static_cast<u64>(cls.sizes[i]) % l, l), l);
    raws.push_back(std::move(raw));
  }
  std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
    const bool ta = std::all_of(a.values.begin(), a.values.end(), [](u64 x) { return x == 1; });
    const bool tb = std::all_of(b.values.begin(), b.values.end(), [](u64 x) { return x == 1; });
    if (a.degree != b.degree) return a.degree < b.degree;
    if (ta != tb) return ta;
    return a.values < b.values;
  });

  // power maps, needed to recover eigenvalue multiplicities
  std::vector<std::vector<int>> powcls(r);
  for (int i = 0; i < r; ++i) {
    int x = 0;
    for (int t = 0; t < cls.orders[i]; ++t) {
      powcls[i].push_back(cls.class_of[x]);
      x = G.mul(x, cls.reps[i]);
    }
  }
  std::vector<u64> zpow(e);
  zpow[0] = 1;
  for (std::int64_t k = 1; k < e; ++k) zpow[k] = mulmod(zpow[k - 1], tab.zeta_mod_ell, l);

  for (std::size_t idx = 0; idx < raws.size(); ++idx) {
    const Raw& raw = raws[idx];
    ClassFunction chi;
    chi.M = e;
    chi.label = "chi" + std::to_string(idx);
    for (int i = 0; i < r; ++i) {
      const std::int64_t o = cls.orders[i];
      const std::int64_t step = e / o;
      const u64 inv_o = invmod(static_cast<u64>(o) % l, l);
      Cyclo val(e);
      std::int64_t total = 0;
      for (std::int64_t k = 0; k < o; ++k) {
        u64 s = 0;
        for (std::int64_t t = 0; t < o; ++t) {
          const std::int64_t ex = (e - (step * ((k * t) % o)) % e) % e;
          s = (s + mulmod(raw.values[powcls[i][t]], zpow[ex], l)) % l;
        }
        const u64 m = mulmod(s, inv_o, l);
        if (m > static_cast<u64>(raw.degree)) throw std::runtime_error("ell search failed");
        total += static_cast<std::int64_t>(m);
        if (m) val.add_term(step * k, static_cast<long>(m));
      }
      if (total != raw.degree) throw std::runtime_error("ell search failed");
      chi.values.push_back(std::move(val));
    }
    tab.degrees.push_back(raw.degree);
    tab.characters.push_back(std::move(chi));
  }
  return tab;
}

Cyclo weighted_inner_product(const std::vector<Cyclo>& f1, const std::vector<Cyclo>& f2,
                             const std::vector<std::int64_t>& weights, const mpq_class& norm,
                             const std::vector<bool>* mask) {
  std::int64_t M = 1;
  for (const auto& v : f1) M = std::lcm(M, v.modulus());
  for (const auto& v : f2) M = std::lcm(M, v.modulus());
  std::vector<mpq_class> acc(M, 0);
  for (std::size_t c = 0; c < f1.size(); ++c) {
    if (mask && !(*mask)[c]) continue;
    const Cyclo a = f1[c].modulus() == M ? f1[c] : f1[c].lifted(M);
    const Cyclo b = f2[c].modulus() == M ? f2[c] : f2[c].lifted(M);
    for (const auto& [ka, ca] : a.terms())
      for (const auto& [kb, cb] : b.terms()) acc[((ka - kb) % M + M) % M] += ca * cb * weights[c];
  }
  Cyclo r(M);
  for (std::int64_t k = 0; k < M; ++k)
    if (acc[k] != 0) r.add_term(k, acc[k] / norm);
  return r;
}

Cyclo inner_product(const ConjugacyClasses& cls, const ClassFunction& f1, const ClassFunction& f2,
                    const std::vector<bool>* mask) {
  const std::int64_t N = std::accumulate(cls.sizes.begin(), cls.sizes.end(), std::int64_t{0});
  return weighted_inner_product(f1.values, f2.values, cls.sizes, mpq_class(N), mask);
}

std::vector<std::uint64_t> reduce_at_prime(const std::vector<Cyclo>& values, std::int64_t M, std::int64_t j) {
  const auto& pd = cyclotomic::PrimeData::get(M);
  const mpz_class lz(std::to_string(pd.l));
  std::vector<std::uint64_t> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    const Cyclo w = v.modulus() == M ? v : v.lifted(M);
    u64 s = 0;
    for (const auto& [k, c] : w.terms()) {
      mpz_class num = c.get_num() % lz, den = c.get_den() % lz;
      if (num < 0) num += lz;
      const u64 cn = std::stoull(num.get_str()), cd = std::stoull(den.get_str());
      const std::int64_t e = static_cast<std::int64_t>((static_cast<__int128>(k) * j) % M);
      s = (s + mulmod(mulmod(cn, invmod(cd, pd.l), pd.l), pd.zpow[(e + M) % M], pd.l)) % pd.l;
    }
    out.push_back(s);
  }
  return out;
}

std::int64_t integer_inner_product(const std::vector<std::uint64_t>& f1, const std::vector<std::uint64_t>& f2,
                                   const std::vector<std::int64_t>& weights, std::int64_t norm, std::int64_t M) {
  const u64 l = cyclotomic::PrimeData::get(M).l;
  u64 s = 0;
  for (std::size_t c = 0; c < f1.size(); ++c)
    s = (s + mulmod(mulmod(f1[c], f2[c], l), static_cast<u64>(weights[c]) % l, l)) % l;
  s = mulmod(s, invmod(static_cast<u64>(norm) % l, l), l);
  return s > l / 2 ? -static_cast<std::int64_t>(l - s) : static_cast<std::int64_t>(s);
}

TableCheck check_character_table(const MatrixGroup& G, const ConjugacyClasses& cls, const CharacterTable& t) {
  TableCheck chk;
  const auto N = static_cast<std::int64_t>(G.order());
  const int r = static_cast<int>(cls.count());
  const auto& pd = cyclotomic::PrimeData::get(t.M);
  const u64 l = pd.l;

  std::int64_t sizes = 0;
  chk.class_equation = true;
  for (int c = 0; c < r; ++c) {
    sizes += cls.sizes[c];
    if (cls.sizes[c] * cls.centralizer_orders[c] != N) chk.class_equation = false;
  }
  chk.class_equation = chk.class_equation && sizes == N;

  std::int64_t deg2 = 0;
  chk.degrees_divide = true;
  for (auto d : t.degrees) {
    deg2 += d * d;
    if (N % d) chk.degrees_divide = false;
  }
  chk.degree_sum = deg2 == N && static_cast<int>(t.degrees.size()) == r;

  // images under every embedding; the sums below are algebraic integers far below l in size,
  // so vanishing at all embeddings modulo l is exact
  const std::size_t U = pd.units.size();
  std::vector<std::vector<std::vector<u64>>> img(t.characters.size());  // [char][unit][class]
  std::vector<std::size_t> conj_unit(U);
  for (std::size_t u = 0; u < U; ++u) {
    const std::int64_t neg = (t.M - pd.units[u]) % t.M;
    conj_unit[u] = static_cast<std::size_t>(std::find(pd.units.begin(), pd.units.end(), neg) - pd.units.begin());
  }
  for (std::size_t a = 0; a < t.characters.size(); ++a)
    for (std::size_t u = 0; u < U; ++u) img[a].push_back(reduce_at_prime(t.characters[a].values, t.M, pd.units[u]));

  chk.row_orthogonal = chk.degree_sum;
  for (std::size_t a = 0; a < t.characters.size() && chk.row_orthogonal; ++a)
    for (std::size_t b = a; b < t.characters.size() && chk.row_orthogonal; ++b)
      for (std::size_t u = 0; u < U && chk.row_orthogonal; ++u) {
        u64 s = 0;
        for (int c = 0; c < r; ++c)
          s = (s + mulmod(mulmod(img[a][u][c], img[b][conj_unit[u]][c], l), static_cast<u64>(cls.sizes[c]), l)) % l;
        const u64 want = a == b ? static_cast<u64>(N) % l : 0;
        if (s != want) chk.row_orthogonal = false;
      }
  chk.column_orthogonal = chk.degree_sum;
  for (int c = 0; c < r && chk.column_orthogonal; ++c)
    for (int c2 = c; c2 < r && chk.column_orthogonal; ++c2)
      for (std::size_t u = 0; u < U && chk.column_orthogonal; ++u) {
        u64 s = 0;
        for (std::size_t a = 0; a < t.characters.size(); ++a)
          s = (s + mulmod(img[a][u][c], img[a][conj_unit[u]][c2], l)) % l;
        const u64 want = c == c2 ? static_cast<u64>(cls.centralizer_orders[c]) % l : 0;
        if (s != want) chk.column_orthogonal = false;
      }
  return chk;
}

nlohmann::json table_to_json(const MatrixGroup& G, const ConjugacyClasses& cls, const CharacterTable& t) {
  nlohmann::json j;
  j["group"] = G.name;
  j["order"] = G.order();
  j["exponent"] = t.M;
  j["dixon_prime"] = t.ell;
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < cls.count(); ++c)
    classes.push_back({{"rep", to_string(*G.field, G.element(cls.reps[c]))},
                       {"size", cls.sizes[c]},
                       {"order", cls.orders[c]}});
  j["classes"] = classes;
  nlohmann::json chars = nlohmann::json::array();
  for (std::size_t a = 0; a < t.characters.size(); ++a) {
    nlohmann::json vals = nlohmann::json::array();
    // sparse exponent/coefficient pairs over zeta_M
    for (const auto& v : t.characters[a].values) {
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& [k, c] : v.terms()) terms.push_back({k, c.get_str()});
      vals.push_back(terms);
    }
    chars.push_back({{"degree", t.degrees[a]}, {"values", vals}});
  }
  j["characters"] = chars;
  return j;
}

int dedekind_rank(std::int64_t N, std::int64_t z_order, const std::vector<std::int64_t>& exps,
                  const std::vector<std::int64_t>& excluded) {
  if (N % z_order) throw std::invalid_argument("subgroup order must divide N");
  const std::int64_t cosets = N / z_order;  // Z = cosets Z/N, coset of x is x mod cosets
  std::vector<bool> drop(cosets, false);
  for (auto c : excluded) drop[((c % cosets) + cosets) % cosets] = true;
  std::vector<std::int64_t> pts;
  for (std::int64_t x = 0; x < N; ++x)
    if (!drop[x % cosets]) pts.push_back(x);
  int best = 0;
  u64 l = static_cast<u64>(N);
  for (int attempt = 0; attempt < 3 && best < static_cast<int>(exps.size()); ++attempt) {
    l = modarith::prime_one_mod(static_cast<u64>(N), std::max<u64>(l, 1u << 20));
    const u64 z = modarith::root_of_unity(static_cast<u64>(N), l);
    Mat A;
    for (auto a : exps) {
      std::vector<u64> row;
      for (auto x : pts) row.push_back(powmod(z, static_cast<u64>(((a * x) % N + N) % N), l));
      A.push_back(row);
    }
    best = std::max(best, static_cast<int>(rref(A, l, static_cast<int>(pts.size())).size()));
  }
  return best;
}

DedekindTrialReport dedekind_property_trials(int count, std::uint64_t seed) {
  DedekindTrialReport rep;
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  while (rep.instances < count) {
    const std::int64_t N = uniform(2, 10000);
    std::vector<std::int64_t> divisors;
    for (std::int64_t d = 1; d <= N; ++d)
      if (N % d == 0) divisors.push_back(d);
    const std::int64_t zo = divisors[uniform(0, static_cast<std::int64_t>(divisors.size()) - 1)];
    const std::int64_t cosets = N / zo;
    const int n = static_cast<int>(uniform(1, 6));
    if (n > N) continue;
    // largest complement allowed by |Gamma/Z| > 2^{n-1} |complement|
    const std::int64_t max_excl = (cosets - 1) >> (n - 1);
    const std::int64_t k = uniform(0, max_excl);
    std::vector<std::int64_t> all(cosets);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::int64_t> excluded(all.begin(), all.begin() + k);
    std::vector<std::int64_t> exps;
    while (static_cast<int>(exps.size()) < n) {
      const std::int64_t a = uniform(0, N - 1);
      if (std::find(exps.begin(), exps.end(), a) == exps.end()) exps.push_back(a);
    }
    ++rep.instances;
    const int rank = dedekind_rank(N, zo, exps, excluded);
    if (rank != n) {
      ++rep.failures;
      rep.failure_notes.push_back("N=" + std::to_string(N) + " |Z|=" + std::to_string(zo) + " n=" + std::to_string(n));
    }
  }
  return rep;
}

}  // namespace dlchar::finitegrp
