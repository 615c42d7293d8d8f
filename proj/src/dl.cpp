#include "dlchar/dl.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dlchar/gln_tame.hpp"
#include "dlchar/inequalities.hpp"

namespace dlchar::dl {

using finitegrp::Matrix;

namespace {

constexpr std::int64_t kWeylGL2 = 2;

std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

int conj_by(const MatrixGroup& G, int x, int g) { return G.mul(G.mul(x, g), G.inverse(x)); }

std::int64_t p_part(std::int64_t n, std::int64_t p) {
  std::int64_t r = 1;
  while (n % p == 0) {
    n /= p;
    r *= p;
  }
  return r;
}

void require_connected(const ProductModel& m) {
  if (!m.connected()) throw std::invalid_argument("connected model only");
}

// Elements x of G° with x S1 x^-1 = S2, where Si are the conjugated tori of the pairs.
std::vector<int> transporters(const ProductModel& m, const CharPair& p1, const CharPair& p2) {
  const auto& G = *m.G;
  const auto& T1 = m.tori[p1.torus];
  const auto& T2 = m.tori[p2.torus];
  std::vector<int> out;
  if (T1.order() != T2.order()) return out;
  std::vector<int> gens1;
  for (int g : T1.gens) gens1.push_back(conj_by(G, p1.conj, g));
  const int c2inv = G.inverse(p2.conj);
  for (int x = 0; x < static_cast<int>(G.order()); ++x) {
    bool ok = true;
    for (int g : gens1) {
      const int y = conj_by(G, c2inv, conj_by(G, x, g));
      if (!T2.coords.count(y)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(x);
  }
  return out;
}

std::int64_t omega_log(const ProductModel& m, const CharPair& pair, std::int64_t j) {
  const std::int64_t ba = m.b / m.a;
  return mod(pair.omega_A * j % ba * (m.M / ba), m.M);
}

std::vector<Cyclo> lift_all(const std::vector<Cyclo>& v, std::int64_t M) {
  std::vector<Cyclo> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.modulus() == M ? x : x.lifted(M));
  return out;
}

}  // namespace

std::int64_t CatalogTorus::character_count() const {
  return std::accumulate(gen_orders.begin(), gen_orders.end(), std::int64_t{1}, std::multiplies<>());
}

std::vector<std::vector<std::int64_t>> CatalogTorus::characters() const {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> e(gen_orders.size(), 0);
  while (true) {
    out.push_back(e);
    std::size_t i = e.size();
    while (i > 0) {
      --i;
      if (++e[i] < gen_orders[i]) break;
      e[i] = 0;
      if (i == 0) return out;
    }
    if (e.empty()) return out;
  }
}

ProductModel build_model(std::shared_ptr<const MatrixGroup> Gp, std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 1 || b % a) throw std::invalid_argument("b must be a multiple of a");
  const auto& G = *Gp;
  const std::int64_t q = G.field->size();
  if (G.n != 2 || static_cast<std::int64_t>(G.order()) != (q * q - 1) * (q * q - q))
    throw std::invalid_argument("torus catalog supports GL2 only");
  // over F_2 the split torus has a single point and no longer determines its normalizer
  if (q < 3) throw std::invalid_argument("torus catalog needs q >= 3");
  ProductModel m;
  m.G = Gp;
  m.a = a;
  m.b = b;
  m.q = q;
  m.p = G.field->p();
  m.cls = finitegrp::conjugacy_classes(G);
  m.M = std::lcm(m.cls.exponent, b / a);
  const auto& F = *G.field;

  for (std::uint32_t l = 1; l < F.size(); ++l) {
    Matrix z = finitegrp::identity(2);
    z.at(0, 0) = z.at(1, 1) = l;
    m.center.push_back(G.index_of(z));
  }
  std::sort(m.center.begin(), m.center.end());

  // nonsplit torus generated by the first element of order q^2 - 1; the split torus uses det C
  int C = -1;
  for (int i = 0; i < static_cast<int>(G.order()); ++i)
    if (G.element_order(i) == q * q - 1) {
      C = i;
      break;
    }
  if (C < 0) throw std::logic_error("no element of order q^2 - 1");
  const std::uint32_t delta = finitegrp::determinant(F, G.element(C));

  CatalogTorus split;
  split.name = "split";
  split.split_rank = 2;
  Matrix d1 = finitegrp::identity(2), d2 = finitegrp::identity(2);
  d1.at(0, 0) = delta;
  d2.at(1, 1) = delta;
  split.gens = {G.index_of(d1), G.index_of(d2)};
  split.gen_orders = {q - 1, q - 1};
  for (std::int64_t i = 0; i < q - 1; ++i)
    for (std::int64_t j = 0; j < q - 1; ++j) {
      const int t = G.mul(G.power(split.gens[0], i), G.power(split.gens[1], j));
      split.elements.push_back(t);
      split.coords[t] = {i, j};
    }
  CatalogTorus nonsplit;
  nonsplit.name = "nonsplit";
  nonsplit.elliptic = true;
  nonsplit.split_rank = 1;
  nonsplit.gens = {C};
  nonsplit.gen_orders = {q * q - 1};
  for (std::int64_t i = 0, t = 0; i < q * q - 1; ++i, t = G.mul(t, C)) {
    nonsplit.elements.push_back(static_cast<int>(t));
    nonsplit.coords[static_cast<int>(t)] = {i};
  }
  m.tori = {split, nonsplit};

  const std::size_t r = m.cls.count();
  std::set<int> center_set(m.center.begin(), m.center.end());
  for (std::size_t c = 0; c < r; ++c) {
    const auto j = extended_jordan(m, m.cls.reps[c]);
    m.ss_part.push_back(j.s);
    m.unip_part.push_back(j.u);
    m.ss_class.push_back(m.cls.class_of[j.s]);
    m.central.push_back(center_set.count(m.cls.reps[c]) > 0);
  }
  for (std::size_t c = 0; c < r; ++c) m.regular_torus.push_back(classify(m, m.cls.reps[c]).torus);

  m.torus_meet.assign(m.tori.size(), std::vector<std::vector<int>>(r));
  for (std::size_t t = 0; t < m.tori.size(); ++t)
    for (int e : m.tori[t].elements) m.torus_meet[t][m.cls.class_of[e]].push_back(e);

  // distinct conjugates of each catalog torus by orbit search under the generators
  std::vector<int> gens;
  for (const auto& g : G.generators) gens.push_back(G.index_of(g));
  for (const auto& T : m.tori) {
    std::vector<int> base = T.elements;
    std::sort(base.begin(), base.end());
    std::set<std::vector<int>> seen{base};
    std::vector<std::pair<int, std::vector<int>>> frontier{{0, base}};
    std::vector<int> xs{0};
    for (std::size_t h = 0; h < frontier.size(); ++h)
      for (int g : gens) {
        std::vector<int> img;
        img.reserve(frontier[h].second.size());
        for (int e : frontier[h].second) img.push_back(conj_by(G, g, e));
        std::sort(img.begin(), img.end());
        if (seen.insert(img).second) {
          const int x = G.mul(g, frontier[h].first);
          xs.push_back(x);
          frontier.emplace_back(x, img);
        }
      }
    m.torus_conjugators.push_back(xs);
  }

  std::vector<bool> covered(G.order(), false);
  for (int g = 0; g < static_cast<int>(G.order()); ++g) {
    if (covered[g]) continue;
    m.coset_reps.push_back(g);
    for (int z : m.center) covered[G.mul(g, z)] = true;
  }
  return m;
}

ProductModel build_model(const std::string& spec, std::int64_t a, std::int64_t b) {
  return build_model(std::make_shared<const MatrixGroup>(finitegrp::group_from_spec(spec)), a, b);
}

std::string CharPair::to_string(const ProductModel& m) const {
  std::ostringstream os;
  os << m.tori[torus].name << "(";
  for (std::size_t i = 0; i < exps.size(); ++i) os << (i ? "," : "") << exps[i];
  os << ")";
  if (omega_A) os << " omegaA=" << omega_A;
  if (conj) os << " conj=" << conj;
  return os.str();
}

void validate_pair(const ProductModel& m, const CharPair& pair) {
  if (pair.torus < 0 || pair.torus >= static_cast<int>(m.tori.size())) throw std::invalid_argument("unknown torus");
  const auto& T = m.tori[pair.torus];
  if (pair.exps.size() != T.gens.size()) throw std::invalid_argument("character has the wrong number of exponents");
  for (std::size_t i = 0; i < pair.exps.size(); ++i)
    if (pair.exps[i] < 0 || pair.exps[i] >= T.gen_orders[i]) throw std::invalid_argument("exponent out of range");
  if (pair.omega_A < 0 || pair.omega_A >= m.b / m.a) throw std::invalid_argument("central character mismatch");
  if (pair.conj < 0 || pair.conj >= static_cast<int>(m.G->order())) throw std::invalid_argument("bad conjugator");
  const auto& G = *m.G;
  for (int g1 : T.gens)
    for (int g2 : T.gens) {
      const int x1 = conj_by(G, pair.conj, g1), x2 = conj_by(G, pair.conj, g2);
      if (theta_log(m, pair, G.mul(x1, x2)) != mod(theta_log(m, pair, x1) + theta_log(m, pair, x2), m.M))
        throw std::invalid_argument("theta is not a homomorphism");
    }
}

std::int64_t theta_log(const ProductModel& m, const CharPair& pair, int t) {
  const auto& G = *m.G;
  const auto& T = m.tori[pair.torus];
  const int t0 = pair.conj ? conj_by(G, G.inverse(pair.conj), t) : t;
  auto it = T.coords.find(t0);
  if (it == T.coords.end()) throw std::invalid_argument("element not in torus");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < pair.exps.size(); ++i)
    s = mod(s + pair.exps[i] * it->second[i] % m.M * (m.M / T.gen_orders[i]), m.M);
  return s;
}

std::vector<CharPair> all_pairs(const ProductModel& m) {
  std::vector<CharPair> out;
  for (int t = 0; t < static_cast<int>(m.tori.size()); ++t)
    for (auto& e : m.tori[t].characters()) out.push_back(CharPair{t, e, 0, 0});
  return out;
}

bool in_general_position(const ProductModel& m, const CharPair& pair) {
  if (m.a != 1) return false;  // the free part of W fixes every theta
  const auto& G = *m.G;
  const auto& T = m.tori[pair.torus];
  std::int64_t stab = 0;
  for (int x : transporters(m, pair, pair)) {
    bool fixes = true;
    for (int g : T.gens) {
      const int t = conj_by(G, pair.conj, g);
      if (theta_log(m, pair, conj_by(G, x, t)) != theta_log(m, pair, t)) {
        fixes = false;
        break;
      }
    }
    if (fixes) ++stab;
  }
  return stab == T.order();
}

int epsilon(const ProductModel& m, const CharPair& pair) { return (2 - m.tori[pair.torus].split_rank) % 2 ? -1 : 1; }

// ---- Green functions ----

std::int64_t GreenTable::at(const std::string& torus, const std::string& unip) const {
  auto it = values.find({torus, unip});
  if (it == values.end()) throw std::runtime_error("Green value missing");
  return it->second;
}

std::vector<GreenTable> builtin_green_tables(std::int64_t q) {
  GreenTable gl2{"GL2", {}};
  gl2.values[{"split", "1"}] = q + 1;
  gl2.values[{"split", "u"}] = 1;
  gl2.values[{"nonsplit", "1"}] = -(q - 1);
  // orthogonality against the split torus forces +1 here
  gl2.values[{"nonsplit", "u"}] = 1;
  GreenTable ts{"T_split", {}};
  ts.values[{"split", "1"}] = 1;
  GreenTable tn{"T_nonsplit", {}};
  tn.values[{"nonsplit", "1"}] = 1;
  return {gl2, ts, tn};
}

std::int64_t green_value(const std::vector<GreenTable>& tables, const std::string& scope, const std::string& torus,
                         const std::string& unip) {
  for (const auto& t : tables)
    if (t.scope == scope) return t.at(torus, unip);
  throw std::runtime_error("Green value missing");
}

std::vector<GreenCheck> check_green_tables(const ProductModel& m, const std::vector<GreenTable>& tables) {
  const auto& G = *m.G;
  std::vector<GreenCheck> out;
  for (const auto& table : tables) {
    GreenCheck chk;
    chk.scope = table.scope;
    // the group G_s the table serves, and the catalog tori inside it
    std::vector<int> Gs;
    std::vector<int> tori_in;
    if (table.scope == "GL2") {
      Gs.resize(G.order());
      std::iota(Gs.begin(), Gs.end(), 0);
      for (int t = 0; t < static_cast<int>(m.tori.size()); ++t) tori_in.push_back(t);
    } else {
      for (int t = 0; t < static_cast<int>(m.tori.size()); ++t)
        if (table.scope == "T_" + m.tori[t].name) {
          Gs = m.tori[t].elements;
          tori_in.push_back(t);
        }
      if (Gs.empty()) {
        chk.notes.push_back("unknown scope");
        out.push_back(chk);
        continue;
      }
    }
    std::set<int> Gs_set(Gs.begin(), Gs.end());
    const std::int64_t order = static_cast<std::int64_t>(Gs.size());
    std::vector<int> unip;
    for (int g : Gs)
      if (p_part(G.element_order(g), m.p) == G.element_order(g)) unip.push_back(g);
    int rank = 0;
    for (int t : tori_in) rank = std::max(rank, m.tori[t].split_rank);

    chk.orthogonality = true;
    chk.identity_values = true;
    try {
      for (int t1 : tori_in) {
        const auto& T1 = m.tori[t1];
        const mpq_class expect_one = mpq_class((rank - T1.split_rank) % 2 ? -1 : 1) * order /
                                     (p_part(order, m.p) * T1.order());
        if (mpq_class(table.at(T1.name, "1")) != expect_one) {
          chk.identity_values = false;
          chk.notes.push_back("Q_" + T1.name + "(1) != " + expect_one.get_str());
        }
        for (int t2 : tori_in) {
          const auto& T2 = m.tori[t2];
          mpq_class lhs = 0;
          for (int u : unip) {
            const std::string lab = u == 0 ? "1" : "u";
            lhs += table.at(T1.name, lab) * table.at(T2.name, lab);
          }
          lhs /= order;
          std::int64_t N = 0;
          for (int x : Gs) {
            bool ok = T1.order() == T2.order();
            for (int g : T1.gens) {
              if (!ok) break;
              ok = T2.coords.count(conj_by(G, x, g)) > 0;
            }
            if (ok) ++N;
          }
          const mpq_class rhs = mpq_class(N) / (T1.order() * T2.order());
          if (lhs != rhs) {
            chk.orthogonality = false;
            chk.notes.push_back(T1.name + "/" + T2.name + ": " + lhs.get_str() + " != " + rhs.get_str());
          }
        }
      }
    } catch (const std::runtime_error& e) {
      chk.orthogonality = false;
      chk.notes.push_back(e.what());
    }
    out.push_back(chk);
  }
  return out;
}

// ---- Jordan decomposition ----

JordanPair extended_jordan(const ProductModel& m, int g, std::int64_t k) {
  if (mod(k, m.a) != 0) throw std::invalid_argument("not in G′");
  const auto& G = *m.G;
  const std::int64_t o = G.element_order(g);
  const std::int64_t pa = p_part(o, m.p), rest = o / pa;
  // x = 1 mod rest, x = 0 mod pa
  std::int64_t x = 0;
  if (rest > 1) {
    for (std::int64_t t = 0; t < rest; ++t)
      if ((pa * t) % rest == 1 % rest) {
        x = pa * t;
        break;
      }
  }
  JordanPair j;
  j.s = G.power(g, x);
  j.u = G.mul(g, G.inverse(j.s));
  j.s_bar = j.s;
  for (int z : m.center) j.s_bar = std::min(j.s_bar, G.mul(j.s, z));
  return j;
}

Classification classify(const ProductModel& m, int g, std::int64_t k) {
  const auto jp = extended_jordan(m, g, k);
  const auto& G = *m.G;
  Classification c;
  c.semisimple = jp.u == 0;
  std::vector<int> cent;
  for (int x = 0; x < static_cast<int>(G.order()); ++x)
    if (G.mul(x, g) == G.mul(g, x)) cent.push_back(x);
  for (int t = 0; t < static_cast<int>(m.tori.size()); ++t) {
    if (static_cast<std::int64_t>(cent.size()) != m.tori[t].order()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < cent.size() && ok; ++i) {
      if (G.element_order(cent[i]) % m.p == 0) ok = false;
      for (std::size_t j = i + 1; j < cent.size() && ok; ++j)
        if (G.mul(cent[i], cent[j]) != G.mul(cent[j], cent[i])) ok = false;
    }
    if (ok) {
      c.regular = true;
      c.torus = t;
      c.elliptic = m.tori[t].elliptic;
    }
  }
  return c;
}

JordanReport jordan_exhaustive(const ProductModel& m) {
  const auto& G = *m.G;
  JordanReport rep;
  auto canon = [&](int g) {
    int r = g;
    for (int z : m.center) r = std::min(r, G.mul(g, z));
    return r;
  };
  std::map<std::pair<int, int>, int> image;
  rep.injective = true;
  for (int g : m.coset_reps) {
    const auto j = extended_jordan(m, g);
    ++rep.elements;
    if (!image.emplace(std::make_pair(j.s_bar, j.u), g).second) rep.injective = false;
  }
  std::vector<int> xs;
  if (G.order() <= 5000) {
    xs.resize(G.order());
    std::iota(xs.begin(), xs.end(), 0);
  } else {
    for (const auto& gen : G.generators) xs.push_back(G.index_of(gen));
  }
  rep.equivariant = true;
  for (int g : m.coset_reps) {
    const auto j = extended_jordan(m, g);
    for (int x : xs) {
      const auto jx = extended_jordan(m, conj_by(G, x, g));
      if (jx.s_bar != canon(conj_by(G, x, j.s_bar)) || jx.u != conj_by(G, x, j.u)) rep.equivariant = false;
    }
  }
  if (m.a > 1) {
    try {
      extended_jordan(m, 0, 1);
      rep.rejects_outside = false;
    } catch (const std::invalid_argument&) {
      rep.rejects_outside = true;
    }
  } else {
    rep.rejects_outside = true;  // G′ = G
  }
  return rep;
}

// ---- DL characters ----

namespace {

std::string scope_of(const ProductModel& m, std::size_t c_ss) {
  if (m.central[c_ss]) return "GL2";
  if (m.regular_torus[c_ss] < 0) throw std::logic_error("semisimple class neither central nor regular");
  return "T_" + m.tori[m.regular_torus[c_ss]].name;
}

std::vector<Cyclo> expand_cells(const ProductModel& m, const CharPair& pair, const std::vector<Cyclo>& base) {
  std::vector<Cyclo> cells(m.cells(), Cyclo(m.M));
  for (std::int64_t k = 0; k < m.b; ++k) {
    if (k % m.a) continue;
    const Cyclo w = Cyclo::root(m.M, omega_log(m, pair, k / m.a), m.a);
    for (std::size_t c = 0; c < m.classes(); ++c)
      if (!base[c].terms().empty()) cells[m.cell(c, k)] = base[c] * w;
  }
  return cells;
}

}  // namespace

DLCharacter dl_character(const ProductModel& m, const CharPair& pair, const std::vector<GreenTable>& greens) {
  validate_pair(m, pair);
  const auto& T = m.tori[pair.torus];
  const CharPair catalog{pair.torus, pair.exps, pair.omega_A, 0};
  std::vector<Cyclo> base(m.classes(), Cyclo(m.M));
  for (std::size_t c = 0; c < m.classes(); ++c) {
    const auto& meet = m.torus_meet[pair.torus][m.ss_class[c]];
    if (meet.empty()) continue;
    const std::string scope = scope_of(m, m.ss_class[c]);
    const std::string torus_label = scope == "GL2" ? T.name : scope.substr(2);
    const std::int64_t Q = green_value(greens, scope, torus_label, m.unip_part[c] == 0 ? "1" : "u");
    Cyclo s(m.M);
    for (int t : meet) s.add_term(theta_log(m, catalog, t), Q);
    base[c] = s;
  }
  return DLCharacter{pair, expand_cells(m, pair, base), epsilon(m, pair)};
}

DLCharacter dl_character_literal(const ProductModel& m, const CharPair& pair, const std::vector<GreenTable>& greens) {
  validate_pair(m, pair);
  const auto& G = *m.G;
  const auto& T = m.tori[pair.torus];
  const std::int64_t Zo = m.center_order();
  std::vector<Cyclo> base(m.classes(), Cyclo(m.M));
  const int cinv = G.inverse(pair.conj);
  for (std::size_t c = 0; c < m.classes(); ++c) {
    const int s = m.ss_part[c], u = m.unip_part[c];
    const std::int64_t Gs = m.cls.centralizer_orders[m.ss_class[c]];
    // |[G°]| / |[G′]| = 1 here; the free part of [G] contributes the factor a
    const mpq_class pref = mpq_class(Zo, Gs) * m.a;
    std::string scope = "GL2";
    if (Gs != static_cast<std::int64_t>(G.order())) {
      scope.clear();
      for (const auto& Tc : m.tori)
        if (Tc.order() == Gs) scope = "T_" + Tc.name;
      if (scope.empty()) throw std::runtime_error("Green value missing");
    }
    std::vector<mpq_class> acc(m.M, 0);
    bool any = false;
    for (int x : m.coset_reps) {
      const int xs = conj_by(G, x, s);
      if (!T.coords.count(conj_by(G, cinv, xs))) continue;
      // S^x = x^-1 S x sits in G_s; its type is the catalog type of S
      const std::int64_t Q = green_value(greens, scope, T.name, u == 0 ? "1" : "u");
      acc[theta_log(m, pair, xs)] += Q;
      any = true;
    }
    if (!any) continue;
    Cyclo v(m.M);
    for (std::int64_t e = 0; e < m.M; ++e)
      if (acc[e] != 0) v.add_term(e, acc[e] * pref);
    // the expansion below multiplies by a again
    base[c] = v.scaled(mpq_class(1, m.a));
  }
  return DLCharacter{pair, expand_cells(m, pair, base), epsilon(m, pair)};
}

std::vector<bool> rs_locus(const ProductModel& m) {
  std::vector<bool> mask(m.classes());
  for (std::size_t c = 0; c < m.classes(); ++c) mask[c] = m.regular_torus[c] >= 0;
  return mask;
}

std::vector<bool> elliptic_rs_locus(const ProductModel& m) {
  std::vector<bool> mask(m.classes());
  for (std::size_t c = 0; c < m.classes(); ++c) mask[c] = m.regular_torus[c] >= 0 && m.tori[m.regular_torus[c]].elliptic;
  return mask;
}

std::vector<bool> evrs_subset(const ProductModel& m) {
  // unramified GL_2: elements of k_E^x = F_{q^2}^x of degree exactly 2 over F_q
  std::vector<bool> mask(m.classes(), false);
  for (int t = 0; t < static_cast<int>(m.tori.size()); ++t) {
    if (!m.tori[t].elliptic) continue;
    std::int64_t count = 0;
    for (int e : m.tori[t].elements)
      if (m.tori[t].coords.at(e)[0] % (m.q + 1) != 0) {
        mask[m.cls.class_of[e]] = true;
        ++count;
      }
    if (mpz_class(count) != gln_tame::degree_exactly_n(2, m.q)) throw std::logic_error("evrs count mismatch");
  }
  return mask;
}

Cyclo model_inner(const ProductModel& m, const std::vector<Cyclo>& f1, const std::vector<Cyclo>& f2, bool star,
                  Part part, const std::vector<bool>* bullet) {
  const std::int64_t K = star ? m.b : m.a;
  std::vector<Cyclo> g1, g2;
  std::vector<std::int64_t> w;
  for (std::int64_t k = 0; k < K; ++k)
    for (std::size_t c = 0; c < m.classes(); ++c) {
      if (part != Part::All) {
        if (k % m.a) continue;
        const bool in = (*bullet)[m.ss_class[c]];
        if (in != (part == Part::Bullet)) continue;
      }
      g1.push_back(f1[m.cell(c, k)]);
      g2.push_back(f2[m.cell(c, k)]);
      w.push_back(m.cls.sizes[c]);
    }
  if (g1.empty()) return Cyclo(m.M);
  return finitegrp::weighted_inner_product(g1, g2, w, mpq_class(K * static_cast<std::int64_t>(m.G->order())));
}

ScalarCheck scalar_product_check(const ProductModel& m, const CharPair& p1, const CharPair& p2,
                                 const std::vector<GreenTable>& greens) {
  const auto& G = *m.G;
  ScalarCheck out;
  if (p1.omega_A == p2.omega_A) {
    std::int64_t count = 0;
    const auto& T1 = m.tori[p1.torus];
    for (int x : transporters(m, p1, p2)) {
      bool same = true;
      for (int g : T1.gens) {
        const int t = conj_by(G, p1.conj, g);
        if (theta_log(m, p1, t) != theta_log(m, p2, conj_by(G, x, t))) {
          same = false;
          break;
        }
      }
      if (same) ++count;
    }
    out.formula = m.a * count / T1.order();
  }
  const auto R1 = dl_character(m, p1, greens), R2 = dl_character(m, p2, greens);
  // the star product is defined for every pair; it agrees with the plain one when central characters match
  out.brute = model_inner(m, R1.values, R2.values, true);
  out.agree = out.brute == Cyclo::rational(m.M, out.formula);
  if (out.agree && p1.omega_A == p2.omega_A)
    out.agree = model_inner(m, R1.values, R2.values, false) == Cyclo::rational(m.M, out.formula);
  return out;
}

Cyclo innerprod_rhs(const ProductModel& m, const CharPair& p1, const CharPair& p2, const std::vector<bool>& bullet) {
  if (p1.omega_A != p2.omega_A) throw std::invalid_argument("central character mismatch");
  const auto& G = *m.G;
  const auto& T1 = m.tori[p1.torus];
  const auto N = transporters(m, p1, p2);
  std::vector<mpz_class> acc(m.M, 0);
  for (int t0 : T1.elements) {
    const int t = conj_by(G, p1.conj, t0);
    if (!bullet[m.cls.class_of[t]]) continue;
    const std::int64_t l1 = theta_log(m, p1, t);
    for (int n : N) acc[mod(l1 - theta_log(m, p2, conj_by(G, n, t)), m.M)] += 1;
  }
  const mpq_class scale = mpq_class(m.a) / (T1.order() * m.tori[p2.torus].order());
  Cyclo out(m.M);
  for (std::int64_t e = 0; e < m.M; ++e)
    if (acc[e] != 0) out.add_term(e, mpq_class(acc[e]) * scale);
  return out;
}

Cyclo innerprod2_rhs(const ProductModel& m, const CharPair& p1, const CharPair& p2, const std::vector<bool>& bullet) {
  const auto& G = *m.G;
  const auto& T1 = m.tori[p1.torus];
  const auto N = transporters(m, p1, p2);
  const std::int64_t ba = m.b / m.a;
  std::vector<mpz_class> acc(m.M, 0);
  for (int t0 : T1.elements) {
    const int t = conj_by(G, p1.conj, t0);
    if (bullet[m.cls.class_of[t]]) continue;
    const std::int64_t l1 = theta_log(m, p1, t);
    for (int n : N) {
      const std::int64_t d = l1 - theta_log(m, p2, conj_by(G, n, t));
      for (std::int64_t j = 0; j < ba; ++j) acc[mod(d + omega_log(m, p1, j) - omega_log(m, p2, j), m.M)] += 1;
    }
  }
  // b / (|[S1]*| |[S2]*|) with |[S]*| = |S°| b / a; the factor b counts N / Z* over the free part
  const mpq_class scale =
      mpq_class(m.b) / (mpq_class(T1.order() * ba) * mpq_class(m.tori[p2.torus].order() * ba));
  Cyclo out(m.M);
  for (std::int64_t e = 0; e < m.M; ++e)
    if (acc[e] != 0) out.add_term(e, mpq_class(acc[e]) * scale);
  return out;
}

bool twist_invariance_check(const ProductModel& m, const CharPair& p1, const CharPair& p2,
                            const std::vector<GreenTable>& greens) {
  const auto R1 = dl_character(m, p1, greens), R2 = dl_character(m, p2, greens);
  const Cyclo base = model_inner(m, R1.values, R2.values, true);
  for (std::int64_t j = 0; j < m.b; ++j) {
    auto twist = [&](const std::vector<Cyclo>& f) {
      std::vector<Cyclo> g = f;
      for (std::int64_t k = 0; k < m.b; ++k)
        for (std::size_t c = 0; c < m.classes(); ++c)
          g[m.cell(c, k)] = f[m.cell(c, k)] * Cyclo::root(m.M, mod(j * k, m.b) * (m.M / m.b));
      return g;
    };
    const auto T1 = twist(R1.values), T2 = twist(R2.values);
    if (model_inner(m, T1, T2, true) != base) return false;
    CharPair q1 = p1;
    q1.omega_A = mod(p1.omega_A + j, m.b / m.a);
    const auto R1t = dl_character(m, q1, greens);
    for (std::size_t i = 0; i < T1.size(); ++i)
      if (T1[i] != R1t.values[i]) return false;
  }
  return true;
}

// ---- geometric conjugacy ----

bool geom_conjugate(const ProductModel& m, const CharPair& p1, const CharPair& p2, int k_max) {
  auto degree = [&](const CharPair& p) { return m.tori[p.torus].elliptic ? 2 : 1; };
  auto pullback = [&](const CharPair& p, int k) {
    const mpz_class qk = [&] {
      mpz_class r = 1;
      for (int i = 0; i < k; ++i) r *= m.q;
      return r;
    }();
    const mpz_class N = qk - 1;
    std::vector<mpz_class> out;
    if (m.tori[p.torus].elliptic) {
      const mpz_class D = N / (m.q * m.q - 1);
      const mpz_class e1 = mpz_class(p.exps[0]) * D, e2 = mpz_class(p.exps[0]) * m.q * D;
      out.push_back(mpz_class(e1 % N));
      out.push_back(mpz_class(e2 % N));
    } else {
      const mpz_class D = N / (m.q - 1);
      for (auto c : p.exps) {
        mpz_class r = (mpz_class(c) * D) % N;
        out.push_back(r);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  bool tested = false, result = false;
  for (int k = 1; k <= k_max; ++k) {
    if (k % degree(p1) || k % degree(p2)) continue;
    tested = true;
    if (pullback(p1, k) == pullback(p2, k)) result = true;
  }
  if (!tested) throw std::invalid_argument("k_max too small to decide");
  return result;
}

// ---- connected-group detectors ----

bool ZEntry::operator<(const ZEntry& o) const {
  if (torus != o.torus) return torus < o.torus;
  if (exps != o.exps) return exps < o.exps;
  return n < o.n;
}

DLCache build_cache(const ProductModel& m, const std::vector<GreenTable>& greens) {
  require_connected(m);
  DLCache cache;
  cache.pairs = all_pairs(m);
  for (const auto& p : cache.pairs) {
    cache.chars.push_back(dl_character(m, p, greens));
    cache.images.push_back(finitegrp::reduce_at_prime(cache.chars.back().values, m.M, 1));
    cache.conj_images.push_back(finitegrp::reduce_at_prime(cache.chars.back().values, m.M, m.M - 1));
  }
  return cache;
}

std::int64_t integer_pairing(const ProductModel& m, const std::vector<Cyclo>& rho, const std::vector<Cyclo>& f) {
  return finitegrp::integer_inner_product(finitegrp::reduce_at_prime(rho, m.M, 1),
                                          finitegrp::reduce_at_prime(f, m.M, m.M - 1), m.cls.sizes,
                                          static_cast<std::int64_t>(m.G->order()), m.M);
}

ZTilde compute_Ztilde(const ProductModel& m, const DLCache& cache, const std::vector<Cyclo>& rho) {
  require_connected(m);
  const auto img = finitegrp::reduce_at_prime(rho, m.M, 1);
  ZTilde z;
  for (std::size_t i = 0; i < cache.pairs.size(); ++i) {
    const std::int64_t n = finitegrp::integer_inner_product(img, cache.conj_images[i], m.cls.sizes,
                                                            static_cast<std::int64_t>(m.G->order()), m.M);
    if (n) z.push_back(ZEntry{cache.pairs[i].torus, cache.pairs[i].exps, n});
  }
  std::sort(z.begin(), z.end());
  return z;
}

nlohmann::json ztilde_to_json(const ProductModel& m, const ZTilde& z) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : z) out.push_back({{"torus", m.tori[e.torus].name}, {"theta", e.exps}, {"n", e.n}});
  return out;
}

bool is_cuspidal(const ProductModel& m, const std::vector<Cyclo>& rho) {
  const auto& G = *m.G;
  Cyclo s(m.M);
  for (std::uint32_t x = 0; x < G.field->size(); ++x) {
    Matrix u = finitegrp::identity(2);
    u.at(0, 1) = x;
    s += rho[m.cls.class_of[G.index_of(u)]];
  }
  return s.is_zero();
}

SubsetValues restrict_to(const std::vector<bool>& mask, const std::vector<Cyclo>& values) {
  SubsetValues out{mask, values};
  for (std::size_t c = 0; c < mask.size(); ++c)
    if (!mask[c]) out.values[c] = Cyclo(values[c].modulus());
  return out;
}

namespace {

std::pair<std::int64_t, std::int64_t> torus_ratio(const ProductModel& m, int t, const std::vector<bool>& bullet) {
  std::int64_t outside = 0;
  for (int e : m.tori[t].elements)
    if (!bullet[m.cls.class_of[e]]) ++outside;
  // |[S]*| and |[S]* \ [S]*_bullet| both carry the factor b / a
  return {m.tori[t].order() * (m.b / m.a), outside * (m.b / m.a)};
}

std::string describe(const std::string& name, const inequalities::InequalityInstance& inst,
                     const inequalities::Verdict& v) {
  return name + ": " + v.lhs_string() + (v.holds ? " > " : " <= ") + inst.rhs.get_str();
}

}  // namespace

HypothesisReport lusztig_hypothesis(const ProductModel& m, const std::vector<bool>& bullet) {
  HypothesisReport rep;
  rep.holds = true;
  for (int t = 0; t < static_cast<int>(m.tori.size()); ++t) {
    const auto [num, den] = torus_ratio(m, t, bullet);
    inequalities::InequalityInstance inst;
    inst.variant = inequalities::Variant::L;
    inst.numerator = num;
    inst.denominator = den;
    inst.rhs = inequalities::rhs_lusztig(kWeylGL2, m.a);
    const auto v = inequalities::evaluate(inst);
    rep.holds = rep.holds && v.holds;
    rep.per_torus.push_back(describe(m.tori[t].name, inst, v));
  }
  return rep;
}

HypothesisReport henniart_hypothesis(const ProductModel& m, int t, const std::vector<bool>& bullet) {
  const CharPair trivial{t, std::vector<std::int64_t>(m.tori[t].gens.size(), 0), 0, 0};
  const std::int64_t W = static_cast<std::int64_t>(transporters(m, trivial, trivial).size()) / m.tori[t].order() * m.a;
  const auto [num, den] = torus_ratio(m, t, bullet);
  inequalities::InequalityInstance inst;
  inst.variant = inequalities::Variant::H;
  inst.numerator = num;
  inst.denominator = den;
  inst.rhs = inequalities::rhs_henniart(W);
  const auto v = inequalities::evaluate(inst);
  return HypothesisReport{v.holds, {describe(m.tori[t].name, inst, v)}};
}

Reconstruction reconstruct_from_values(const ProductModel& m, const SubsetValues& input) {
  require_connected(m);
  if (!lusztig_hypothesis(m, input.mask).holds) throw std::runtime_error("hypothesis fails");
  const std::size_t B = static_cast<std::size_t>(kWeylGL2 * m.a);
  Reconstruction out;
  using cd = std::complex<double>;
  const double tau = 2 * M_PI / static_cast<double>(m.M);
  for (int ti = 0; ti < static_cast<int>(m.tori.size()); ++ti) {
    const auto& T = m.tori[ti];
    const CharPair base{ti, std::vector<std::int64_t>(T.gens.size(), 0), 0, 0};
    std::vector<int> pts;
    for (int e : T.elements)
      if (input.mask[m.cls.class_of[e]]) pts.push_back(e);
    const auto chars = T.characters();
    const std::size_t nc = chars.size();
    // per point: coordinates, value and log step of each generator
    std::vector<std::vector<std::int64_t>> coord;
    std::vector<cd> v;
    for (int e : pts) {
      coord.push_back(T.coords.at(e));
      v.push_back(input.values[m.cls.class_of[e]].numeric());
    }
    auto char_log = [&](const std::vector<std::int64_t>& ex, std::size_t i) {
      std::int64_t s = 0;
      for (std::size_t g = 0; g < ex.size(); ++g) s = mod(s + ex[g] * coord[i][g] % m.M * (m.M / T.gen_orders[g]), m.M);
      return s;
    };
    // index of a character from exponents
    auto index_of = [&](const std::vector<std::int64_t>& ex) {
      std::size_t idx = 0;
      for (std::size_t g = 0; g < ex.size(); ++g) idx = idx * T.gen_orders[g] + ex[g];
      return idx;
    };
    std::vector<cd> bvec(nc), sums(nc);
    double vv = 0;
    for (const auto& x : v) vv += std::norm(x);
    for (std::size_t i = 0; i < nc; ++i) {
      cd bs = 0, ss = 0;
      for (std::size_t pnt = 0; pnt < pts.size(); ++pnt) {
        const cd th = std::polar(1.0, tau * static_cast<double>(char_log(chars[i], pnt)));
        bs += std::conj(th) * v[pnt];
        ss += th;
      }
      bvec[i] = bs;
      sums[i] = ss;
    }
    auto gram = [&](std::size_t i, std::size_t j) {
      std::vector<std::int64_t> d(chars[i].size());
      for (std::size_t g = 0; g < d.size(); ++g) d[g] = mod(chars[j][g] - chars[i][g], T.gen_orders[g]);
      return sums[index_of(d)];
    };
    auto exact_ok = [&](const std::vector<std::size_t>& supp, const std::vector<std::int64_t>& n) {
      for (std::size_t pnt = 0; pnt < pts.size(); ++pnt) {
        Cyclo s = input.values[m.cls.class_of[pts[pnt]]].scaled(-1);
        if (s.modulus() != m.M) s = s.lifted(m.M);
        for (std::size_t i = 0; i < supp.size(); ++i) s.add_term(char_log(chars[supp[i]], pnt), n[i]);
        if (!s.is_zero()) return false;
      }
      return true;
    };

    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::int64_t>>> found;
    const double tol = 1e-6 * std::max(1.0, vv);
    std::vector<std::size_t> supp;
    // supports in lexicographic order of character indices, sizes 0..B
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      ++out.candidates_examined;
      const std::size_t k = supp.size();
      std::vector<std::int64_t> n(k);
      bool plausible = true;
      if (k > 0) {
        // normal equations G n = b, solved by Gaussian elimination
        std::vector<std::vector<cd>> A(k, std::vector<cd>(k + 1));
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) A[i][j] = gram(supp[i], supp[j]);
          A[i][k] = bvec[supp[i]];
        }
        for (std::size_t c = 0; c < k && plausible; ++c) {
          std::size_t piv = c;
          for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
          if (std::abs(A[piv][c]) < 1e-9) throw std::logic_error("degenerate support");
          std::swap(A[piv], A[c]);
          for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const cd f = A[r][c] / A[c][c];
            for (std::size_t j = c; j <= k; ++j) A[r][j] -= f * A[c][j];
          }
        }
        for (std::size_t i = 0; i < k; ++i) {
          const cd x = A[i][k] / A[i][i];
          n[i] = std::llround(x.real());
          if (n[i] == 0 || std::abs(x.imag()) > 1e-6 || std::abs(x.real() - static_cast<double>(n[i])) > 1e-6)
            plausible = false;
        }
      }
      if (plausible) {
        double res = vv;
        for (std::size_t i = 0; i < k; ++i) {
          res -= 2 * static_cast<double>(n[i]) * bvec[supp[i]].real();
          for (std::size_t j = 0; j < k; ++j)
            res += static_cast<double>(n[i] * n[j]) * gram(supp[i], supp[j]).real();
        }
        if (res < tol && exact_ok(supp, n)) found.emplace_back(supp, n);
      }
      if (k == B) return;
      for (std::size_t i = start; i < nc; ++i) {
        supp.push_back(i);
        rec(i + 1);
        supp.pop_back();
      }
    };
    rec(0);
    out.solutions_found += static_cast<std::int64_t>(found.size());
    if (found.empty()) throw std::runtime_error("no solution");
    if (found.size() > 1) throw std::runtime_error("not unique");
    for (std::size_t i = 0; i < found[0].first.size(); ++i)
      out.solution.push_back(ZEntry{ti, chars[found[0].first[i]], found[0].second[i]});
    (void)base;
  }
  std::sort(out.solution.begin(), out.solution.end());
  return out;
}

std::vector<std::vector<Cyclo>> lifted_characters(const ProductModel& m, const CharacterTable& t) {
  std::vector<std::vector<Cyclo>> out;
  for (const auto& ch : t.characters) out.push_back(lift_all(ch.values, m.M));
  return out;
}

HenniartMatch henniart_unique(const ProductModel& m, const CharPair& pair, const SubsetValues& input,
                              const CharacterTable& table, const std::vector<GreenTable>& greens) {
  require_connected(m);
  validate_pair(m, pair);
  if (!in_general_position(m, pair)) throw std::invalid_argument("theta not in general position");
  if (!henniart_hypothesis(m, pair.torus, input.mask).holds) throw std::runtime_error("hypothesis fails");
  const auto values = lift_all(input.values, m.M);
  std::vector<std::size_t> pts;
  for (std::size_t c = 0; c < m.classes(); ++c)
    if (input.mask[c]) pts.push_back(c);
  std::size_t g0 = pts.empty() ? 0 : pts[0];
  double best = -1;
  for (auto c : pts)
    if (std::abs(values[c].numeric()) > best) {
      best = std::abs(values[c].numeric());
      g0 = c;
    }
  if (best < 1e-9) throw std::runtime_error("no match");
  const auto rhos = lifted_characters(m, table);
  std::vector<int> matches;
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    const auto& rho = rhos[r];
    const auto c = rho[g0].numeric() / values[g0].numeric();
    if (std::abs(std::abs(c) - 1) > 1e-7) continue;
    bool close = true;
    for (auto g : pts)
      if (std::abs(rho[g].numeric() - c * values[g].numeric()) > 1e-7) {
        close = false;
        break;
      }
    if (!close) continue;
    // exact: proportional everywhere with a ratio of absolute value 1
    bool exact = (rho[g0] * rho[g0].conj()) == (values[g0] * values[g0].conj());
    for (auto g : pts) {
      if (!exact) break;
      exact = (rho[g] * values[g0]) == (rho[g0] * values[g]);
    }
    if (exact) matches.push_back(static_cast<int>(r));
  }
  if (matches.empty()) throw std::runtime_error("no match");
  if (matches.size() > 1) throw std::runtime_error("multiple matches");
  HenniartMatch out;
  out.rho = matches[0];
  const auto& rho = rhos[out.rho];
  std::vector<std::int64_t> order{0, m.M / 2};
  for (std::int64_t j = 1; j < m.M; ++j)
    if (j != m.M / 2) order.push_back(j);
  out.c_exponent = -1;
  for (auto j : order)
    if (values[g0] * Cyclo::root(m.M, j) == rho[g0]) {
      out.c_exponent = j;
      out.c = Cyclo::root(m.M, j);
      break;
    }
  const auto R = dl_character(m, pair, greens);
  out.equals_epsilon_R = true;
  for (std::size_t c = 0; c < m.classes(); ++c)
    if (rho[c] != R.values[c].scaled(R.epsilon)) {
      out.equals_epsilon_R = false;
      break;
    }
  return out;
}

bool unipotent_detect(const ProductModel& m, const std::vector<Cyclo>& rho, const std::vector<bool>& bullet) {
  require_connected(m);
  if (!lusztig_hypothesis(m, bullet).holds) throw std::runtime_error("hypothesis fails");
  for (const auto& T : m.tori) {
    int first = -1;
    for (int e : T.elements) {
      const int c = m.cls.class_of[e];
      if (!bullet[c]) continue;
      if (first < 0)
        first = c;
      else if (c != first && rho[c] != rho[first])
        return false;
    }
  }
  return true;
}

bool unipotent_by_definition(const ProductModel& m, const DLCache& cache, const std::vector<Cyclo>& rho) {
  require_connected(m);
  const auto img = finitegrp::reduce_at_prime(rho, m.M, 1);
  for (std::size_t i = 0; i < cache.pairs.size(); ++i) {
    const auto& e = cache.pairs[i].exps;
    if (std::any_of(e.begin(), e.end(), [](std::int64_t x) { return x != 0; })) continue;
    if (finitegrp::integer_inner_product(img, cache.conj_images[i], m.cls.sizes,
                                         static_cast<std::int64_t>(m.G->order()), m.M) != 0)
      return true;
  }
  return false;
}

bool rho_ss_identity_check(const ProductModel& m, const DLCache& cache, const std::vector<Cyclo>& rho, int c) {
  require_connected(m);
  if (m.unip_part[c] != 0) throw std::invalid_argument("class is not semisimple");
  const auto& G = *m.G;
  const int s = m.cls.reps[c];
  const auto img = finitegrp::reduce_at_prime(rho, m.M, 1);
  std::vector<std::int64_t> mult(cache.pairs.size());
  for (std::size_t i = 0; i < cache.pairs.size(); ++i)
    mult[i] = finitegrp::integer_inner_product(img, cache.conj_images[i], m.cls.sizes,
                                               static_cast<std::int64_t>(G.order()), m.M);
  // tori of G_s: conjugates x S x^-1 commuting with s
  struct Hit {
    int torus;
    int x;
  };
  std::vector<Hit> hits;
  int rank = 0;
  for (int t = 0; t < static_cast<int>(m.tori.size()); ++t)
    for (int x : m.torus_conjugators[t]) {
      bool inside = true;
      for (int g : m.tori[t].gens) {
        const int y = conj_by(G, x, g);
        if (G.mul(y, s) != G.mul(s, y)) {
          inside = false;
          break;
        }
      }
      if (inside) {
        hits.push_back({t, x});
        rank = std::max(rank, m.tori[t].split_rank);
      }
    }
  Cyclo sum(m.M);
  for (const auto& h : hits) {
    const int sign = (rank - m.tori[h.torus].split_rank) % 2 ? -1 : 1;
    const int s0 = conj_by(G, G.inverse(h.x), s);  // s seen in the catalog torus
    for (std::size_t i = 0; i < cache.pairs.size(); ++i) {
      if (cache.pairs[i].torus != h.torus || mult[i] == 0) continue;
      sum.add_term(theta_log(m, cache.pairs[i], s0), sign * mult[i]);
    }
  }
  const std::int64_t pp = p_part(m.cls.centralizer_orders[c], m.p);
  return sum.scaled(mpq_class(1, pp)) == rho[c];
}

}  // namespace dlchar::dl
