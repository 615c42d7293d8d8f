#include "dlchar/torus.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dlchar/fq.hpp"

namespace dlchar::torus {

using lattice::IntMatrix;

RationalTorus make_torus(const std::string& type, rootdata::Flavor flavor, const std::string& twist) {
  RationalTorus T;
  T.datum = rootdata::build_root_datum(type, flavor);
  T.twist = rootdata::parse_twist(T.datum, twist);
  T.label = type + "/" + rootdata::flavor_name(flavor) + "/" + twist;
  return T;
}

IntMatrix frobenius_minus_one(const RationalTorus& T, std::int64_t q) {
  const int n = T.datum.rank;
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = mpz_class(static_cast<long>(T.twist.tau(i, j))) * static_cast<long>(q) - (i == j ? 1 : 0);
  return m;
}

mpz_class torus_order(const RationalTorus& T, std::int64_t q) {
  return abs(lattice::determinant(frobenius_minus_one(T, q)));
}

namespace {

// Points of the diagonalizable group with character group M = X/L are Hom(M/(F-1)M, Fbar^x),
// whose order is the p'-part of |M/(F-1)M|. The p-part is always trivial because q*tau - 1
// is invertible on p-primary torsion; a nontrivial p-part means something upstream is wrong.
mpz_class points_from_cokernel(const mpz_class& coker_order, std::int64_t q) {
  const int p = fq::prime_power(q).first;
  if (coker_order % p == 0) throw std::logic_error("p divides torsion");
  return coker_order;
}

bool subset_is_stable(const RationalTorus& T, const std::vector<int>& subset) {
  const auto w = rootdata::make_weyl_element(T.datum, T.twist.tau);
  std::vector<char> in(T.datum.roots.size(), 0);
  for (int i : subset) {
    if (i < 0 || i >= static_cast<int>(in.size())) throw std::invalid_argument("root index out of range");
    in[i] = 1;
  }
  for (int i : subset)
    if (!in[w.perm[i]]) return false;
  return true;
}

}  // namespace

mpz_class kernel_count(const RationalTorus& T, std::int64_t q, const std::vector<int>& subset) {
  if (!subset_is_stable(T, subset)) throw std::invalid_argument("subset not F-stable");
  const int n = T.datum.rank;
  const IntMatrix F = frobenius_minus_one(T, q);
  IntMatrix m(n, subset.size() + n);
  for (std::size_t c = 0; c < subset.size(); ++c)
    for (int i = 0; i < n; ++i) m(i, c) = static_cast<long>(T.datum.roots[subset[c]][i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, subset.size() + j) = F(i, j);
  const auto c = lattice::cokernel_of_columns(m);
  if (c.free_rank != 0) throw std::logic_error("q*tau - 1 is singular");
  return points_from_cokernel(c.torsion.order(), q);
}

NonregularCounter::NonregularCounter(const RationalTorus& T) : T_(T), orbits_(rootdata::root_orbits(T.datum, T.twist)) {
  if (orbits_.size() > 20) throw std::invalid_argument("too many root orbits for inclusion-exclusion");
  const int n = T.datum.rank;
  const std::uint32_t subsets = 1u << orbits_.size();
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    std::vector<int> roots;
    for (std::size_t o = 0; o < orbits_.size(); ++o)
      if (mask >> o & 1) roots.insert(roots.end(), orbits_[o].begin(), orbits_[o].end());
    IntMatrix R(n, roots.size());
    for (std::size_t c = 0; c < roots.size(); ++c)
      for (int i = 0; i < n; ++i) R(i, c) = static_cast<long>(T.datum.roots[roots[c]][i]);
    auto snf = lattice::smith_normal_form(R);
    Term t;
    t.sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
    for (int i = 0; i < n; ++i) t.divisors.push_back(i < static_cast<int>(roots.size()) ? snf.D(i, i) : mpz_class(0));
    t.U = snf.U;
    terms_.push_back(std::move(t));
  }
}

mpz_class NonregularCounter::count_nonregular(std::int64_t q) const {
  const int n = T_.datum.rank;
  const IntMatrix UF0 = frobenius_minus_one(T_, q);
  mpz_class total = 0;
  for (const auto& t : terms_) {
    const IntMatrix UF = t.U * UF0;
    IntMatrix m(n, 2 * n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = t.divisors[i];
      for (int j = 0; j < n; ++j) m(i, n + j) = UF(i, j);
    }
    const auto c = lattice::cokernel_of_columns(m);
    if (c.free_rank != 0) throw std::logic_error("q*tau - 1 is singular");
    const mpz_class k = points_from_cokernel(c.torsion.order(), q);
    total += t.sign * k;
  }
  return total;
}

mpz_class count_nonregular(const RationalTorus& T, std::int64_t q) { return NonregularCounter(T).count_nonregular(q); }

mpz_class count_regular(const RationalTorus& T, std::int64_t q) { return torus_order(T, q) - count_nonregular(T, q); }

namespace {

// X embedded in an ambient Z^m (columns = images of the basis of X) with free cokernel.
IntMatrix ambient_embedding(const rootdata::RootDatum& d) {
  const int r = d.rank;
  if (d.flavor == rootdata::Flavor::GLStyle) return IntMatrix::identity(r);
  if (d.type[0] == 'B' && d.flavor == rootdata::Flavor::Adjoint) {
    // alpha_i = e_i - e_{i+1}, alpha_n = e_n
    IntMatrix E(r, r);
    for (int i = 0; i < r; ++i) {
      E(i, i) = 1;
      if (i + 1 < r) E(i + 1, i) = -1;
    }
    return E;
  }
  if (d.type == "G2") {
    // short alpha_1 = e_1 - e_2, long alpha_2 = -2e_1 + e_2 + e_3 inside the sum-zero plane of Z^3
    return IntMatrix::from_rows({{1, -2}, {-1, 1}, {0, 1}});
  }
  throw std::invalid_argument("unsupported twist shape");
}

struct SignedPermutation {
  std::vector<int> target;  // e_i -> sign[i] * e_{target[i]}
  std::vector<int> sign;
};

bool find_signed_permutation(const IntMatrix& E, const rootdata::SmallMatrix& tau, SignedPermutation& out) {
  const int m = static_cast<int>(E.rows()), r = static_cast<int>(E.cols());
  if (m > 6) return false;
  IntMatrix T(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) T(i, j) = static_cast<long>(tau(i, j));
  const IntMatrix target = E * T;
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int signs = 0; signs < (1 << m); ++signs) {
      IntMatrix M(m, m);
      for (int i = 0; i < m; ++i) M(perm[i], i) = (signs >> i & 1) ? -1 : 1;
      if (M * E == target) {
        out.target = perm;
        out.sign.resize(m);
        for (int i = 0; i < m; ++i) out.sign[i] = (signs >> i & 1) ? -1 : 1;
        return true;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t n) {
  std::int64_t t = 0, nt = 1, r = n, nr = ((a % n) + n) % n;
  while (nr != 0) {
    const std::int64_t qq = r / nr;
    t -= qq * nt;
    std::swap(t, nt);
    r -= qq * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw std::logic_error("not invertible");
  return ((t % n) + n) % n;
}

}  // namespace

EnumerationResult enumerate_torus(const RationalTorus& T, std::int64_t q, std::int64_t cap) {
  const auto [p, k] = fq::prime_power(q);
  const IntMatrix E = ambient_embedding(T.datum);
  SignedPermutation sp;
  if (!find_signed_permutation(E, T.twist.tau, sp)) throw std::invalid_argument("unsupported twist shape");
  const int m = static_cast<int>(E.rows());

  // cycles of the signed permutation; fixed points satisfy t_i = t_{pi(i)}^{q eps_i}
  struct Cycle {
    std::vector<int> members;
    std::vector<std::int64_t> exponent;  // t_i = x^{exponent}
    std::int64_t order = 0;              // x ranges over the subgroup of this order
  };
  std::vector<Cycle> cycles;
  std::vector<char> seen(m, 0);
  int L = 1;
  for (int i0 = 0; i0 < m; ++i0) {
    if (seen[i0]) continue;
    Cycle c;
    int sign_product = 1, d = 0;
    for (int i = i0; !seen[i]; i = sp.target[i]) {
      seen[i] = 1;
      c.members.push_back(i);
      sign_product *= sp.sign[i];
      ++d;
    }
    std::int64_t qd = 1;
    for (int j = 0; j < d; ++j) qd *= q;
    c.order = sign_product == 1 ? qd - 1 : qd + 1;
    const int Lc = sign_product == 1 ? d : 2 * d;
    L = std::lcm(L, Lc);
    // exponent of t_{pi(i)} = exponent of t_i * eps_i * q^{-1}  (mod order)
    const std::int64_t qinv = c.order == 1 ? 0 : inverse_mod(q, c.order);
    std::int64_t e = 1;
    for (int i : c.members) {
      c.exponent.push_back(e);
      e = (((e * sp.sign[i]) % c.order + c.order) % c.order) * qinv % std::max<std::int64_t>(c.order, 1);
    }
    cycles.push_back(std::move(c));
  }
  if (k * L > 6) throw std::invalid_argument("too large");
  auto field = fq::FiniteField::get(p, k * L);
  const std::int64_t Q = field->size();
  std::int64_t total = 1;
  for (const auto& c : cycles) {
    if ((Q - 1) % c.order != 0) throw std::logic_error("cycle subgroup not inside the ambient field");
    total *= c.order;
    if (total > cap) throw std::invalid_argument("too large");
  }

  // per cycle: generator of the order-N subgroup as a field element
  std::vector<fq::FqElement> gens;
  for (const auto& c : cycles) gens.emplace_back(field, field->exp((Q - 1) / c.order));

  // characters in ambient coordinates: basis of X (for the fiber) and the roots
  auto ambient_of = [&](const rootdata::Vec& v) {
    std::vector<std::int64_t> a(m, 0);
    for (int i = 0; i < m; ++i)
      for (std::size_t j = 0; j < v.size(); ++j) a[i] += E(i, j).get_si() * v[j];
    return a;
  };
  // per character: exponent applied to x_c for each cycle
  auto cycle_exponents = [&](const std::vector<std::int64_t>& a) {
    std::vector<std::int64_t> ex;
    for (const auto& c : cycles) {
      std::int64_t s = 0;
      for (std::size_t t = 0; t < c.members.size(); ++t) s += a[c.members[t]] * c.exponent[t];
      ex.push_back(s);
    }
    return ex;
  };
  std::vector<std::vector<std::int64_t>> basis_chars, root_chars;
  for (int j = 0; j < T.datum.rank; ++j) {
    rootdata::Vec v(T.datum.rank, 0);
    v[j] = 1;
    basis_chars.push_back(cycle_exponents(ambient_of(v)));
  }
  for (const auto& r : T.datum.roots) root_chars.push_back(cycle_exponents(ambient_of(r)));

  const fq::FqElement one(field, 1);
  auto evaluate = [&](const std::vector<fq::FqElement>& xs, const std::vector<std::int64_t>& ex) {
    fq::FqElement v = one;
    for (std::size_t c = 0; c < xs.size(); ++c) v = v * xs[c].pow(ex[c]);
    return v == one;
  };

  std::int64_t fiber = 0, regular_amb = 0;
  std::vector<std::int64_t> idx(cycles.size(), 0);
  std::vector<fq::FqElement> xs(cycles.size(), one);
  for (std::int64_t n = 0; n < total; ++n) {
    bool in_fiber = true;
    for (const auto& b : basis_chars)
      if (!evaluate(xs, b)) {
        in_fiber = false;
        break;
      }
    if (in_fiber) ++fiber;
    bool regular = true;
    for (const auto& r : root_chars)
      if (evaluate(xs, r)) {
        regular = false;
        break;
      }
    if (regular) ++regular_amb;
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      xs[c] = xs[c] * gens[c];
      if (++idx[c] < cycles[c].order) break;
      idx[c] = 0;
      xs[c] = one;
    }
  }
  if (fiber == 0 || total % fiber != 0 || regular_amb % fiber != 0) throw std::logic_error("inconsistent fiber count");
  return {total / fiber, regular_amb / fiber};
}

std::int64_t count_regular_by_enumeration(const RationalTorus& T, std::int64_t q, std::int64_t cap) {
  return enumerate_torus(T, q, cap).regular;
}

nlohmann::json torus_record(const RationalTorus& T, std::int64_t q) {
  const mpz_class order = torus_order(T, q);
  const mpz_class nonreg = count_nonregular(T, q);
  nlohmann::json j;
  j["type"] = T.datum.type;
  j["flavor"] = rootdata::flavor_name(T.datum.flavor);
  j["twist_label"] = T.twist.label;
  j["q"] = q;
  auto num = [](const mpz_class& v) -> nlohmann::json {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
  };
  j["order"] = num(order);
  j["nonregular"] = num(nonreg);
  j["regular"] = num(order - nonreg);
  return j;
}

}  // namespace dlchar::torus
