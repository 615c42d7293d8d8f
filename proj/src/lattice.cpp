#include "dlchar/lattice.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace dlchar::lattice {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  if (rows.empty()) return {};
  IntMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch in product");
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const mpz_class& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

IntMatrix IntMatrix::scaled(const mpz_class& c) const {
  IntMatrix r = *this;
  for (auto& x : r.a_) x *= c;
  return r;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
  }
  os << "]";
  return os.str();
}

mpz_class determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace {

// Elimination on a working copy, optionally tracking the row/column transforms.
// Classic pivot-on-smallest-entry scheme; entries stay small enough for desk-scale use.
void smith_in_place(IntMatrix& a, IntMatrix* U, IntMatrix* V) {
  const std::size_t R = a.rows(), C = a.cols();
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < C; ++c) std::swap(a(i, c), a(j, c));
    if (U)
      for (std::size_t c = 0; c < R; ++c) std::swap((*U)(i, c), (*U)(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < R; ++r) std::swap(a(r, i), a(r, j));
    if (V)
      for (std::size_t r = 0; r < C; ++r) std::swap((*V)(r, i), (*V)(r, j));
  };
  // row_i -= f * row_j
  auto add_row = [&](std::size_t i, std::size_t j, const mpz_class& f) {
    for (std::size_t c = 0; c < C; ++c) a(i, c) -= f * a(j, c);
    if (U)
      for (std::size_t c = 0; c < R; ++c) (*U)(i, c) -= f * (*U)(j, c);
  };
  auto add_col = [&](std::size_t i, std::size_t j, const mpz_class& f) {
    for (std::size_t r = 0; r < R; ++r) a(r, i) -= f * a(r, j);
    if (V)
      for (std::size_t r = 0; r < C; ++r) (*V)(r, i) -= f * (*V)(r, j);
  };

  const std::size_t n = std::min(R, C);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // pivot: smallest nonzero |entry| in the trailing block
      bool found = false;
      std::size_t pi = t, pj = t;
      mpz_class best;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j)
          if (a(i, j) != 0 && (!found || abs(a(i, j)) < best)) {
            best = abs(a(i, j));
            pi = i;
            pj = j;
            found = true;
          }
      if (!found) return;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a(i, t) == 0) continue;
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        add_row(i, t, f);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a(t, j) == 0) continue;
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        add_col(j, t, f);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: the pivot must divide the whole trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < R && divides; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row(t, i, -1);  // row_t += row_i, then re-reduce
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      for (std::size_t c = 0; c < C; ++c) a(t, c) = -a(t, c);
      if (U)
        for (std::size_t c = 0; c < R; ++c) (*U)(t, c) = -(*U)(t, c);
    }
  }
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm s{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
  smith_in_place(s.D, &s.U, &s.V);
  return s;
}

std::vector<mpz_class> smith_invariants(const IntMatrix& m) {
  IntMatrix a = m;
  smith_in_place(a, nullptr, nullptr);
  std::vector<mpz_class> d;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
    if (a(i, i) != 0) d.push_back(a(i, i));
  return d;
}

mpz_class FiniteAbelianGroup::order() const {
  mpz_class o = 1;
  for (const auto& d : divisors) o *= d;
  return o;
}

std::string FiniteAbelianGroup::to_string() const {
  if (divisors.empty()) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < divisors.size(); ++i) s += (i ? " x Z/" : "Z/") + divisors[i].get_str();
  return s;
}

Cokernel cokernel_of_columns(const IntMatrix& m) {
  Cokernel c;
  auto inv = smith_invariants(m);
  c.free_rank = m.rows() - inv.size();
  for (const auto& d : inv)
    if (d != 1) c.torsion.divisors.push_back(d);
  return c;
}

std::optional<FiniteAbelianGroup> cokernel(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("cokernel expects a square matrix");
  Cokernel c = cokernel_of_columns(m);
  if (c.free_rank != 0) return std::nullopt;
  return c.torsion;
}

bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  return abs(determinant(m)) == 1;
}

}  // namespace dlchar::lattice
