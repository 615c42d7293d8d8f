#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace dlchar::lattice {

// Dense integer matrix with GMP entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix scaled(const mpz_class& c) const;
  IntMatrix transposed() const;
  bool operator==(const IntMatrix& o) const;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> a_;
};

// Determinant by fraction-free Bareiss elimination.
mpz_class determinant(const IntMatrix& m);

struct SmithForm {
  IntMatrix D, U, V;  // U * M * V == D
};

SmithForm smith_normal_form(const IntMatrix& m);

// Just the nonzero diagonal of the Smith form (no transforms; faster).
std::vector<mpz_class> smith_invariants(const IntMatrix& m);

struct FiniteAbelianGroup {
  std::vector<mpz_class> divisors;  // each >= 2, d_i | d_{i+1}
  mpz_class order() const;
  bool is_trivial() const { return divisors.empty(); }
  std::string to_string() const;
};

// Cokernel of a square matrix; nullopt stands for "infinite" (det = 0).
std::optional<FiniteAbelianGroup> cokernel(const IntMatrix& m);

// Cokernel Z^rows / (column span of m), possibly infinite.
struct Cokernel {
  std::size_t free_rank = 0;
  FiniteAbelianGroup torsion;
};
Cokernel cokernel_of_columns(const IntMatrix& m);

bool is_unimodular(const IntMatrix& m);

}  // namespace dlchar::lattice
