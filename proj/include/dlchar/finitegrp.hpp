#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dlchar/cyclotomic.hpp"
#include "dlchar/fq.hpp"

namespace dlchar::finitegrp {

using cyclotomic::Cyclo;

constexpr int kMaxDim = 4;

// Square matrix over F_q, entries in the encoding of fq::FiniteField; unused slots are 0.
struct Matrix {
  int n = 0;
  std::array<std::uint32_t, kMaxDim * kMaxDim> a{};
  std::uint32_t& at(int i, int j) { return a[i * kMaxDim + j]; }
  std::uint32_t at(int i, int j) const { return a[i * kMaxDim + j]; }
  bool operator==(const Matrix& o) const { return n == o.n && a == o.a; }
};

Matrix identity(int n);
Matrix multiply(const fq::FiniteField& F, const Matrix& x, const Matrix& y);
std::uint32_t determinant(const fq::FiniteField& F, const Matrix& x);
std::string to_string(const fq::FiniteField& F, const Matrix& x);

// Default enumeration cap, overridable through DLCHAR_CAP.
std::size_t default_cap();

class MatrixGroup {
 public:
  std::shared_ptr<const fq::FiniteField> field;
  int n = 0;
  std::string name;
  std::vector<Matrix> generators;

  std::size_t order() const { return elements_.size(); }
  const Matrix& element(int i) const { return elements_[i]; }
  // -1 if the matrix is not in the group
  int index_of(const Matrix& m) const;
  int mul(int i, int j) const;
  int inverse(int i) const { return inverse_[i]; }
  int identity_index() const { return 0; }
  int power(int i, std::int64_t e) const;
  int element_order(int i) const;
  std::int64_t q() const { return field->size(); }
  int p() const { return field->p(); }

  friend MatrixGroup enumerate_group(std::shared_ptr<const fq::FiniteField> field, int n, std::vector<Matrix> gens,
                                     std::size_t cap, std::string name);

 private:
  std::uint64_t key(const Matrix& m) const;
  std::vector<Matrix> elements_;
  std::unordered_map<std::uint64_t, int> index_;
  std::vector<int> inverse_;
};

// Closure of the generators; element 0 is the identity. Throws "cap exceeded".
MatrixGroup enumerate_group(std::shared_ptr<const fq::FiniteField> field, int n, std::vector<Matrix> gens,
                            std::size_t cap = default_cap(), std::string name = "");

MatrixGroup general_linear(int n, std::int64_t q, std::size_t cap = default_cap());
MatrixGroup special_linear(int n, std::int64_t q, std::size_t cap = default_cap());
// "GL2(3)", "SL2(5)", ...
MatrixGroup group_from_spec(const std::string& spec, std::size_t cap = default_cap());

struct ConjugacyClasses {
  std::vector<int> class_of;           // per element
  std::vector<int> reps;               // first element of each class in enumeration order
  std::vector<std::int64_t> sizes;
  std::vector<std::int64_t> centralizer_orders;
  std::vector<int> orders;             // element order per class
  std::vector<int> inverse_class;
  std::int64_t exponent = 1;
  std::size_t count() const { return reps.size(); }
  // class of g^e for g in class c
  int power_class(const MatrixGroup& G, int c, std::int64_t e) const;
};

ConjugacyClasses conjugacy_classes(const MatrixGroup& G);

// A class function given by one value per class.
struct ClassFunction {
  std::int64_t M = 1;
  std::vector<Cyclo> values;
  std::string label;
};

struct CharacterTable {
  std::int64_t M = 1;       // exponent of the group
  std::uint64_t ell = 0;    // Dixon prime
  std::uint64_t zeta_mod_ell = 0;
  std::vector<ClassFunction> characters;  // sorted by degree, trivial first
  std::vector<std::int64_t> degrees;
};

// Dixon's class-algebra method modulo ell, lifted through eigenvalue multiplicities.
// Errors: "class count exceeds cap", "ell search failed".
CharacterTable character_table(const MatrixGroup& G, const ConjugacyClasses& cls, std::size_t class_cap = 200);

// Dixon prime rule: smallest prime = 1 mod exponent above 2 sqrt(|G|) max class size.
std::uint64_t dixon_prime(std::int64_t group_order, std::int64_t max_class, std::int64_t exponent);

// (1/norm) sum over cells c with weight w_c of f1(c) conj(f2(c)); cells outside `mask` are skipped.
Cyclo weighted_inner_product(const std::vector<Cyclo>& f1, const std::vector<Cyclo>& f2,
                             const std::vector<std::int64_t>& weights, const mpq_class& norm,
                             const std::vector<bool>* mask = nullptr);
Cyclo inner_product(const ConjugacyClasses& cls, const ClassFunction& f1, const ClassFunction& f2,
                    const std::vector<bool>* mask = nullptr);

// Images of class-function values at the prime of PrimeData (zeta -> z). Used for inner
// products known in advance to be small integers.
// j = M - 1 gives the images of the complex conjugates.
std::vector<std::uint64_t> reduce_at_prime(const std::vector<Cyclo>& values, std::int64_t M, std::int64_t j = 1);
// Integer inner product computed modulo the large prime; caller guarantees the exact value
// is an integer of absolute value below l/2.
std::int64_t integer_inner_product(const std::vector<std::uint64_t>& f1, const std::vector<std::uint64_t>& f2,
                                   const std::vector<std::int64_t>& weights, std::int64_t norm, std::int64_t M);

struct TableCheck {
  bool row_orthogonal = false;
  bool column_orthogonal = false;
  bool degree_sum = false;
  bool degrees_divide = false;
  bool class_equation = false;
  bool all() const { return row_orthogonal && column_orthogonal && degree_sum && degrees_divide && class_equation; }
};
TableCheck check_character_table(const MatrixGroup& G, const ConjugacyClasses& cls, const CharacterTable& t);

nlohmann::json table_to_json(const MatrixGroup& G, const ConjugacyClasses& cls, const CharacterTable& t);

// One instance of the Dedekind-type independence property on a cyclic group Z/N:
// characters x -> zeta_N^{a_i x}, Z the subgroup of order z_order, and Gamma_bullet the
// union of the Z-cosets not listed in `excluded`. Returns the rank of the value matrix.
int dedekind_rank(std::int64_t N, std::int64_t z_order, const std::vector<std::int64_t>& exps,
                  const std::vector<std::int64_t>& excluded);

struct DedekindTrialReport {
  int instances = 0;
  int failures = 0;
  std::vector<std::string> failure_notes;
};
DedekindTrialReport dedekind_property_trials(int count, std::uint64_t seed);

}  // namespace dlchar::finitegrp
