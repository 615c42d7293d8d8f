#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlchar/lattice.hpp"
#include "dlchar/rootdata.hpp"

namespace dlchar::torus {

struct RationalTorus {
  rootdata::RootDatum datum;
  rootdata::Twist twist;
  std::string label;
};

RationalTorus make_torus(const std::string& type, rootdata::Flavor flavor, const std::string& twist);

// q * tau - 1 as an integer matrix on X.
lattice::IntMatrix frobenius_minus_one(const RationalTorus& T, std::int64_t q);

mpz_class torus_order(const RationalTorus& T, std::int64_t q);

// |{t in S(F_q) : alpha(t) = 1 for all alpha in subset}|; subset holds root indices.
mpz_class kernel_count(const RationalTorus& T, std::int64_t q, const std::vector<int>& subset);

// Inclusion-exclusion over tau-orbits of roots. Precomputes the orbit-union lattices once.
class NonregularCounter {
 public:
  explicit NonregularCounter(const RationalTorus& T);
  mpz_class count_nonregular(std::int64_t q) const;
  std::size_t orbit_count() const { return orbits_.size(); }

 private:
  struct Term {
    int sign;
    std::vector<mpz_class> divisors;  // X/L = Z^free + sum Z/d_i after the basis change U
    lattice::IntMatrix U;
  };
  RationalTorus T_;
  std::vector<std::vector<int>> orbits_;
  std::vector<Term> terms_;
};

mpz_class count_nonregular(const RationalTorus& T, std::int64_t q);
mpz_class count_regular(const RationalTorus& T, std::int64_t q);

// Independent oracle: enumerate torus points as tuples of finite-field elements.
// Supports tori whose twist is a signed permutation in a stated ambient basis
// (GL-style type A, B_n adjoint, G2).
std::int64_t count_regular_by_enumeration(const RationalTorus& T, std::int64_t q, std::int64_t cap = 2'000'000);

struct EnumerationResult {
  std::int64_t order = 0;
  std::int64_t regular = 0;
};
EnumerationResult enumerate_torus(const RationalTorus& T, std::int64_t q, std::int64_t cap = 2'000'000);

nlohmann::json torus_record(const RationalTorus& T, std::int64_t q);

}  // namespace dlchar::torus
