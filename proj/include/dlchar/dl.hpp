#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dlchar/cyclotomic.hpp"
#include "dlchar/finitegrp.hpp"

namespace dlchar::dl {

using cyclotomic::Cyclo;
using finitegrp::CharacterTable;
using finitegrp::ConjugacyClasses;
using finitegrp::MatrixGroup;

// A maximal torus of G° = GL_2(F_q) from the built-in catalog, with coordinates on its
// cyclic factors so that characters are exponent vectors.
struct CatalogTorus {
  std::string name;  // "split" or "nonsplit"
  bool elliptic = false;
  int split_rank = 0;
  std::vector<int> gens;
  std::vector<std::int64_t> gen_orders;
  std::vector<int> elements;
  std::unordered_map<int, std::vector<std::int64_t>> coords;
  std::int64_t order() const { return static_cast<std::int64_t>(elements.size()); }
  std::int64_t character_count() const;
  // exponent vectors in lexicographic (discrete-log) order
  std::vector<std::vector<std::int64_t>> characters() const;
};

// G = G° x Z with Z_G = Z(G°) x aZ and Z* = {1} x bZ, a | b. Class functions live on cells
// (class c of G°, k mod b); the cell index is k * classes + c. a = b = 1 is the connected group.
struct ProductModel {
  std::shared_ptr<const MatrixGroup> G;
  ConjugacyClasses cls;
  std::int64_t a = 1, b = 1;
  std::int64_t q = 0, p = 0;
  std::int64_t M = 1;  // every value lies in Q(zeta_M)
  std::vector<int> center;
  std::vector<CatalogTorus> tori;

  // per class of G°, from the class representative
  std::vector<int> ss_part;     // semisimple part s (element index)
  std::vector<int> unip_part;   // unipotent part u
  std::vector<int> ss_class;    // class of s
  std::vector<bool> central;    // rep lies in Z°
  std::vector<int> regular_torus;  // catalog torus conjugate to C(rep) if rep is regular semisimple, else -1
  std::vector<std::vector<std::vector<int>>> torus_meet;  // [torus][class] elements of the torus in the class
  std::vector<std::vector<int>> torus_conjugators;         // [torus] one x per distinct conjugate x S x^-1
  std::vector<int> coset_reps;                             // minimal representatives of G°/Z°

  bool connected() const { return a == 1 && b == 1; }
  std::size_t classes() const { return cls.count(); }
  std::size_t cells() const { return cls.count() * static_cast<std::size_t>(b); }
  std::size_t cell(std::size_t c, std::int64_t k) const { return static_cast<std::size_t>(k) * cls.count() + c; }
  std::int64_t center_order() const { return static_cast<std::int64_t>(center.size()); }
};

// Errors: "torus catalog supports GL2 only", "torus catalog needs q >= 3", "b must be a multiple of a".
ProductModel build_model(std::shared_ptr<const MatrixGroup> G, std::int64_t a = 1, std::int64_t b = 1);
ProductModel build_model(const std::string& spec, std::int64_t a = 1, std::int64_t b = 1);

// (S, theta): catalog torus conjugated by element `conj`, theta as exponents on the catalog
// coordinates, and omega_A(a) = zeta_{b/a}^{omega_A}.
struct CharPair {
  int torus = 0;
  std::vector<std::int64_t> exps;
  std::int64_t omega_A = 0;
  int conj = 0;
  std::string to_string(const ProductModel& m) const;
};

// Validates exponents and the homomorphism property on generator products; "central character mismatch"
// if omega_A is not defined modulo b/a.
void validate_pair(const ProductModel& m, const CharPair& pair);
// log of theta(t) in Z/M for t in the conjugated torus; throws "element not in torus".
std::int64_t theta_log(const ProductModel& m, const CharPair& pair, int t);
std::vector<CharPair> all_pairs(const ProductModel& m);  // catalog tori, omega_A = 0
bool in_general_position(const ProductModel& m, const CharPair& pair);
int epsilon(const ProductModel& m, const CharPair& pair);

// ---- Green functions ----

struct GreenTable {
  std::string scope;  // "GL2", "T_split", "T_nonsplit"
  std::map<std::pair<std::string, std::string>, std::int64_t> values;  // (torus name, unipotent label "1"/"u")
  std::int64_t at(const std::string& torus, const std::string& unip) const;  // "Green value missing"
};
std::vector<GreenTable> builtin_green_tables(std::int64_t q);
std::int64_t green_value(const std::vector<GreenTable>& tables, const std::string& scope, const std::string& torus,
                         const std::string& unip);

struct GreenCheck {
  std::string scope;
  bool orthogonality = false;
  bool identity_values = false;
  std::vector<std::string> notes;
};
std::vector<GreenCheck> check_green_tables(const ProductModel& m, const std::vector<GreenTable>& tables);

// ---- Jordan decomposition and classification ----

struct JordanPair {
  int s = 0;      // semisimple part in G°
  int s_bar = 0;  // minimal index in the coset s Z°
  int u = 0;
};
// g' = (g°, k) with g° an element index; "not in G′" unless a | k.
JordanPair extended_jordan(const ProductModel& m, int g, std::int64_t k = 0);

struct Classification {
  bool semisimple = false;
  bool regular = false;   // centralizer in G° is a maximal torus
  bool elliptic = false;  // regular with anisotropic-mod-center centralizer
  int torus = -1;
};
Classification classify(const ProductModel& m, int g, std::int64_t k = 0);

struct JordanReport {
  std::int64_t elements = 0;
  bool injective = false;
  bool equivariant = false;
  bool rejects_outside = false;
};
JordanReport jordan_exhaustive(const ProductModel& m);

// ---- DL characters ----

struct DLCharacter {
  CharPair pair;
  std::vector<Cyclo> values;  // per cell
  int epsilon = 1;
};
DLCharacter dl_character(const ProductModel& m, const CharPair& pair, const std::vector<GreenTable>& greens);
// The same values through the literal sum over x in [G]; independent of the per-class closed form.
DLCharacter dl_character_literal(const ProductModel& m, const CharPair& pair, const std::vector<GreenTable>& greens);

// Class subsets are masks over classes of G° holding semisimple classes stable under Z°.
std::vector<bool> rs_locus(const ProductModel& m);
std::vector<bool> elliptic_rs_locus(const ProductModel& m);
std::vector<bool> evrs_subset(const ProductModel& m);

// Inner products on cell functions: plain over [G], star over [G]*; truncation to [G′]_bullet or its complement.
enum class Part { All, Bullet, Circ };
Cyclo model_inner(const ProductModel& m, const std::vector<Cyclo>& f1, const std::vector<Cyclo>& f2, bool star,
                  Part part = Part::All, const std::vector<bool>* bullet = nullptr);

struct ScalarCheck {
  std::int64_t formula = 0;
  Cyclo brute;
  bool agree = false;
};
// Stabilizer count in the twisted normalizer against the inner product over the full group.
ScalarCheck scalar_product_check(const ProductModel& m, const CharPair& p1, const CharPair& p2,
                                 const std::vector<GreenTable>& greens);
// Right-hand sides of the truncated identities.
Cyclo innerprod_rhs(const ProductModel& m, const CharPair& p1, const CharPair& p2, const std::vector<bool>& bullet);
Cyclo innerprod2_rhs(const ProductModel& m, const CharPair& p1, const CharPair& p2, const std::vector<bool>& bullet);

// Twisting by characters k -> zeta_b^{jk} of the free part: R(theta) x chi = R(theta x chi) and inner products unchanged.
bool twist_invariance_check(const ProductModel& m, const CharPair& p1, const CharPair& p2,
                            const std::vector<GreenTable>& greens);

// ---- geometric conjugacy ----

// Errors: "k_max too small to decide".
bool geom_conjugate(const ProductModel& m, const CharPair& p1, const CharPair& p2, int k_max = 2);

// ---- the connected-group detectors (a = b = 1) ----

struct ZEntry {
  int torus = 0;
  std::vector<std::int64_t> exps;
  std::int64_t n = 0;
  bool operator==(const ZEntry& o) const { return torus == o.torus && exps == o.exps && n == o.n; }
  bool operator<(const ZEntry& o) const;
};
using ZTilde = std::vector<ZEntry>;  // sorted

// All DL characters of the catalog pairs, evaluated once.
struct DLCache {
  std::vector<CharPair> pairs;
  std::vector<DLCharacter> chars;
  std::vector<std::vector<std::uint64_t>> images;       // at zeta -> z
  std::vector<std::vector<std::uint64_t>> conj_images;  // at zeta -> z^{-1}
};
DLCache build_cache(const ProductModel& m, const std::vector<GreenTable>& greens);

std::int64_t integer_pairing(const ProductModel& m, const std::vector<Cyclo>& rho, const std::vector<Cyclo>& f);
ZTilde compute_Ztilde(const ProductModel& m, const DLCache& cache, const std::vector<Cyclo>& rho);
nlohmann::json ztilde_to_json(const ProductModel& m, const ZTilde& z);

bool is_cuspidal(const ProductModel& m, const std::vector<Cyclo>& rho);

// Values on a designated subset: mask over classes plus one value per class (ignored off the mask).
struct SubsetValues {
  std::vector<bool> mask;
  std::vector<Cyclo> values;
};
SubsetValues restrict_to(const std::vector<bool>& mask, const std::vector<Cyclo>& values);

struct HypothesisReport {
  bool holds = false;
  std::vector<std::string> per_torus;  // "name: ratio > rhs"
};
HypothesisReport lusztig_hypothesis(const ProductModel& m, const std::vector<bool>& bullet);
HypothesisReport henniart_hypothesis(const ProductModel& m, int torus, const std::vector<bool>& bullet);

struct Reconstruction {
  ZTilde solution;
  std::int64_t candidates_examined = 0;
  std::int64_t solutions_found = 0;  // over all tori; each torus must contribute exactly one
};
// Errors: "hypothesis fails", "no solution", "not unique".
Reconstruction reconstruct_from_values(const ProductModel& m, const SubsetValues& input);

struct HenniartMatch {
  int rho = -1;
  Cyclo c;
  std::int64_t c_exponent = 0;  // c = zeta_M^{c_exponent}
  bool equals_epsilon_R = false;
};
// Errors: "hypothesis fails", "no match", "multiple matches".
HenniartMatch henniart_unique(const ProductModel& m, const CharPair& pair, const SubsetValues& input,
                              const CharacterTable& table, const std::vector<GreenTable>& greens);

// Errors: "hypothesis fails".
bool unipotent_detect(const ProductModel& m, const std::vector<Cyclo>& rho, const std::vector<bool>& bullet);
bool unipotent_by_definition(const ProductModel& m, const DLCache& cache, const std::vector<Cyclo>& rho);

// Semisimple-value identity at the class c (whose representative must be semisimple).
bool rho_ss_identity_check(const ProductModel& m, const DLCache& cache, const std::vector<Cyclo>& rho, int c);

// Irreducibles of G° lifted to the common modulus of the model.
std::vector<std::vector<Cyclo>> lifted_characters(const ProductModel& m, const CharacterTable& t);

}  // namespace dlchar::dl
