#pragma once

#include <string>
#include <vector>

#include "adic/differentials.hpp"
#include "adic/finite_ring.hpp"
#include "adic/tate.hpp"

namespace adic {

using Elem = FiniteRing::Elem;

inline constexpr std::size_t kMaxSearchSpace = 1'000'000;
inline constexpr std::size_t kMaxPdIdeal = 256;

/// Hom_A(B, R): images of all variables (base variables first), sorted, without duplicates.
struct PointSet {
  Presentation pres;
  FiniteRing ring;
  std::vector<std::vector<Elem>> points;

  std::size_t size() const { return points.size(); }
  bool contains(const std::vector<Elem>& point) const;
  std::string format(std::size_t index) const;
};

/// Whether the coefficients of `pres` map to R (Z always; F_p and Z/m by characteristic;
/// Q_p through Z_(p) when R has p-power characteristic).
bool admits_base_map(const Coefficients& coeffs, const FiniteRing& R);

PointSet point_set(const Presentation& pres, const FiniteRing& R);
/// Points with values in R/Nil(R).
PointSet de_rham_point_set(const Presentation& pres, const FiniteRing& R);

struct NilpotentIdeal {
  std::vector<Elem> elements;    // sorted
  std::vector<Elem> generators;  // a small generating set
  unsigned exponent = 1;         // least e with I^e = 0
};

/// Every ideal inside Nil(R), ordered by size then elements.
std::vector<NilpotentIdeal> enumerate_nilpotent_ideals(const FiniteRing& R);

/// Divided powers on a nilpotent ideal; gamma[n][k] = gamma_n(ideal[k]) for 0 <= n <= exponent.
struct PDStructure {
  FiniteRing ring;
  std::vector<Elem> ideal;
  unsigned exponent = 1;
  std::vector<std::vector<Elem>> gamma;

  /// gamma_n(x), zero for n > exponent.
  Elem apply(unsigned n, Elem x) const;
};

std::vector<PDStructure> enumerate_pd_structures(const FiniteRing& R, const std::vector<Elem>& ideal);
/// Number of failed instances of the divided-power axioms, checked over all of I (and all of R for scalars).
std::size_t pd_axiom_violations(const PDStructure& s);

/// The colimit of X(R/I) over pairs (I, gamma) ordered by compatible inclusion.
struct CrystallinePoints {
  std::size_t classes = 0;
  std::size_t index_pairs = 0;        // number of (I, gamma)
  std::vector<std::size_t> class_of;  // class of each point of X(R) (the pair (0, trivial))
};

CrystallinePoints crystalline_point_set(const Presentation& pres, const FiniteRing& R);

enum class LiftingMode { DeRham, Crystalline };
std::string to_string(LiftingMode m);

struct RingEvidence {
  std::string ring;
  std::size_t points = 0;
  /// |X(R_red)| in de Rham mode, the number of crystalline classes in crystalline mode.
  std::size_t reduced = 0;
  std::string map;  // bijective | surjective | injective | neither | inconclusive
  std::size_t ideals_checked = 0;
  std::string note;
};

struct LiftingClassification {
  Verdict verdict = Verdict::Inconclusive;
  bool etale = false;
  bool lisse = false;
  bool non_ramifie = false;
  LiftingMode mode = LiftingMode::DeRham;
  std::vector<RingEvidence> evidence;
  std::string scope;
};

/// Compares X(R) -> X(R/I) over every base point of R, for every nilpotent ideal I
/// (de Rham mode) or every ideal carrying a PD structure (crystalline mode).
LiftingClassification classify_lifting(const Presentation& pres, const std::vector<FiniteRing>& rings, LiftingMode mode);

/// {F_p, F_p[e]/(e^2), Z/p^2, Z/p^3, F_p[x]/(x^4), F_p x F_p}; for characteristic-p bases the two
/// mixed-characteristic rings become F_{p^2} and F_p[x,y]/(x,y)^2.
std::vector<FiniteRing> default_test_rings(unsigned p, bool characteristic_p_base);

}  // namespace adic
