#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adic/tate.hpp"

namespace adic {

/// B<f/g> = B<u>/(g u - f), relative over B's base, with the structure map B -> B<f/g>.
struct RationalLocalization {
  Presentation pres;
  Morphism structural;
};

RationalLocalization rational_localization(const Presentation& B, const Poly& f, const Poly& g,
                                           const std::string& var = "u");

enum class CoveringStatus { Covering, NotCovering, Inconclusive };

/// 1 = a f + b g + i with i in the ideal of B, when (f, g) generate the unit ideal.
struct CoveringCertificate {
  CoveringStatus status = CoveringStatus::Inconclusive;
  Poly a, b, i;
  std::string note;
};

CoveringCertificate covering_check(const Presentation& B, const Poly& f, const Poly& g);

/// The three localizations of a binary rational covering. All four presentations share
/// B's base; `first` adjoins u, `second` adjoins v, `joint` adjoins both.
struct BinaryCovering {
  Presentation ring;
  Poly f, g;
  Presentation first;
  Presentation second;
  Presentation joint;
  std::string u = "u", v = "v";
};

BinaryCovering binary_covering(const Presentation& B, const Poly& f, const Poly& g);

/// Negative controls: the covering with one relation mutated.
enum class Mutation { DropFirstRelation, ShiftFirstRelation, DropSecondInJoint };
BinaryCovering mutate(const BinaryCovering& cov, Mutation m);

enum class Exactness { Exact, Failed, Inconclusive };
std::string to_string(Exactness e);

struct ExactnessReport {
  Exactness left = Exactness::Inconclusive;
  Exactness middle = Exactness::Inconclusive;
  Exactness right = Exactness::Inconclusive;
  unsigned degree_cap = 0;
  int precision = 0;
  std::vector<std::string> notes;
};

/// Exactness of 0 -> B -> B<f/g> + B<g/f> -> B<f/g,g/f> -> 0 on coefficient spaces of degree <= D.
ExactnessReport gluing_sequence_check(const BinaryCovering& cov, unsigned degree_cap, int precision);

/// Generators (in the target's variables) of a target over its base.
struct SurjectionData {
  Presentation target;
  std::vector<Poly> generators;
};

struct JointLift {
  std::vector<Poly> generators;  // in B's variables
  bool certified = false;
  std::size_t candidates = 0;
  std::size_t perturbed = 0;
  std::string note;
};

/// Whether base monomials times products of `generators` span every monomial of B of degree <= D
/// over Z_(p) after reduction in B.
bool certify_generation(const Presentation& B, const std::vector<Poly>& generators, unsigned degree_cap, unsigned p);

JointLift joint_surjection_lift(const BinaryCovering& cov, const SurjectionData& s1, const SurjectionData& s2,
                                unsigned degree_cap, int precision);

}  // namespace adic
