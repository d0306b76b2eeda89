#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adic/groebner.hpp"
#include "adic/tate.hpp"

namespace adic {

/// Omega^1 of B over its base, presented as the cokernel of the relative Jacobian over B.
struct KahlerModule {
  Presentation pres;
  std::vector<std::string> generators;  // dX for each adjoined variable
  std::vector<ModVec> jacobian;         // row i = d f_i, entries in normal form
  ModuleBasis relations;                // submodule generated by the rows and I * B^n
  bool zero = false;
  /// Least k with Fitt_k = (1).
  std::size_t fitting_rank = 0;
  /// Fitt_{k-1} = 0 as well, i.e. locally free of constant rank k.
  bool locally_free = false;

  /// Normal form of a form given by its coefficient vector.
  ModVec reduce(const ModVec& form) const { return relations.reduce(form); }
};

KahlerModule kahler_differentials(const Presentation& pres, const GroebnerLimits& limits = {});

/// The two-term complex [I/I^2 -> Omega^1 (x) B] with its cohomology.
struct CotangentComplexData {
  Presentation pres;
  std::vector<ModVec> jacobian;             // d([f_i])
  std::vector<ModVec> conormal_relations;   // generators of the relation module of I/I^2 (rank p)
  std::vector<ModVec> kernel_generators;    // lifts of generators of ker d
  std::vector<ModVec> kernel_witnesses;     // kernel generators that survive in I/I^2
  bool h_minus1_zero = false;
  bool h0_zero = false;
  KahlerModule omega;
};

CotangentComplexData naive_cotangent_complex(const Presentation& pres, const GroebnerLimits& limits = {});

enum class Verdict { Etale, Lisse, NonRamifie, None, Inconclusive };
std::string to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  bool etale = false;
  bool lisse = false;
  bool non_ramifie = false;
  /// 0 when H^-1 vanishes, otherwise the number of kernel generators surviving in I/I^2.
  std::size_t h_minus1 = 0;
  /// 0 when H^0 vanishes, otherwise the least k with Fitt_k(Omega^1) = (1).
  std::size_t h0 = 0;
  unsigned degree_cap = kDefaultDegreeCap;
  int precision = kDefaultPrecision;
  std::vector<std::string> flags;
  std::size_t pieces = 1;  // presentations in the conjunction
};

struct ClassifyOptions {
  /// Pieces of a covering; when non-empty the truth table is the conjunction over them.
  std::vector<Presentation> pieces;
  GroebnerLimits limits{};
};

/// Cotangent-complex classification of the structure map base() -> pres.
Classification classify_morphism(const Presentation& pres, const ClassifyOptions& options = {});

/// Graded pieces Omega^k = (free on k-subsets) / (I Omega^k + dI ^ Omega^{k-1}).
struct DeRhamComplexData {
  Presentation pres;
  unsigned top_degree = 0;
  struct Piece {
    unsigned degree = 0;
    std::vector<std::vector<std::size_t>> basis;  // sorted index subsets of the adjoined variables
    ModuleBasis relations;
    bool zero = false;
  };
  std::vector<Piece> pieces;  // degrees 0..top_degree
  /// Generators (monomial times basis form) on which d o d = 0 and well-definedness were verified.
  std::size_t checked_generators = 0;
  std::size_t violations = 0;

  /// d applied to a k-form given by coefficients on pieces[k].basis; result on pieces[k+1].basis.
  ModVec differential(unsigned k, const ModVec& form) const;
  ModVec reduce(unsigned k, const ModVec& form) const { return pieces[k].relations.reduce(form); }
  std::string basis_name(unsigned k, std::size_t index) const;
};

DeRhamComplexData de_rham_complex(const Presentation& pres, unsigned top_degree, const GroebnerLimits& limits = {});

/// h with dh/dT = omega and h(f) = 0, h = sum a_i (T^{i+1} - f^{i+1}) / (i+1).
struct EtaleIntegral {
  Poly h;         // in the variables (base vars, T)
  Poly quotient;  // h / (T - f)
  bool precision_loss = false;
  std::vector<unsigned> lossy_degrees;  // i+1 divisible by p
  int precision = kDefaultPrecision;
};

/// omega is a polynomial in base_vars ++ [T] (the last variable is T), f a polynomial in base_vars.
EtaleIntegral etale_integration(const Poly& omega, const Poly& f, const Coefficients& coeffs);

}  // namespace adic
