#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adic/groebner.hpp"
#include "adic/padic.hpp"
#include "adic/poly.hpp"

namespace adic {

inline constexpr unsigned kDefaultDegreeCap = 8;
inline constexpr int kDefaultPrecision = 8;
inline constexpr unsigned kDefaultPrime = 2;

/// Truncated multivariate series over Q_p: coefficients of total degree <= cap.
class TateSeries {
 public:
  TateSeries(unsigned p, int precision, std::vector<std::string> vars, unsigned degree_cap);

  /// Embeds a rational polynomial; terms beyond the cap are dropped and flagged.
  static TateSeries from_poly(const Poly& poly, unsigned p, int precision, std::vector<std::string> vars,
                              unsigned degree_cap);

  unsigned prime() const { return p_; }
  int precision() const { return n_; }
  unsigned degree_cap() const { return cap_; }
  const std::vector<std::string>& vars() const { return vars_; }
  bool overflow() const { return overflow_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<Monomial, PadicNumber, GrevlexGreater>& coefficients() const { return coeffs_; }
  PadicNumber coefficient(const Monomial& m) const;
  void set_coefficient(const Monomial& m, const PadicNumber& c);

  TateSeries operator+(const TateSeries& other) const;
  TateSeries operator-(const TateSeries& other) const;
  TateSeries operator*(const TateSeries& other) const;
  TateSeries pow(unsigned k) const;

  /// Sup over coefficients of their p-adic norms; 0 exactly for the zero series.
  NormValue gauss_norm() const;
  /// The series as a rational polynomial (exact for series built from rationals).
  Poly to_poly() const;
  std::string to_string() const;

 private:
  void check_compatible(const TateSeries& other) const;

  unsigned p_;
  int n_;
  std::vector<std::string> vars_;
  unsigned cap_;
  bool overflow_ = false;
  std::map<Monomial, PadicNumber, GrevlexGreater> coeffs_;
};

/// Coefficient world of a presentation.
struct Coefficients {
  enum class Kind { Padic, FiniteField, Integers, IntegersMod };
  Kind kind = Kind::Padic;
  unsigned p = kDefaultPrime;     // prime of Q_p or F_p
  int precision = kDefaultPrecision;
  unsigned long modulus = 0;      // for Z/m

  static Coefficients padic(unsigned p, int precision) { return {Kind::Padic, p, precision, 0}; }
  static Coefficients finite_field(unsigned p) { return {Kind::FiniteField, p, 1, 0}; }
  static Coefficients integers() { return {Kind::Integers, 0, 0, 0}; }
  static Coefficients integers_mod(unsigned long m) { return {Kind::IntegersMod, 0, 0, m}; }

  /// Field in which Groebner computations run: Q for Q_p and Z, F_p for F_p; Z/m has none.
  std::optional<Field> field() const;
  bool is_field() const { return kind == Kind::Padic || kind == Kind::FiniteField; }
  std::string to_string() const;

  friend bool operator==(const Coefficients& a, const Coefficients& b) {
    return a.kind == b.kind && a.p == b.p && a.precision == b.precision && a.modulus == b.modulus;
  }
  friend bool operator!=(const Coefficients& a, const Coefficients& b) { return !(a == b); }
};

/// B = A<vars>/(relations) with A = coeffs<base_vars>/(base_relations). All polynomials
/// live in the variables base_vars ++ vars, over the coefficient field (Q for p-adic and
/// integer coefficients). The Groebner basis of the total ideal is computed once at
/// construction; afterwards the value is read-only.
class Presentation {
 public:
  struct Data {
    Coefficients coeffs;
    std::vector<std::string> base_vars;
    std::vector<Poly> base_relations;
    std::vector<std::string> vars;
    std::vector<Poly> relations;
    unsigned degree_cap = kDefaultDegreeCap;
    std::vector<std::string> integral_generators;  // declared B+ generators, never used in computation
    std::set<std::string> declared;                // declared flags such as "strongly_sheafy"
  };

  Presentation();  // Q_2 with no variables
  explicit Presentation(Data data);

  /// Free algebra coeffs<vars> with no relations and no base variables.
  static Presentation tate(Coefficients coeffs, std::vector<std::string> vars, unsigned degree_cap = kDefaultDegreeCap);
  /// Relative presentation over `base` (flattened): base's variables become base variables.
  static Presentation quotient(const Presentation& base, std::vector<std::string> vars, std::vector<Poly> relations);

  const Data& data() const { return *data_; }
  const Coefficients& coefficients() const { return data_->coeffs; }
  const std::vector<std::string>& base_vars() const { return data_->base_vars; }
  const std::vector<Poly>& base_relations() const { return data_->base_relations; }
  const std::vector<std::string>& vars() const { return data_->vars; }
  const std::vector<Poly>& relations() const { return data_->relations; }
  unsigned degree_cap() const { return data_->degree_cap; }
  std::vector<std::string> all_vars() const;
  std::size_t nvars() const { return data_->base_vars.size() + data_->vars.size(); }
  std::size_t nbase() const { return data_->base_vars.size(); }
  /// Field of the polynomial model; throws Unsupported for Z/m coefficients.
  Field field() const;

  /// The base algebra A as a presentation with no base variables.
  Presentation base() const;
  /// The same ring presented absolutely over the coefficients.
  Presentation absolute() const;
  Presentation with_degree_cap(unsigned cap) const;

  /// Reduced Groebner basis of base_relations + relations.
  const IdealBasis& groebner() const;
  /// Reduced Groebner basis of the base relations alone (in all variables).
  const IdealBasis& base_groebner() const;
  Poly normal_form(const Poly& f) const;
  /// Krull dimension of the polynomial model.
  int dimension() const;

  Poly zero() const;
  Poly one() const;
  Poly variable(std::size_t index) const;
  Poly parse(const std::string& text) const;

  /// Round-trip text: Quot(Tate(coeffs,[base]; D=..),[vars],[rels]) with base relations when present.
  std::string to_string() const;

  friend bool operator==(const Presentation& a, const Presentation& b);

 private:
  std::shared_ptr<const Data> data_;
  std::shared_ptr<const IdealBasis> gb_;
  std::shared_ptr<const IdealBasis> base_gb_;
};

/// Result of a normal-form computation embedded back into truncated series.
struct NormalForm {
  Poly poly;
  TateSeries series;
};

NormalForm normal_form(const Poly& f, const Presentation& pres);

struct GroebnerResult {
  std::vector<Poly> basis;
  int dimension = 0;
};

/// Reduced Groebner basis over Q of polynomial Tate series (coefficients must be exact rationals).
GroebnerResult groebner_basis(const std::vector<TateSeries>& generators);

/// f: A -> B given by the images of all of A's variables as polynomials in B's variables.
class Morphism {
 public:
  Morphism(Presentation source, Presentation target, std::vector<Poly> images);

  static Morphism identity(const Presentation& a);
  /// The structure map base() -> pres.
  static Morphism structural(const Presentation& pres);

  const Presentation& source() const { return source_; }
  const Presentation& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }
  /// True when target is a relative presentation over source and images are the base variables.
  bool is_structural() const;
  /// Target presented relative to source: structural maps unchanged, otherwise the graph
  /// presentation source<target vars>/(target relations, x - f(x)).
  Presentation relative() const;
  /// Checks that images satisfy source's relations inside target; throws DomainMismatch otherwise.
  void check() const;

 private:
  Presentation source_;
  Presentation target_;
  std::vector<Poly> images_;
};

/// g o f. Structural pairs concatenate adjoined variables and relations.
Morphism compose(const Morphism& f, const Morphism& g);

/// pres (over A = phi.source()) pushed along phi: A'<vars>/(relations with A's variables replaced by images).
Presentation base_change(const Presentation& pres, const Morphism& phi);

}  // namespace adic
