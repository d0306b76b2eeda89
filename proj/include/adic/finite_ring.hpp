#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "adic/groebner.hpp"
#include "adic/poly.hpp"

namespace adic {

class TokenStream;

/// Polynomial description F_p[vars]/ideal of one characteristic-p factor; its
/// standard monomials form the additive basis of the factor.
struct RingFactor {
  unsigned p = 2;
  std::vector<std::string> vars;
  IdealBasis ideal;
  std::vector<Monomial> basis;
};

/// Finite commutative ring with full element enumeration. Elements are indices
/// 0..size()-1 with 0 the zero element. Values are immutable and cheap to copy.
class FiniteRing {
 public:
  using Elem = std::uint32_t;
  static constexpr std::size_t kMaxCardinality = 4096;
  static constexpr std::size_t kMaxTableCardinality = 1024;

  FiniteRing();  // the field F_2

  static FiniteRing zmod(unsigned long m);
  static FiniteRing galois_field(unsigned p, unsigned k);
  /// F_p[vars]/(relations); relations may carry rational coefficients that are p-integral.
  static FiniteRing quotient(unsigned p, std::vector<std::string> vars, const std::vector<Poly>& relations);
  static FiniteRing product(const std::vector<FiniteRing>& factors);
  /// Ring-spec grammar: Zmod(m) | GF(p[,k]) | Quot(GF(p),[x,..],[rel,..]) | Prod(spec,spec,..).
  static FiniteRing parse(std::string_view spec);
  static FiniteRing parse(TokenStream& ts);

  const std::string& spec() const;
  std::size_t size() const;
  Elem zero() const { return 0; }
  Elem one() const;
  unsigned long characteristic() const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem pow(Elem a, unsigned long e) const;
  Elem from_integer(const mpz_class& n) const;
  /// Image of a rational whose denominator is invertible in the ring.
  std::optional<Elem> from_rational(const mpq_class& q) const;
  std::optional<Elem> inverse(Elem a) const;
  bool is_unit(Elem a) const { return inverse(a).has_value(); }

  bool is_nilpotent(Elem a) const;
  /// Sorted list of nilpotent elements.
  const std::vector<Elem>& nilradical() const;
  bool is_reduced() const { return nilradical().size() == 1; }

  std::string format(Elem a) const;
  /// Reads an element: a polynomial in the generator names, or a tuple for products.
  Elem parse_element(std::string_view text) const;
  Elem parse_element(TokenStream& ts) const;

  /// Evaluates a polynomial with rational coefficients at the given images.
  /// Throws DomainMismatch when a coefficient has no image in the ring.
  Elem evaluate(const Poly& poly, const std::vector<Elem>& images) const;

  /// Sorted ideal generated by `gens`.
  std::vector<Elem> ideal_generated(const std::vector<Elem>& gens) const;
  bool is_ideal(const std::vector<Elem>& sorted_elems) const;
  /// Least e >= 1 with I^e = 0, or 0 when I is not nilpotent.
  unsigned nilpotency_exponent(const std::vector<Elem>& ideal) const;

  struct Quotient;
  /// R/I with the projection R -> R/I. The quotient is stored as tables.
  Quotient quotient_by(const std::vector<Elem>& ideal) const;
  /// The subset (closed under the ring operations) as a ring of its own.
  FiniteRing subring(const std::vector<Elem>& sorted_elems, std::string spec) const;

  /// Polynomial factors (empty when the ring is not built from characteristic-p factors).
  const std::vector<RingFactor>& factors() const;
  /// Factor-wise polynomial representatives with integer coefficients in [0, p).
  std::vector<Poly> factor_polys(Elem a) const;
  /// Element with the given factor-wise polynomials (coefficients reduced mod p, normal form taken).
  Elem from_factor_polys(const std::vector<Poly>& polys) const;

  /// Checks the ring axioms: at the basis level for structure-constant rings and
  /// exhaustively on all triples (when `exhaustive`) for table rings of size <= 256.
  void verify_axioms(bool exhaustive = false) const;

  friend bool operator==(const FiniteRing& a, const FiniteRing& b) { return a.impl_ == b.impl_; }

  struct Impl;

 private:
  explicit FiniteRing(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct FiniteRing::Quotient {
  FiniteRing ring;
  std::vector<Elem> projection;  // indexed by elements of the parent ring
};

/// Sorted multiplicative closure of a subset, as used for ideal arithmetic.
std::vector<FiniteRing::Elem> ideal_product(const FiniteRing& R, const std::vector<FiniteRing::Elem>& I,
                                            const std::vector<FiniteRing::Elem>& J);

}  // namespace adic
