#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace adic {

inline constexpr std::size_t kMaxVars = 12;

/// Exponent vector with cached total degree.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> exps{};
  std::uint32_t degree = 0;

  static Monomial one() { return {}; }
  static Monomial var(std::size_t index, unsigned power = 1);

  unsigned operator[](std::size_t i) const { return exps[i]; }
  void set(std::size_t i, unsigned power);

  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// Requires `divisor.divides(*this)`.
  Monomial operator/(const Monomial& divisor) const;
  static Monomial lcm(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
};

/// Graded reverse lexicographic comparison; variable 0 is the largest.
int grevlex_compare(const Monomial& a, const Monomial& b);

struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_compare(a, b) > 0; }
};

/// Coefficient field: the rationals (characteristic 0) or a prime field F_p.
/// In characteristic p every stored coefficient is an integer in [0, p).
struct Field {
  unsigned characteristic = 0;

  static Field rationals() { return {0}; }
  static Field prime(unsigned p) { return {p}; }

  mpq_class normalize(const mpq_class& x) const;
  mpq_class add(const mpq_class& a, const mpq_class& b) const { return normalize(a + b); }
  mpq_class sub(const mpq_class& a, const mpq_class& b) const { return normalize(a - b); }
  mpq_class mul(const mpq_class& a, const mpq_class& b) const { return normalize(a * b); }
  mpq_class inv(const mpq_class& a) const;
  mpq_class div(const mpq_class& a, const mpq_class& b) const { return mul(a, inv(b)); }

  friend bool operator==(const Field& a, const Field& b) { return a.characteristic == b.characteristic; }
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }
};

struct Term {
  Monomial mono;
  mpq_class coeff;
};

/// Sparse multivariate polynomial over a Field, terms sorted by decreasing grevlex order.
class Poly {
 public:
  Poly() = default;
  Poly(Field field, std::size_t nvars);

  static Poly constant(Field field, std::size_t nvars, const mpq_class& c);
  static Poly variable(Field field, std::size_t nvars, std::size_t index);
  static Poly term(Field field, std::size_t nvars, const Monomial& m, const mpq_class& c);

  Field field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;
  bool uses_var(std::size_t var) const;
  mpq_class coefficient(const Monomial& m) const;

  Poly operator-() const;
  Poly operator+(const Poly& other) const;
  Poly operator-(const Poly& other) const;
  Poly operator*(const Poly& other) const;
  Poly& operator+=(const Poly& other) { return *this = *this + other; }
  Poly& operator-=(const Poly& other) { return *this = *this - other; }
  Poly& operator*=(const Poly& other) { return *this = *this * other; }
  Poly scaled(const mpq_class& c) const;
  Poly mul_term(const Monomial& m, const mpq_class& c) const;
  Poly pow(unsigned k) const;
  Poly monic() const;

  Poly derivative(std::size_t var) const;
  /// Substitutes `images[i]` for variable i; all images share one ring.
  Poly substitute(const std::vector<Poly>& images) const;
  /// Moves variable i to `var_map[i]` inside a ring with `new_nvars` variables.
  Poly remap(std::size_t new_nvars, const std::vector<std::size_t>& var_map) const;
  /// Reinterprets the coefficients over another field (reduction mod p when needed).
  Poly over(Field target) const;
  /// Drops every term of total degree above `cap`.
  Poly truncated(unsigned cap) const;

  std::string to_string(const std::vector<std::string>& names) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  static Poly from_unsorted(Field field, std::size_t nvars, std::vector<Term> terms);

  Field field_{};
  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Prints a rational coefficient the way the DSL reads it back.
std::string rational_to_string(const mpq_class& q);

}  // namespace adic
