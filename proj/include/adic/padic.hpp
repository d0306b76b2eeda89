#pragma once

#include <map>
#include <string>

#include <gmpxx.h>

namespace adic {

/// Exact non-negative real of the form prod_q q^{e_q} (rational exponents) or 0.
/// Equality is exact; ordering compares logarithms, which never tie unless the
/// exponent maps coincide.
class NormValue {
 public:
  NormValue() = default;  // the value 1
  static NormValue zero();
  static NormValue one() { return {}; }
  /// base^exponent
  static NormValue power(unsigned base, const mpq_class& exponent);

  bool is_zero() const { return zero_; }
  /// Exponent of `base` (0 when absent). Undefined for zero.
  mpq_class exponent(unsigned base) const;
  const std::map<unsigned, mpq_class>& exponents() const { return exps_; }
  long double log() const;

  NormValue operator*(const NormValue& other) const;
  NormValue pow(const mpq_class& r) const;

  friend bool operator==(const NormValue& a, const NormValue& b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.exps_ == b.exps_);
  }
  friend bool operator!=(const NormValue& a, const NormValue& b) { return !(a == b); }
  friend bool operator<(const NormValue& a, const NormValue& b);
  friend bool operator<=(const NormValue& a, const NormValue& b) { return a == b || a < b; }
  friend bool operator>(const NormValue& a, const NormValue& b) { return b < a; }
  friend bool operator>=(const NormValue& a, const NormValue& b) { return b <= a; }

  /// "0", "1", "2^-3/2", "2^-1*3^2".
  std::string to_string() const;

 private:
  bool zero_ = false;
  std::map<unsigned, mpq_class> exps_;  // no zero exponents stored
};

NormValue max(const NormValue& a, const NormValue& b);

/// Truncated p-adic number in relative-precision form p^v * u with u a unit known
/// modulo p^N. Values built from rationals are exact until they meet an inexact
/// operand; exact zero is distinguished from anything known only to precision N.
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(unsigned p, int precision);
  static PadicNumber from_rational(unsigned p, int precision, const mpq_class& value);
  static PadicNumber from_integer(unsigned p, int precision, long value) {
    return from_rational(p, precision, mpq_class(value));
  }
  /// Inexact value p^valuation * unit with unit reduced mod p^precision; unit must be prime to p.
  static PadicNumber approximate(unsigned p, int precision, int valuation, const mpz_class& unit);

  unsigned prime() const { return p_; }
  int precision() const { return n_; }
  /// Valuation; meaningless for zero.
  int valuation() const { return v_; }
  /// Unit part reduced modulo p^precision (0 for zero).
  const mpz_class& unit() const { return unit_; }
  bool is_zero() const { return zero_; }
  bool is_exact() const { return exact_; }

  NormValue norm() const;
  /// The represented rational: exact value, or p^v * u for inexact values.
  mpq_class to_rational() const;
  PadicNumber with_precision(int precision) const;

  PadicNumber operator-() const;
  PadicNumber operator+(const PadicNumber& other) const;
  PadicNumber operator-(const PadicNumber& other) const;
  PadicNumber operator*(const PadicNumber& other) const;
  PadicNumber operator/(const PadicNumber& other) const;

  /// Agreement to the smaller of the two precisions.
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);
  friend bool operator!=(const PadicNumber& a, const PadicNumber& b) { return !(a == b); }

  std::string to_string() const;

 private:
  void check_prime(const PadicNumber& other) const;
  mpz_class unit_mod(int digits) const;

  unsigned p_ = 2;
  int n_ = 1;
  int v_ = 0;
  mpz_class unit_ = 0;
  bool zero_ = true;
  bool exact_ = true;
  mpq_class exact_value_ = 0;
};

/// p-adic valuation of a nonzero integer.
int valuation(const mpz_class& x, unsigned p);
/// p-adic valuation of a nonzero rational.
int valuation(const mpq_class& x, unsigned p);
mpz_class ipow(unsigned base, unsigned exp);

}  // namespace adic
