#include "adic/padic.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

#include "adic/error.hpp"
#include "adic/poly.hpp"

namespace adic {

NormValue NormValue::zero() {
  NormValue n;
  n.zero_ = true;
  return n;
}

NormValue NormValue::power(unsigned base, const mpq_class& exponent) {
  NormValue n;
  if (base < 2) throw InvalidArgument("norm base must be >= 2");
  if (exponent != 0) n.exps_[base] = exponent;
  return n;
}

mpq_class NormValue::exponent(unsigned base) const {
  auto it = exps_.find(base);
  return it == exps_.end() ? mpq_class(0) : it->second;
}

long double NormValue::log() const {
  if (zero_) return -INFINITY;
  long double s = 0;
  for (const auto& [b, e] : exps_) s += static_cast<long double>(e.get_d()) * std::log(static_cast<long double>(b));
  return s;
}

NormValue NormValue::operator*(const NormValue& other) const {
  if (zero_ || other.zero_) return zero();
  NormValue r = *this;
  for (const auto& [b, e] : other.exps_) {
    mpq_class s = r.exponent(b) + e;
    if (s == 0)
      r.exps_.erase(b);
    else
      r.exps_[b] = s;
  }
  return r;
}

NormValue NormValue::pow(const mpq_class& r) const {
  if (zero_) {
    if (r <= 0) throw InvalidArgument("non-positive power of zero norm");
    return *this;
  }
  NormValue out;
  if (r == 0) return out;
  for (const auto& [b, e] : exps_) out.exps_[b] = e * r;
  return out;
}

bool operator<(const NormValue& a, const NormValue& b) {
  if (a == b) return false;
  if (a.zero_) return true;
  if (b.zero_) return false;
  return a.log() < b.log();
}

std::string NormValue::to_string() const {
  if (zero_) return "0";
  if (exps_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [b, e] : exps_) {
    if (!first) os << "*";
    first = false;
    os << b << "^" << rational_to_string(e);
  }
  return os.str();
}

NormValue max(const NormValue& a, const NormValue& b) { return a < b ? b : a; }

mpz_class ipow(unsigned base, unsigned exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

int valuation(const mpz_class& x, unsigned p) {
  if (x == 0) throw InvalidArgument("valuation of zero");
  mpz_class y = x;
  int v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), p)) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
    ++v;
  }
  return v;
}

int valuation(const mpq_class& x, unsigned p) {
  return valuation(mpz_class(x.get_num()), p) - valuation(mpz_class(x.get_den()), p);
}

namespace {

mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  return r;
}

mpz_class inverse_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) throw DivisionByZero("unit not invertible");
  return r;
}

void check_params(unsigned p, int precision) {
  if (p < 2) throw InvalidArgument("p-adic prime must be >= 2");
  if (precision < 1) throw InvalidArgument("p-adic precision must be positive");
}

}  // namespace

PadicNumber PadicNumber::zero(unsigned p, int precision) {
  check_params(p, precision);
  PadicNumber z;
  z.p_ = p;
  z.n_ = precision;
  return z;
}

PadicNumber PadicNumber::from_rational(unsigned p, int precision, const mpq_class& value) {
  PadicNumber x = zero(p, precision);
  if (value == 0) return x;
  x.zero_ = false;
  x.exact_value_ = value;
  x.v_ = adic::valuation(value, p);
  x.unit_ = x.unit_mod(precision);
  return x;
}

PadicNumber PadicNumber::approximate(unsigned p, int precision, int valuation_, const mpz_class& unit) {
  check_params(p, precision);
  if (mpz_divisible_ui_p(unit.get_mpz_t(), p)) throw InvalidArgument("unit part divisible by p");
  PadicNumber x;
  x.p_ = p;
  x.n_ = precision;
  x.v_ = valuation_;
  x.unit_ = mod_pos(unit, ipow(p, precision));
  x.zero_ = false;
  x.exact_ = false;
  return x;
}

mpz_class PadicNumber::unit_mod(int digits) const {
  if (zero_) return 0;
  mpz_class m = ipow(p_, static_cast<unsigned>(std::max(digits, 1)));
  if (!exact_) return mod_pos(unit_, m);
  // exact value = p^v * a / b with a, b prime to p
  mpq_class u = exact_value_;
  if (v_ > 0) u /= mpq_class(ipow(p_, static_cast<unsigned>(v_)));
  if (v_ < 0) u *= mpq_class(ipow(p_, static_cast<unsigned>(-v_)));
  return mod_pos(mpz_class(u.get_num()) * inverse_mod(mpz_class(u.get_den()), m), m);
}

void PadicNumber::check_prime(const PadicNumber& other) const {
  if (p_ != other.p_) throw DomainMismatch("p-adic prime mismatch: " + std::to_string(p_) + " vs " + std::to_string(other.p_));
}

NormValue PadicNumber::norm() const {
  if (zero_) return NormValue::zero();
  return NormValue::power(p_, mpq_class(-v_));
}

mpq_class PadicNumber::to_rational() const {
  if (zero_) return 0;
  if (exact_) return exact_value_;
  mpq_class r(unit_);
  if (v_ >= 0)
    r *= mpq_class(ipow(p_, static_cast<unsigned>(v_)));
  else
    r /= mpq_class(ipow(p_, static_cast<unsigned>(-v_)));
  return r;
}

PadicNumber PadicNumber::with_precision(int precision) const {
  check_params(p_, precision);
  PadicNumber r = *this;
  if (zero_) {
    r.n_ = precision;
    return r;
  }
  if (exact_) {
    r.n_ = precision;
    r.unit_ = unit_mod(precision);
    return r;
  }
  r.n_ = std::min(n_, precision);
  r.unit_ = mod_pos(unit_, ipow(p_, static_cast<unsigned>(r.n_)));
  return r;
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  if (exact_) return from_rational(p_, n_, -exact_value_);
  return approximate(p_, n_, v_, -unit_);
}

PadicNumber PadicNumber::operator+(const PadicNumber& other) const {
  check_prime(other);
  int nominal = std::min(n_, other.n_);
  if (zero_) return other.exact_ ? other.with_precision(nominal) : other;
  if (other.zero_) return exact_ ? with_precision(nominal) : *this;
  if (exact_ && other.exact_) return from_rational(p_, nominal, exact_value_ + other.exact_value_);

  const long inf = LONG_MAX;
  long abs_a = exact_ ? inf : long(v_) + n_;
  long abs_b = other.exact_ ? inf : long(other.v_) + other.n_;
  long absprec = std::min(abs_a, abs_b);
  int vmin = std::min(v_, other.v_);
  int rel = static_cast<int>(absprec - vmin);
  mpz_class m = ipow(p_, static_cast<unsigned>(rel));
  auto shifted = [&](const PadicNumber& x) {
    int shift = x.v_ - vmin;
    if (shift >= rel) return mpz_class(0);
    return mod_pos(x.unit_mod(rel - shift) * ipow(p_, static_cast<unsigned>(shift)), m);
  };
  mpz_class s = mod_pos(shifted(*this) + shifted(other), m);
  if (s == 0)
    throw PrecisionLoss("sum indistinguishable from zero modulo " + std::to_string(p_) + "^" +
                        std::to_string(absprec));
  int k = adic::valuation(s, p_);
  mpz_class u = s / ipow(p_, static_cast<unsigned>(k));
  return approximate(p_, rel - k, vmin + k, u);
}

PadicNumber PadicNumber::operator-(const PadicNumber& other) const { return *this + (-other); }

PadicNumber PadicNumber::operator*(const PadicNumber& other) const {
  check_prime(other);
  int nominal = std::min(n_, other.n_);
  if ((zero_ && exact_) || (other.zero_ && other.exact_)) return zero(p_, nominal);
  if (exact_ && other.exact_) return from_rational(p_, nominal, exact_value_ * other.exact_value_);
  int n = exact_ ? other.n_ : other.exact_ ? n_ : std::min(n_, other.n_);
  return approximate(p_, n, v_ + other.v_, unit_mod(n) * other.unit_mod(n));
}

PadicNumber PadicNumber::operator/(const PadicNumber& other) const {
  check_prime(other);
  if (other.zero_) throw DivisionByZero("p-adic division by zero");
  int nominal = std::min(n_, other.n_);
  if (zero_) return zero(p_, nominal);
  if (exact_ && other.exact_) return from_rational(p_, nominal, exact_value_ / other.exact_value_);
  int n = exact_ ? other.n_ : other.exact_ ? n_ : std::min(n_, other.n_);
  mpz_class m = ipow(p_, static_cast<unsigned>(n));
  return approximate(p_, n, v_ - other.v_, unit_mod(n) * inverse_mod(other.unit_mod(n), m));
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  if (a.p_ != b.p_) return false;
  if (a.zero_ || b.zero_) return a.zero_ && b.zero_;
  if (a.exact_ && b.exact_) return a.exact_value_ == b.exact_value_;
  if (a.v_ != b.v_) return false;
  int n = std::min(a.n_, b.n_);
  return a.unit_mod(n) == b.unit_mod(n);
}

std::string PadicNumber::to_string() const {
  std::ostringstream os;
  if (zero_) return "0";
  if (exact_) return rational_to_string(exact_value_);
  os << unit_.get_str();
  if (v_ != 0) os << "*" << p_ << "^" << v_;
  os << " + O(" << p_ << "^" << (v_ + n_) << ")";
  return os.str();
}

}  // namespace adic
