#include "adic/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "adic/error.hpp"

namespace adic {

Monomial Monomial::var(std::size_t index, unsigned power) {
  Monomial m;
  m.set(index, power);
  return m;
}

void Monomial::set(std::size_t i, unsigned power) {
  if (i >= kMaxVars) throw BoundExceeded("too many variables (max " + std::to_string(kMaxVars) + ")");
  degree = degree - exps[i] + power;
  exps[i] = static_cast<std::uint16_t>(power);
}

bool Monomial::divides(const Monomial& other) const {
  if (degree > other.degree) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (exps[i] > other.exps[i]) return false;
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (exps[i] != 0 && other.exps[i] != 0) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned e = unsigned(exps[i]) + other.exps[i];
    if (e > 0xffff) throw BoundExceeded("exponent overflow");
    r.exps[i] = static_cast<std::uint16_t>(e);
  }
  r.degree = degree + other.degree;
  return r;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exps[i] = static_cast<std::uint16_t>(exps[i] - divisor.exps[i]);
  r.degree = degree - divisor.degree;
  return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.exps[i] = std::max(a.exps[i], b.exps[i]);
    r.degree += r.exps[i];
  }
  return r;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree != b.degree) return a.degree > b.degree ? 1 : -1;
  for (std::size_t i = kMaxVars; i-- > 0;) {
    if (a.exps[i] != b.exps[i]) return a.exps[i] < b.exps[i] ? 1 : -1;
  }
  return 0;
}

mpq_class Field::normalize(const mpq_class& x) const {
  if (characteristic == 0) return x;
  mpz_class p = characteristic;
  mpz_class den = x.get_den();
  mpz_class inv_den;
  if (mpz_invert(inv_den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
    throw DivisionByZero("denominator divisible by the characteristic " + std::to_string(characteristic));
  mpz_class r = (x.get_num() * inv_den) % p;
  if (r < 0) r += p;
  return mpq_class(r);
}

mpq_class Field::inv(const mpq_class& a) const {
  if (a == 0) throw DivisionByZero("inverse of zero");
  if (characteristic == 0) return 1 / a;
  return normalize(mpq_class(1) / a);
}

Poly::Poly(Field field, std::size_t nvars) : field_(field), nvars_(nvars) {
  if (nvars > kMaxVars) throw BoundExceeded("too many variables (max " + std::to_string(kMaxVars) + ")");
}

Poly Poly::constant(Field field, std::size_t nvars, const mpq_class& c) {
  return term(field, nvars, Monomial::one(), c);
}

Poly Poly::variable(Field field, std::size_t nvars, std::size_t index) {
  return term(field, nvars, Monomial::var(index), 1);
}

Poly Poly::term(Field field, std::size_t nvars, const Monomial& m, const mpq_class& c) {
  Poly p(field, nvars);
  mpq_class v = field.normalize(c);
  if (v != 0) p.terms_.push_back({m, v});
  return p;
}

Poly Poly::from_unsorted(Field field, std::size_t nvars, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return grevlex_compare(a.mono, b.mono) > 0; });
  Poly p(field, nvars);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff = field.add(p.terms_.back().coeff, t.coeff);
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back({t.mono, field.normalize(t.coeff)});
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree == 0);
}

unsigned Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree; }

unsigned Poly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.mono[var]);
  return d;
}

bool Poly::uses_var(std::size_t var) const { return degree_in(var) > 0; }

mpq_class Poly::coefficient(const Monomial& m) const {
  for (const auto& t : terms_)
    if (t.mono == m) return t.coeff;
  return 0;
}

Poly Poly::operator-() const {
  Poly r(field_, nvars_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono, field_.normalize(-t.coeff)});
  return r;
}

namespace {

void check_compatible(const Poly& a, const Poly& b) {
  if (a.field() != b.field()) throw DomainMismatch("polynomials over different fields");
}

}  // namespace

Poly Poly::operator+(const Poly& other) const {
  check_compatible(*this, other);
  Poly r(field_, std::max(nvars_, other.nvars_));
  r.terms_.reserve(terms_.size() + other.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < other.terms_.size()) {
    int c = i == terms_.size()         ? -1
            : j == other.terms_.size() ? 1
                                       : grevlex_compare(terms_[i].mono, other.terms_[j].mono);
    if (c > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(other.terms_[j++]);
    } else {
      mpq_class s = field_.add(terms_[i].coeff, other.terms_[j].coeff);
      if (s != 0) r.terms_.push_back({terms_[i].mono, s});
      ++i;
      ++j;
    }
  }
  return r;
}

Poly Poly::operator-(const Poly& other) const { return *this + (-other); }

Poly Poly::operator*(const Poly& other) const {
  check_compatible(*this, other);
  std::size_t nv = std::max(nvars_, other.nvars_);
  if (is_zero() || other.is_zero()) return Poly(field_, nv);
  std::map<Monomial, mpq_class, GrevlexGreater> acc;
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) {
      auto [it, inserted] = acc.try_emplace(a.mono * b.mono, 0);
      it->second += a.coeff * b.coeff;
    }
  Poly r(field_, nv);
  for (auto& [m, c] : acc) {
    mpq_class v = field_.normalize(c);
    if (v != 0) r.terms_.push_back({m, v});
  }
  return r;
}

Poly Poly::scaled(const mpq_class& c) const {
  mpq_class v = field_.normalize(c);
  Poly r(field_, nvars_);
  if (v == 0) return r;
  for (const auto& t : terms_) r.terms_.push_back({t.mono, field_.mul(t.coeff, v)});
  return r;
}

Poly Poly::mul_term(const Monomial& m, const mpq_class& c) const {
  mpq_class v = field_.normalize(c);
  Poly r(field_, nvars_);
  if (v == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono * m, field_.mul(t.coeff, v)});
  return r;
}

Poly Poly::pow(unsigned k) const {
  Poly result = constant(field_, nvars_, 1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(field_.inv(leading().coeff));
}

Poly Poly::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    unsigned e = t.mono[var];
    if (e == 0) continue;
    Monomial m = t.mono;
    m.set(var, e - 1);
    out.push_back({m, t.coeff * e});
  }
  return from_unsorted(field_, nvars_, std::move(out));
}

Poly Poly::substitute(const std::vector<Poly>& images) const {
  if (images.size() < nvars_) throw InvalidArgument("substitution needs one image per variable");
  Field f = images.empty() ? field_ : images.front().field();
  std::size_t nv = images.empty() ? 0 : images.front().nvars();
  Poly result(f, nv);
  // Cache powers per variable since the same exponents recur across terms.
  std::vector<std::vector<Poly>> powers(nvars_);
  for (const auto& t : terms_) {
    Poly prod = constant(f, nv, f.normalize(t.coeff));
    for (std::size_t i = 0; i < nvars_ && !prod.is_zero(); ++i) {
      unsigned e = t.mono[i];
      if (e == 0) continue;
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(f, nv, 1));
      while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
      prod = prod * cache[e];
    }
    result += prod;
  }
  return result;
}

Poly Poly::remap(std::size_t new_nvars, const std::vector<std::size_t>& var_map) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (t.mono[i] != 0) m.set(var_map.at(i), m[var_map[i]] + t.mono[i]);
    out.push_back({m, t.coeff});
  }
  return from_unsorted(field_, new_nvars, std::move(out));
}

Poly Poly::over(Field target) const {
  std::vector<Term> out;
  for (const auto& t : terms_) out.push_back({t.mono, target.normalize(t.coeff)});
  return from_unsorted(target, nvars_, std::move(out));
}

Poly Poly::truncated(unsigned cap) const {
  Poly r(field_, nvars_);
  for (const auto& t : terms_)
    if (t.mono.degree <= cap) r.terms_.push_back(t);
  return r;
}

std::string rational_to_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    mpq_class c = t.coeff;
    bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool need_coeff = c != 1 || t.mono.degree == 0;
    bool wrote = false;
    if (need_coeff) {
      os << rational_to_string(c);
      wrote = true;
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      unsigned e = t.mono[i];
      if (e == 0) continue;
      if (wrote) os << "*";
      os << (i < names.size() ? names[i] : "x" + std::to_string(i));
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.field_ != b.field_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

}  // namespace adic
