#include "adic/robba.hpp"

#include <algorithm>

#include "adic/error.hpp"
#include "adic/ghost.hpp"
#include "adic/text.hpp"

namespace adic {

namespace {

bool in_localized_integers(const mpq_class& q, unsigned p) {
  mpz_class den = q.get_den();
  while (den % p == 0) den /= p;
  return den == 1;
}

long mod_p(const mpz_class& c, unsigned p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
  return static_cast<long>(r.get_si());
}

/// The group ring Z[tbar^{Z[1/p]}], torsion-free and mapping onto the perfect ring mod p.
struct GroupRingOps {
  using T = std::map<mpq_class, mpz_class>;
  unsigned p = 2;

  T zero() const { return {}; }
  T one() const { return {{mpq_class(0), mpz_class(1)}}; }
  static void clean(T& a) {
    for (auto it = a.begin(); it != a.end();) it = it->second == 0 ? a.erase(it) : std::next(it);
  }
  T add(const T& a, const T& b) const {
    T out = a;
    for (const auto& [e, c] : b) out[e] += c;
    clean(out);
    return out;
  }
  T sub(const T& a, const T& b) const {
    T out = a;
    for (const auto& [e, c] : b) out[e] -= c;
    clean(out);
    return out;
  }
  T mul(const T& a, const T& b) const {
    T out;
    for (const auto& [ea, ca] : a)
      for (const auto& [eb, cb] : b) out[ea + eb] += ca * cb;
    clean(out);
    return out;
  }
  T scale(const T& a, const mpz_class& m) const {
    T out;
    if (m == 0) return out;
    for (const auto& [e, c] : a) out[e] = c * m;
    return out;
  }
  T divide_exact(const T& a, const mpz_class& d) const {
    T out;
    for (const auto& [e, c] : a) {
      if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) throw Error("ghost components are not divisible by " + d.get_str());
      out[e] = c / d;
    }
    return out;
  }
  T reduce(const T& a) const { return a; }
};

GroupRingOps::T lift(const PerfectSeries& s) {
  GroupRingOps::T out;
  for (const auto& [e, c] : s.terms()) out[e] = c;
  return out;
}

PerfectSeries lower(const GroupRingOps::T& t, unsigned p) {
  PerfectSeries out(p);
  for (const auto& [e, c] : t) {
    long r = mod_p(c, p);
    if (r) out = out + PerfectSeries::monomial(p, e, static_cast<unsigned long>(r));
  }
  return out;
}

std::string exponent_text(const mpq_class& e) {
  if (e == 1) return "tbar";
  if (e.get_den() == 1 && e > 0) return "tbar^" + e.get_str();
  return "tbar^(" + e.get_str() + ")";
}

}  // namespace

// ---------------------------------------------------------- perfect series

PerfectSeries PerfectSeries::monomial(unsigned p, const mpq_class& exponent, unsigned long coeff) {
  PerfectSeries s(p);
  s.add_term(exponent, static_cast<long>(coeff % p));
  return s;
}

void PerfectSeries::add_term(const mpq_class& exponent, long coeff) {
  if (!in_localized_integers(exponent, p_))
    throw InvalidArgument("exponent " + exponent.get_str() + " is not in Z[1/" + std::to_string(p_) + "]");
  long c = ((coeff % static_cast<long>(p_)) + static_cast<long>(p_)) % static_cast<long>(p_);
  if (c == 0) return;
  auto it = terms_.find(exponent);
  if (it == terms_.end()) {
    terms_.emplace(exponent, static_cast<unsigned>(c));
    return;
  }
  unsigned sum = (it->second + static_cast<unsigned>(c)) % p_;
  if (sum == 0)
    terms_.erase(it);
  else
    it->second = sum;
}

NormValue PerfectSeries::norm() const {
  if (is_zero()) return NormValue::zero();
  return NormValue::power(2, -order());
}

PerfectSeries PerfectSeries::frobenius() const {
  PerfectSeries out(p_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e * p_, c);
  return out;
}

PerfectSeries PerfectSeries::root(unsigned k) const {
  mpq_class scale(1);
  for (unsigned i = 0; i < k; ++i) scale *= p_;
  PerfectSeries out(p_);
  for (const auto& [e, c] : terms_) {
    mpq_class q = e / scale;
    q.canonicalize();
    out.terms_.emplace(q, c);
  }
  return out;
}

bool PerfectSeries::truncate(std::size_t cap) {
  if (terms_.size() <= cap) return false;
  auto it = terms_.begin();
  std::advance(it, static_cast<long>(cap));
  terms_.erase(it, terms_.end());
  return true;
}

PerfectSeries PerfectSeries::operator+(const PerfectSeries& other) const {
  if (p_ != other.p_) throw DomainMismatch("series over different primes");
  PerfectSeries out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

PerfectSeries PerfectSeries::operator*(const PerfectSeries& other) const {
  if (p_ != other.p_) throw DomainMismatch("series over different primes");
  PerfectSeries out(p_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : other.terms_) out.add_term(ea + eb, static_cast<long>(ca * cb));
  return out;
}

std::string PerfectSeries::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (const auto& [e, c] : terms_) {
    if (!s.empty()) s += " + ";
    if (e == 0) {
      s += std::to_string(c);
      continue;
    }
    if (c != 1) s += std::to_string(c) + "*";
    s += exponent_text(e);
  }
  return s;
}

// ---------------------------------------------------------- Robba elements

RobbaElement::RobbaElement(unsigned p, unsigned length, std::size_t cap) : p_(p), cap_(cap) {
  if (p != 2 && p != 3 && p != 5) throw Unsupported("Robba elements are limited to p in {2, 3, 5}");
  if (length == 0) throw InvalidArgument("Robba length must be positive");
  digits_.assign(length, PerfectSeries(p));
}

RobbaElement RobbaElement::zero(unsigned p, unsigned length, std::size_t cap) { return RobbaElement(p, length, cap); }

RobbaElement RobbaElement::teichmuller(const PerfectSeries& x, unsigned k, unsigned length, std::size_t cap) {
  RobbaElement out(x.prime(), length, cap);
  if (k < length) {
    out.digits_[k] = x;
    out.flagged_ = out.digits_[k].truncate(cap);
  }
  return out;
}

RobbaElement RobbaElement::from_integer(unsigned p, long m, unsigned length, std::size_t cap) {
  RobbaElement out(p, length, cap);
  GroupRingOps ops{p};
  std::vector<GroupRingOps::T> ghosts(length, ops.scale(ops.one(), m));
  auto coords = ghost::solve(ops, ghosts);
  for (unsigned k = 0; k < length; ++k) out.digits_[k] = lower(coords[k], p).root(k);
  return out;
}

bool RobbaElement::is_zero() const {
  return std::all_of(digits_.begin(), digits_.end(), [](const PerfectSeries& s) { return s.is_zero(); });
}

namespace {

std::vector<GroupRingOps::T> witt_coordinates(const std::vector<PerfectSeries>& digits) {
  std::vector<GroupRingOps::T> out;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    PerfectSeries x = digits[k];
    for (std::size_t i = 0; i < k; ++i) x = x.frobenius();
    out.push_back(lift(x));
  }
  return out;
}

}  // namespace

RobbaElement RobbaElement::operator+(const RobbaElement& other) const {
  if (p_ != other.p_ || length() != other.length()) throw DomainMismatch("Robba elements of different shapes");
  GroupRingOps ops{p_};
  auto ga = ghost::components(ops, witt_coordinates(digits_));
  auto gb = ghost::components(ops, witt_coordinates(other.digits_));
  for (std::size_t k = 0; k < ga.size(); ++k) ga[k] = ops.add(ga[k], gb[k]);
  auto coords = ghost::solve(ops, ga);
  RobbaElement out(p_, length(), std::min(cap_, other.cap_));
  out.flagged_ = flagged_ || other.flagged_;
  for (unsigned k = 0; k < length(); ++k) {
    out.digits_[k] = lower(coords[k], p_).root(k);
    if (out.digits_[k].truncate(out.cap_)) out.flagged_ = true;
  }
  return out;
}

RobbaElement RobbaElement::operator*(const RobbaElement& other) const {
  if (p_ != other.p_ || length() != other.length()) throw DomainMismatch("Robba elements of different shapes");
  GroupRingOps ops{p_};
  auto ga = ghost::components(ops, witt_coordinates(digits_));
  auto gb = ghost::components(ops, witt_coordinates(other.digits_));
  for (std::size_t k = 0; k < ga.size(); ++k) ga[k] = ops.mul(ga[k], gb[k]);
  auto coords = ghost::solve(ops, ga);
  RobbaElement out(p_, length(), std::min(cap_, other.cap_));
  out.flagged_ = flagged_ || other.flagged_;
  for (unsigned i = 0; i < length(); ++i)
    for (unsigned j = 0; j < length(); ++j)
      if (i + j >= length() && !digits_[i].is_zero() && !other.digits_[j].is_zero()) out.flagged_ = true;
  for (unsigned k = 0; k < length(); ++k) {
    out.digits_[k] = lower(coords[k], p_).root(k);
    if (out.digits_[k].truncate(out.cap_)) out.flagged_ = true;
  }
  return out;
}

RobbaElement RobbaElement::phi() const {
  RobbaElement out = *this;
  for (auto& d : out.digits_) d = d.frobenius();
  return out;
}

std::string RobbaElement::to_string() const {
  std::string s;
  for (unsigned k = 0; k < length(); ++k) {
    if (digits_[k].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "p^" + std::to_string(k) + "*[" + digits_[k].to_string() + "]";
  }
  return s.empty() ? "0" : s;
}

RobbaElement RobbaElement::parse(std::string_view text, unsigned p, unsigned length, std::size_t cap) {
  TokenStream ts(tokenize(text));
  RobbaElement total = parse(ts, p, length, cap);
  if (!ts.at_end()) ts.fail("unexpected '" + ts.peek().text + "'");
  return total;
}

RobbaElement RobbaElement::parse(TokenStream& ts, unsigned p, unsigned length, std::size_t cap) {
  auto parse_series = [&] {
    PerfectSeries s(p);
    do {
      long coeff = 1;
      if (ts.peek().kind == TokenKind::Number) {
        coeff = ts.expect_integer();
        if (!ts.accept_symbol("*")) {
          s = s + PerfectSeries::monomial(p, 0, static_cast<unsigned long>(((coeff % p) + p) % p));
          continue;
        }
      }
      if (!ts.is_identifier("tbar")) ts.fail("expected tbar");
      ts.next();
      mpq_class e(1);
      if (ts.accept_symbol("^")) {
        if (ts.accept_symbol("(")) {
          e = parse_rational(ts);
          ts.expect_symbol(")");
        } else {
          e = ts.expect_integer();
        }
      }
      if (!in_localized_integers(e, p)) ts.fail("exponent " + e.get_str() + " is not in Z[1/" + std::to_string(p) + "]");
      s = s + PerfectSeries::monomial(p, e, static_cast<unsigned long>(((coeff % p) + p) % p));
    } while (ts.accept_symbol("+"));
    return s;
  };

  RobbaElement total = zero(p, length, cap);
  do {
    long multiple = 1;
    unsigned k = 0;
    if (ts.peek().kind == TokenKind::Number) {
      multiple = ts.expect_integer();
      if (!ts.accept_symbol("*")) {
        total = total + from_integer(p, multiple, length, cap);
        continue;
      }
    }
    if (ts.is_identifier("p")) {
      ts.next();
      ts.expect_symbol("^");
      long e = ts.expect_integer();
      if (e < 0) ts.fail("negative power of p");
      k = static_cast<unsigned>(e);
      ts.expect_symbol("*");
    }
    ts.expect_symbol("[");
    PerfectSeries digit = parse_series();
    ts.expect_symbol("]");
    RobbaElement term = teichmuller(digit, k, length, cap);
    if (multiple != 1) term = term * from_integer(p, multiple, length, cap);
    total = total + term;
  } while (ts.accept_symbol("+"));
  return total;
}

// ------------------------------------------------------------------ norms

NormValue robba_norm(const RobbaElement& f, const mpq_class& r) {
  if (r <= 0) throw InvalidArgument("norm exponent must be positive");
  NormValue best = NormValue::zero();
  for (unsigned k = 0; k < f.length(); ++k) {
    const PerfectSeries& d = f.digits()[k];
    if (d.is_zero()) continue;
    NormValue v = NormValue::power(f.prime(), -static_cast<long>(k)) * NormValue::power(2, -d.order() * r);
    best = max(best, v);
  }
  return best;
}

NormValue interval_norm(const RobbaElement& f, const mpq_class& s, const mpq_class& r) {
  if (s <= 0) throw InvalidArgument("interval must lie in (0, infinity)");
  if (s > r) throw InvalidArgument("interval [" + s.get_str() + ", " + r.get_str() + "] has s > r");
  return max(robba_norm(f, s), robba_norm(f, r));
}

}  // namespace adic
