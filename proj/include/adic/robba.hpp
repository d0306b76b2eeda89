#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "adic/padic.hpp"
#include "adic/text.hpp"

namespace adic {

inline constexpr unsigned kDefaultRobbaLength = 3;
inline constexpr std::size_t kDefaultSupportCap = 16;

/// Finite sum of c_a tbar^a with a in Z[1/p] and c_a in F_p, normed by |tbar| = 1/2.
class PerfectSeries {
 public:
  explicit PerfectSeries(unsigned p = 2) : p_(p) {}
  static PerfectSeries monomial(unsigned p, const mpq_class& exponent, unsigned long coeff = 1);

  unsigned prime() const { return p_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<mpq_class, unsigned>& terms() const { return terms_; }
  /// Least exponent; undefined for zero.
  mpq_class order() const { return terms_.begin()->first; }
  /// (1/2)^order, or 0.
  NormValue norm() const;

  PerfectSeries frobenius() const;
  /// The unique p^k-th root.
  PerfectSeries root(unsigned k) const;
  /// Keeps the `cap` terms of least exponent; returns whether anything was dropped.
  bool truncate(std::size_t cap);

  PerfectSeries operator+(const PerfectSeries& other) const;
  PerfectSeries operator*(const PerfectSeries& other) const;
  friend bool operator==(const PerfectSeries& a, const PerfectSeries& b) { return a.p_ == b.p_ && a.terms_ == b.terms_; }

  /// "tbar^(1/2) + 2*tbar^3", "1", "0".
  std::string to_string() const;

 private:
  void add_term(const mpq_class& exponent, long coeff);
  unsigned p_;
  std::map<mpq_class, unsigned> terms_;  // nonzero coefficients in [1, p)
};

/// sum_{k<N} p^k [x_k] with Teichmuller digits x_k; arithmetic is Witt arithmetic over the perfect ring.
class RobbaElement {
 public:
  static RobbaElement zero(unsigned p, unsigned length = kDefaultRobbaLength, std::size_t cap = kDefaultSupportCap);
  /// p^k [x].
  static RobbaElement teichmuller(const PerfectSeries& x, unsigned k = 0, unsigned length = kDefaultRobbaLength,
                                  std::size_t cap = kDefaultSupportCap);
  static RobbaElement from_integer(unsigned p, long m, unsigned length = kDefaultRobbaLength,
                                   std::size_t cap = kDefaultSupportCap);
  /// "p^0*[tbar^(1/2)] + p^1*[tbar^3]"; bare integers and "[..]" without a p-power are accepted.
  static RobbaElement parse(std::string_view text, unsigned p, unsigned length = kDefaultRobbaLength,
                            std::size_t cap = kDefaultSupportCap);
  /// Reads one literal and stops at the first token that cannot continue it.
  static RobbaElement parse(TokenStream& ts, unsigned p, unsigned length = kDefaultRobbaLength,
                            std::size_t cap = kDefaultSupportCap);

  unsigned prime() const { return p_; }
  unsigned length() const { return static_cast<unsigned>(digits_.size()); }
  std::size_t support_cap() const { return cap_; }
  const std::vector<PerfectSeries>& digits() const { return digits_; }
  bool is_zero() const;
  /// Set when a digit lost support terms or a product may have lost digits beyond the length.
  bool flagged() const { return flagged_; }

  RobbaElement operator+(const RobbaElement& other) const;
  RobbaElement operator*(const RobbaElement& other) const;
  /// Digit-wise p-th power.
  RobbaElement phi() const;

  friend bool operator==(const RobbaElement& a, const RobbaElement& b) { return a.digits_ == b.digits_; }
  std::string to_string() const;

 private:
  RobbaElement(unsigned p, unsigned length, std::size_t cap);
  unsigned p_;
  std::size_t cap_;
  std::vector<PerfectSeries> digits_;
  bool flagged_ = false;
};

/// max_k p^-k |x_k|^r.
NormValue robba_norm(const RobbaElement& f, const mpq_class& r);
/// max of the norms at s and r.
NormValue interval_norm(const RobbaElement& f, const mpq_class& s, const mpq_class& r);

}  // namespace adic
