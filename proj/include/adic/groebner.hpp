#pragma once

#include <cstddef>
#include <vector>

#include "adic/poly.hpp"

namespace adic {

/// Element of a free module P^r over a polynomial ring P.
using ModVec = std::vector<Poly>;

/// Work bounds for Buchberger runs. Exceeding one raises BoundExceeded.
struct GroebnerLimits {
  std::size_t max_basis = 4000;
  std::size_t max_pairs = 400000;
  unsigned max_degree = 96;
};

/// Reduced Groebner basis of a submodule of P^rank under the position-over-term
/// order (lower positions dominate, grevlex within a position).
class ModuleBasis {
 public:
  ModuleBasis() = default;

  static ModuleBasis compute(std::vector<ModVec> generators, std::size_t rank, Field field,
                             std::size_t nvars, const GroebnerLimits& limits = {});

  std::size_t rank() const { return rank_; }
  Field field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<ModVec>& elements() const { return basis_; }

  /// Full normal form of `v` with respect to the basis.
  ModVec reduce(const ModVec& v) const;
  bool contains(const ModVec& v) const;
  /// True iff the submodule is the whole free module.
  bool is_everything() const;
  unsigned max_degree() const;

 private:
  std::size_t rank_ = 0;
  Field field_{};
  std::size_t nvars_ = 0;
  std::vector<ModVec> basis_;
};

/// Reduced Groebner basis of an ideal in P = k[x_0..x_{n-1}] under grevlex.
class IdealBasis {
 public:
  IdealBasis() = default;
  IdealBasis(Field field, std::size_t nvars) : field_(field), nvars_(nvars) {}

  static IdealBasis compute(const std::vector<Poly>& generators, Field field, std::size_t nvars,
                            const GroebnerLimits& limits = {});

  Field field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<Poly>& basis() const { return basis_; }

  Poly reduce(const Poly& p) const;
  bool contains(const Poly& p) const { return reduce(p).is_zero(); }
  bool is_unit() const;
  /// Krull dimension of P/I; -1 for the unit ideal.
  int krull_dimension() const;
  /// Monomials of degree <= max_degree, using only variables flagged in `allowed`
  /// (all variables when empty), that are not divisible by any leading monomial.
  std::vector<Monomial> standard_monomials(unsigned max_degree, const std::vector<bool>& allowed = {}) const;
  /// Dimension of P/I as a k-vector space when finite, otherwise -1.
  long vector_space_dimension(long bound = 100000) const;

  friend bool operator==(const IdealBasis& a, const IdealBasis& b) { return a.basis_ == b.basis_; }

 private:
  Field field_{};
  std::size_t nvars_ = 0;
  std::vector<Poly> basis_;
};

/// Generators of the module of relations sum_i a_i v_i = 0 among `vectors` in P^rank.
std::vector<ModVec> syzygies(const std::vector<ModVec>& vectors, std::size_t rank, Field field,
                             std::size_t nvars, const GroebnerLimits& limits = {});

/// All monomials in `nvars` variables (restricted to `allowed` when non-empty) of degree <= max_degree,
/// in increasing grevlex order.
std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned max_degree, const std::vector<bool>& allowed = {});

}  // namespace adic
