#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "adic/finite_ring.hpp"

namespace adic {

inline constexpr unsigned kMaxWittLength = 4;

/// Truncated Witt vector (x_0, ..., x_{n-1}) over a finite ring of characteristic p.
struct WittVector {
  FiniteRing ring;
  unsigned p = 2;
  std::vector<FiniteRing::Elem> coords;

  std::size_t length() const { return coords.size(); }
  std::string to_string() const;
  friend bool operator==(const WittVector& a, const WittVector& b) { return a.p == b.p && a.coords == b.coords; }
};

/// Checks that R has prime characteristic p in {2, 3, 5} and a polynomial description; returns p.
unsigned witt_prime(const FiniteRing& R);

WittVector witt_vector(const FiniteRing& R, std::vector<FiniteRing::Elem> coords);
WittVector witt_zero(const FiniteRing& R, unsigned length);
WittVector teichmuller(const FiniteRing& R, unsigned length, FiniteRing::Elem c);
WittVector witt_from_integer(const FiniteRing& R, unsigned length, long m);

enum class WittOp { Add, Mul };

/// Sum or product through ghost components of a torsion-free lift. A nonzero `lift_seed`
/// perturbs the lifted coordinates by random multiples of p.
WittVector witt_arith(WittOp op, const WittVector& a, const WittVector& b, std::uint32_t lift_seed = 0);

/// Whether ghost(op(a, b)) agrees with op(ghost(a), ghost(b)) modulo p^{k+1} in every component k.
bool ghost_consistent(WittOp op, const WittVector& a, const WittVector& b, const WittVector& result);

/// F: W_n -> W_{n-1}, computed on ghost components.
WittVector frobenius_witt(const WittVector& a);
/// V: W_n -> W_{n+1} (length kept at kMaxWittLength when already there).
WittVector verschiebung(const WittVector& a);

/// R-flat: the inverse limit of Frobenius on a characteristic-p finite ring, realized as the
/// largest perfect subring S of R, written canonically as a product of Galois fields.
struct Tilt {
  FiniteRing source;
  FiniteRing ring;                                   // GF(p,k) or Prod(GF(p,k_1), ...) with k_i increasing
  std::vector<FiniteRing::Elem> embedding;           // ring element -> x_0 in source
  std::vector<FiniteRing::Elem> inverse_frobenius;   // on source elements of S (others map to themselves)
  unsigned stabilization_depth = 0;                  // least d with F^d(R) = F^{d+1}(R)
  unsigned depth = 0;

  /// Stage-k projection R-flat -> R of the compatible system.
  FiniteRing::Elem project(unsigned k, FiniteRing::Elem x) const;
  /// (x_0, ..., x_depth) with x_k = x_{k+1}^p.
  std::vector<FiniteRing::Elem> sequence(FiniteRing::Elem x) const;
};

Tilt tilt(const FiniteRing& R, unsigned depth = 4);

}  // namespace adic
