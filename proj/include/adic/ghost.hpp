#pragma once

#include <vector>

#include <gmpxx.h>

namespace adic::ghost {

// Ops must provide: using T; unsigned p; T zero() const; T add(T, T); T sub(T, T); T mul(T, T);
// T scale(T, mpz_class); T divide_exact(T, mpz_class) (throws when inexact); T reduce(T).

template <class Ops>
typename Ops::T power(const Ops& ops, const typename Ops::T& x, unsigned long e) {
  typename Ops::T result = ops.one();
  typename Ops::T base = x;
  while (e) {
    if (e & 1) result = ops.reduce(ops.mul(result, base));
    e >>= 1;
    if (e) base = ops.reduce(ops.mul(base, base));
  }
  return result;
}

inline mpz_class ipow(unsigned p, unsigned k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

/// w_k = sum_{i<=k} p^i x_i^{p^{k-i}}.
template <class Ops>
std::vector<typename Ops::T> components(const Ops& ops, const std::vector<typename Ops::T>& x) {
  std::vector<typename Ops::T> w;
  for (std::size_t k = 0; k < x.size(); ++k) {
    typename Ops::T acc = ops.zero();
    for (std::size_t i = 0; i <= k; ++i) {
      unsigned long e = ipow(ops.p, static_cast<unsigned>(k - i)).get_ui();
      acc = ops.add(acc, ops.scale(power(ops, x[i], e), ipow(ops.p, static_cast<unsigned>(i))));
    }
    w.push_back(ops.reduce(acc));
  }
  return w;
}

/// Inverse of `components` on a torsion-free ring.
template <class Ops>
std::vector<typename Ops::T> solve(const Ops& ops, const std::vector<typename Ops::T>& w) {
  std::vector<typename Ops::T> x;
  for (std::size_t k = 0; k < w.size(); ++k) {
    typename Ops::T acc = w[k];
    for (std::size_t i = 0; i < k; ++i) {
      unsigned long e = ipow(ops.p, static_cast<unsigned>(k - i)).get_ui();
      acc = ops.sub(acc, ops.scale(power(ops, x[i], e), ipow(ops.p, static_cast<unsigned>(i))));
    }
    x.push_back(ops.divide_exact(ops.reduce(acc), ipow(ops.p, static_cast<unsigned>(k))));
  }
  return x;
}

}  // namespace adic::ghost
