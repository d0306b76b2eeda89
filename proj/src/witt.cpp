#include "adic/witt.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <set>

#include "adic/error.hpp"
#include "adic/ghost.hpp"

namespace adic {

using Elem = FiniteRing::Elem;

namespace {

/// Z[x]/(G) for a monic integral lift G of a factor's ideal, or Z[x] when no such lift exists.
struct FactorOps {
  using T = Poly;
  unsigned p = 2;
  std::size_t nvars = 0;
  std::shared_ptr<IdealBasis> lifted;

  T zero() const { return Poly(Field::rationals(), nvars); }
  T one() const { return Poly::constant(Field::rationals(), nvars, 1); }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T scale(const T& a, const mpz_class& m) const { return a.scaled(mpq_class(m)); }
  T divide_exact(const T& a, const mpz_class& d) const {
    for (const Term& t : a.terms())
      if (t.coeff.get_den() != 1 || !mpz_divisible_p(t.coeff.get_num_mpz_t(), d.get_mpz_t()))
        throw Error("ghost components are not divisible by " + d.get_str());
    return a.scaled(mpq_class(1, 1) / mpq_class(d));
  }
  T reduce(const T& a) const { return lifted ? lifted->reduce(a) : a; }
};

FactorOps factor_ops(const RingFactor& f) {
  FactorOps ops;
  ops.p = f.p;
  ops.nvars = f.vars.size();
  std::vector<Poly> lift;
  for (const Poly& g : f.ideal.basis()) lift.push_back(g.over(Field::rationals()));
  if (lift.empty()) return ops;
  auto gb = std::make_shared<IdealBasis>(IdealBasis::compute(lift, Field::rationals(), ops.nvars));
  for (const Poly& g : gb->basis()) {
    for (const Term& t : g.terms())
      if (t.coeff.get_den() != 1) return ops;
    if (!f.ideal.contains(g.over(Field::prime(f.p)))) return ops;
  }
  ops.lifted = gb;
  return ops;
}

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void check_compatible(const WittVector& a, const WittVector& b) {
  if (!(a.ring == b.ring) || a.p != b.p) throw DomainMismatch("Witt vectors over different rings");
  if (a.length() != b.length()) throw DomainMismatch("Witt vectors of different lengths");
}

/// Lifted coordinates of `a` in one factor.
std::vector<Poly> lift_factor(const WittVector& a, std::size_t factor, std::mt19937* rng, const FactorOps& ops) {
  std::vector<Poly> out;
  std::uniform_int_distribution<int> shift(-2, 2);
  for (Elem c : a.coords) {
    Poly x = a.ring.factor_polys(c)[factor].over(Field::rationals());
    if (rng) {
      Poly noise = ops.one().scaled(shift(*rng));
      for (const Term& t : x.terms()) noise += Poly::term(Field::rationals(), ops.nvars, t.mono, shift(*rng));
      x += noise.scaled(ops.p);
    }
    out.push_back(ops.reduce(x));
  }
  return out;
}


/// Applies a ghost-wise operation factor by factor and reassembles the coordinates.
WittVector through_ghosts(const std::vector<const WittVector*>& inputs, std::size_t out_length,
                          const std::function<std::vector<Poly>(const FactorOps&, const std::vector<std::vector<Poly>>&)>& fn,
                          std::uint32_t seed) {
  const WittVector& first = *inputs.front();
  const FiniteRing& R = first.ring;
  const auto& factors = R.factors();
  std::vector<std::vector<Poly>> per_coord(out_length, std::vector<Poly>(factors.size()));
  std::mt19937 rng(seed);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    FactorOps ops = factor_ops(factors[f]);
    std::vector<std::vector<Poly>> ghosts;
    for (const WittVector* w : inputs) ghosts.push_back(ghost::components(ops, lift_factor(*w, f, seed ? &rng : nullptr, ops)));
    std::vector<Poly> x = ghost::solve(ops, fn(ops, ghosts));
    for (std::size_t k = 0; k < out_length; ++k) per_coord[k][f] = x[k];
  }
  WittVector out{R, first.p, {}};
  for (const auto& polys : per_coord) out.coords.push_back(R.from_factor_polys(polys));
  return out;
}

std::vector<Poly> combine(const FactorOps& ops, const std::vector<Poly>& a, const std::vector<Poly>& b, WittOp op) {
  std::vector<Poly> out;
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(ops.reduce(op == WittOp::Add ? a[k] + b[k] : a[k] * b[k]));
  return out;
}

}  // namespace

std::string WittVector::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ", ";
    s += ring.format(coords[i]);
  }
  return s + ")";
}

unsigned witt_prime(const FiniteRing& R) {
  unsigned long c = R.characteristic();
  if (!is_prime(c)) throw DomainMismatch("Witt vectors need a ring of prime characteristic, got " + R.spec());
  if (c != 2 && c != 3 && c != 5) throw Unsupported("Witt vectors are limited to p in {2, 3, 5}");
  if (R.factors().empty()) throw Unsupported("Witt vectors need a ring given by polynomial factors: " + R.spec());
  return static_cast<unsigned>(c);
}

WittVector witt_vector(const FiniteRing& R, std::vector<Elem> coords) {
  unsigned p = witt_prime(R);
  if (coords.empty() || coords.size() > kMaxWittLength)
    throw InvalidArgument("Witt length must be between 1 and " + std::to_string(kMaxWittLength));
  for (Elem c : coords)
    if (c >= R.size()) throw InvalidArgument("Witt coordinate outside the ring");
  return {R, p, std::move(coords)};
}

WittVector witt_zero(const FiniteRing& R, unsigned length) { return witt_vector(R, std::vector<Elem>(length, R.zero())); }

WittVector teichmuller(const FiniteRing& R, unsigned length, Elem c) {
  std::vector<Elem> coords(length, R.zero());
  if (length) coords[0] = c;
  return witt_vector(R, coords);
}

WittVector witt_from_integer(const FiniteRing& R, unsigned length, long m) {
  WittVector shape = witt_zero(R, length);
  return through_ghosts(
      {&shape}, length,
      [&](const FactorOps& ops, const std::vector<std::vector<Poly>>&) {
        return std::vector<Poly>(length, ops.one().scaled(m));
      },
      0);
}

WittVector witt_arith(WittOp op, const WittVector& a, const WittVector& b, std::uint32_t lift_seed) {
  check_compatible(a, b);
  WittVector out = through_ghosts(
      {&a, &b}, a.length(),
      [op](const FactorOps& ops, const std::vector<std::vector<Poly>>& g) { return combine(ops, g[0], g[1], op); },
      lift_seed);
  if (!ghost_consistent(op, a, b, out)) throw Error("ghost components disagree after Witt arithmetic");
  return out;
}

bool ghost_consistent(WittOp op, const WittVector& a, const WittVector& b, const WittVector& result) {
  check_compatible(a, b);
  check_compatible(a, result);
  const auto& factors = a.ring.factors();
  for (std::size_t f = 0; f < factors.size(); ++f) {
    FactorOps ops = factor_ops(factors[f]);
    // congruences only make sense in a torsion-free quotient
    if (!ops.lifted && !factors[f].ideal.basis().empty()) continue;
    auto ga = ghost::components(ops, lift_factor(a, f, nullptr, ops));
    auto gb = ghost::components(ops, lift_factor(b, f, nullptr, ops));
    auto gr = ghost::components(ops, lift_factor(result, f, nullptr, ops));
    auto expected = combine(ops, ga, gb, op);
    for (std::size_t k = 0; k < gr.size(); ++k) {
      mpz_class modulus = ghost::ipow(a.p, static_cast<unsigned>(k + 1));
      Poly diff = ops.reduce(gr[k] - expected[k]);
      for (const Term& t : diff.terms())
        if (t.coeff.get_den() != 1 || !mpz_divisible_p(t.coeff.get_num_mpz_t(), modulus.get_mpz_t())) return false;
    }
  }
  return true;
}

WittVector frobenius_witt(const WittVector& a) {
  if (a.length() < 2) throw InvalidArgument("Frobenius needs Witt length at least 2");
  return through_ghosts(
      {&a}, a.length() - 1,
      [](const FactorOps&, const std::vector<std::vector<Poly>>& g) {
        return std::vector<Poly>(g[0].begin() + 1, g[0].end());
      },
      0);
}

WittVector verschiebung(const WittVector& a) {
  std::vector<Elem> coords{a.ring.zero()};
  coords.insert(coords.end(), a.coords.begin(), a.coords.end());
  if (coords.size() > kMaxWittLength) coords.pop_back();
  return {a.ring, a.p, coords};
}

// ------------------------------------------------------------------- tilt

Elem Tilt::project(unsigned k, Elem x) const {
  Elem y = embedding.at(x);
  for (unsigned i = 0; i < k; ++i) y = inverse_frobenius[y];
  return y;
}

std::vector<Elem> Tilt::sequence(Elem x) const {
  std::vector<Elem> out;
  for (unsigned k = 0; k <= depth; ++k) out.push_back(project(k, x));
  return out;
}

Tilt tilt(const FiniteRing& R, unsigned depth) {
  unsigned long c = R.characteristic();
  if (!is_prime(c)) throw DomainMismatch("tilt needs a ring of prime characteristic, got " + R.spec());
  unsigned p = static_cast<unsigned>(c);
  Tilt t;
  t.source = R;
  t.depth = depth;

  // largest perfect subring: the stable image of Frobenius
  std::vector<Elem> S(R.size());
  for (Elem x = 0; x < R.size(); ++x) S[x] = x;
  while (true) {
    std::set<Elem> next;
    for (Elem x : S) next.insert(R.pow(x, p));
    if (next.size() == S.size()) break;
    S.assign(next.begin(), next.end());
    ++t.stabilization_depth;
  }
  t.inverse_frobenius.resize(R.size());
  for (Elem x = 0; x < R.size(); ++x) t.inverse_frobenius[x] = x;
  for (Elem x : S) t.inverse_frobenius[R.pow(x, p)] = x;

  // primitive idempotents split S into finite fields
  std::vector<Elem> idempotents;
  for (Elem x : S)
    if (x != R.zero() && R.mul(x, x) == x) idempotents.push_back(x);
  struct Component {
    Elem e;
    std::vector<Elem> elems;
    unsigned degree;
  };
  std::vector<Component> comps;
  for (Elem e : idempotents) {
    bool primitive = std::none_of(idempotents.begin(), idempotents.end(), [&](Elem f) { return f != e && R.mul(f, e) == f; });
    if (!primitive) continue;
    std::set<Elem> es;
    for (Elem x : S) es.insert(R.mul(e, x));
    unsigned degree = 0;
    for (std::size_t n = es.size(); n > 1; n /= p) ++degree;
    comps.push_back({e, {es.begin(), es.end()}, degree});
  }
  std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.e < b.e;
  });

  std::vector<FiniteRing> fields;
  for (const auto& comp : comps) fields.push_back(FiniteRing::galois_field(p, comp.degree));
  t.ring = fields.size() == 1 ? fields.front() : FiniteRing::product(fields);

  // a root of each defining polynomial inside its component
  auto eval_in = [&](const Poly& poly, Elem z, Elem unit) {
    Elem acc = R.zero();
    for (const Term& term : poly.terms()) {
      Elem coeff = R.from_integer(term.coeff.get_num());
      Elem power = term.mono.degree == 0 ? unit : R.pow(z, term.mono.degree);
      acc = R.add(acc, R.mul(coeff, power));
    }
    return acc;
  };
  std::vector<Elem> roots;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& basis = fields[i].factors().front().ideal.basis();
    if (basis.empty()) {
      roots.push_back(comps[i].e);
      continue;
    }
    auto it = std::find_if(comps[i].elems.begin(), comps[i].elems.end(),
                           [&](Elem z) { return eval_in(basis.front(), z, comps[i].e) == R.zero(); });
    if (it == comps[i].elems.end()) throw Error("no root of the defining polynomial in a component of the tilt");
    roots.push_back(*it);
  }

  t.embedding.resize(t.ring.size());
  std::set<Elem> image;
  for (Elem x = 0; x < t.ring.size(); ++x) {
    auto polys = t.ring.factor_polys(x);
    Elem y = R.zero();
    for (std::size_t i = 0; i < comps.size(); ++i) y = R.add(y, eval_in(polys[i], roots[i], comps[i].e));
    t.embedding[x] = y;
    image.insert(y);
  }
  if (image.size() != S.size() || !std::equal(image.begin(), image.end(), S.begin()))
    throw Error("tilt decomposition does not cover the perfect subring");
  return t;
}

}  // namespace adic
