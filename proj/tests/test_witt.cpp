#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "adic/error.hpp"
#include "adic/robba.hpp"
#include "adic/text.hpp"
#include "adic/witt.hpp"

using namespace adic;
using Elem = FiniteRing::Elem;

namespace {

FiniteRing ring(const char* spec) { return FiniteRing::parse(spec); }

/// All Witt vectors of the given length over R.
std::vector<WittVector> all_vectors(const FiniteRing& R, unsigned n) {
  std::vector<WittVector> out;
  std::vector<Elem> coords(n, 0);
  while (true) {
    out.push_back(witt_vector(R, coords));
    std::size_t i = 0;
    while (i < n && ++coords[i] == R.size()) coords[i++] = 0;
    if (i == n) break;
  }
  return out;
}

WittVector random_vector(const FiniteRing& R, unsigned n, std::mt19937& rng) {
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(R.size() - 1));
  std::vector<Elem> coords;
  for (unsigned i = 0; i < n; ++i) coords.push_back(pick(rng));
  return witt_vector(R, coords);
}

WittVector times_p(const WittVector& a) {
  WittVector acc = witt_zero(a.ring, static_cast<unsigned>(a.length()));
  for (unsigned i = 0; i < a.p; ++i) acc = witt_arith(WittOp::Add, acc, a);
  return acc;
}

/// Teichmuller representative of c in Z/p^n, by iterating x -> x^p.
long teichmuller_integer(long c, unsigned p, long modulus) {
  long x = c % modulus;
  for (int round = 0; round < 8; ++round) {
    long y = 1;
    for (unsigned k = 0; k < p; ++k) y = (y * x) % modulus;
    x = y;
  }
  return x;
}

/// W_n(F_p) -> Z/p^n, (x_i) -> sum p^i tau(x_i).
long to_integer(const WittVector& w, long modulus) {
  long value = 0, pk = 1;
  for (Elem x : w.coords) {
    long digit = std::stol(w.ring.format(x));
    value = (value + pk * teichmuller_integer(digit, w.p, modulus)) % modulus;
    pk *= w.p;
  }
  return value;
}

RobbaElement teich(unsigned p, const mpq_class& e, unsigned k = 0) {
  return RobbaElement::teichmuller(PerfectSeries::monomial(p, e), k);
}

}  // namespace

TEST_CASE("Witt arithmetic examples") {
  auto F2 = ring("GF(2)");
  auto one0 = witt_vector(F2, {1, 0});
  CHECK(witt_arith(WittOp::Add, one0, one0) == witt_vector(F2, {0, 1}));
  CHECK(witt_arith(WittOp::Mul, one0, one0) == one0);
  auto a = witt_vector(F2, {1, 1});
  CHECK(witt_arith(WittOp::Add, a, witt_zero(F2, 2)) == a);
  CHECK(witt_from_integer(F2, 2, 2) == witt_vector(F2, {0, 1}));
  CHECK(witt_from_integer(F2, 2, 3) == witt_vector(F2, {1, 1}));
  CHECK(witt_vector(F2, {1, 0}).to_string() == "(1, 0)");
  CHECK(verschiebung(one0) == witt_vector(F2, {0, 1, 0}));

  CHECK_THROWS_AS(witt_vector(ring("Zmod(4)"), {1}), DomainMismatch);
  CHECK_THROWS_AS(witt_vector(F2, {0, 0, 0, 0, 0}), InvalidArgument);
  CHECK_THROWS_AS(frobenius_witt(witt_vector(F2, {1})), InvalidArgument);
  CHECK_THROWS_AS(witt_arith(WittOp::Add, one0, witt_vector(F2, {1})), DomainMismatch);
}

TEST_CASE("W_n(F_p) is Z/p^n") {
  struct Case {
    const char* spec;
    unsigned n;
    long modulus;
  };
  for (Case c : {Case{"GF(2)", 2, 4}, Case{"GF(2)", 3, 8}, Case{"GF(3)", 2, 9}, Case{"GF(5)", 2, 25}}) {
    auto R = ring(c.spec);
    auto all = all_vectors(R, c.n);
    std::set<long> images;
    for (const auto& x : all) images.insert(to_integer(x, c.modulus));
    CHECK(images.size() == all.size());
    std::size_t mismatches = 0;
    for (const auto& x : all)
      for (const auto& y : all) {
        if (to_integer(witt_arith(WittOp::Add, x, y), c.modulus) != (to_integer(x, c.modulus) + to_integer(y, c.modulus)) % c.modulus)
          ++mismatches;
        if (to_integer(witt_arith(WittOp::Mul, x, y), c.modulus) != (to_integer(x, c.modulus) * to_integer(y, c.modulus)) % c.modulus)
          ++mismatches;
      }
    CAPTURE(c.spec);
    CHECK(mismatches == 0);
  }
}

TEST_CASE("Frobenius and Verschiebung") {
  auto F2 = ring("GF(2)");
  for (const auto& a : all_vectors(F2, 2)) CHECK(frobenius_witt(verschiebung(a)) == times_p(a));

  std::mt19937 rng(7);
  for (const char* spec : {"GF(2)", "GF(2,2)", "Quot(GF(2),[x],[x^2])", "GF(3)"}) {
    auto R = ring(spec);
    unsigned n = R.size() > 2 ? 2 : 3;
    for (int trial = 0; trial < (R.size() == 4 ? 100 : 30); ++trial) {
      auto a = random_vector(R, n, rng);
      auto b = random_vector(R, n + 1, rng);
      CAPTURE(spec);
      CHECK(frobenius_witt(verschiebung(a)) == times_p(a));
      // projection formula V(a) b = V(a F(b))
      CHECK(witt_arith(WittOp::Mul, verschiebung(a), b) == verschiebung(witt_arith(WittOp::Mul, a, frobenius_witt(b))));
    }
  }

  for (unsigned trial = 0; trial < 100; ++trial) {
    auto a = random_vector(F2, 3, rng);
    CHECK(frobenius_witt(verschiebung(a)) == times_p(a));
  }

  auto F4 = ring("GF(2,2)");
  for (Elem c = 0; c < F4.size(); ++c) CHECK(frobenius_witt(teichmuller(F4, 3, c)) == teichmuller(F4, 2, F4.pow(c, 2)));
}

TEST_CASE("Witt arithmetic does not depend on the lift") {
  std::mt19937 rng(11);
  for (const char* spec : {"GF(2,2)", "Quot(GF(2),[x,y],[x^2,x*y,y^2])", "Prod(GF(2),GF(3))", "GF(3,2)"}) {
    auto R = ring(spec);
    if (R.characteristic() != 2 && R.characteristic() != 3) continue;
    for (int trial = 0; trial < 10; ++trial) {
      auto a = random_vector(R, 2, rng), b = random_vector(R, 2, rng);
      for (WittOp op : {WittOp::Add, WittOp::Mul}) {
        auto plain = witt_arith(op, a, b);
        CHECK(plain == witt_arith(op, a, b, 1000 + trial));
        CHECK(ghost_consistent(op, a, b, plain));
      }
    }
  }
  auto F2 = ring("GF(2)");
  auto one0 = witt_vector(F2, {1, 0});
  CHECK_FALSE(ghost_consistent(WittOp::Add, one0, one0, witt_vector(F2, {0, 0})));
}

TEST_CASE("tilt") {
  auto F4 = tilt(ring("GF(2,2)"));
  CHECK(F4.ring.spec() == "GF(2,2)");
  CHECK(F4.stabilization_depth == 0);

  auto dual = ring("Quot(GF(2),[t],[t^2])");
  auto td = tilt(dual);
  CHECK(td.ring.spec() == "GF(2)");
  CHECK(td.stabilization_depth == 1);

  auto prod = tilt(ring("Prod(GF(2,2),GF(2))"));
  CHECK(prod.ring.spec() == "Prod(GF(2),GF(2,2))");

  for (const char* spec : {"GF(2,2)", "Quot(GF(2),[t],[t^2])", "Prod(GF(2),GF(2,2))", "Quot(GF(2),[x],[x^3 + x + 1])",
                           "Quot(GF(2),[x],[x^2 + x])", "Quot(GF(3),[x],[x^3])", "Quot(GF(2),[x,y],[x^2 + x, y^2])"}) {
    auto R = ring(spec);
    auto t = tilt(R, 5);
    CAPTURE(spec);
    // the perfect subring is the image of a high Frobenius power
    std::set<Elem> deep;
    for (Elem z = 0; z < R.size(); ++z) deep.insert(R.pow(z, static_cast<unsigned long>(std::pow(R.characteristic(), 12))));
    CHECK(t.ring.size() == deep.size());
    // embedding is a ring map and the projections form a compatible system
    for (Elem a = 0; a < t.ring.size(); ++a) {
      for (Elem b = 0; b < t.ring.size(); ++b) {
        CHECK(t.embedding[t.ring.add(a, b)] == R.add(t.embedding[a], t.embedding[b]));
        CHECK(t.embedding[t.ring.mul(a, b)] == R.mul(t.embedding[a], t.embedding[b]));
      }
      auto seq = t.sequence(a);
      for (std::size_t k = 0; k + 1 < seq.size(); ++k) CHECK(seq[k] == R.pow(seq[k + 1], R.characteristic()));
    }
    CHECK(t.embedding[t.ring.one()] == R.one());
    // idempotence
    CHECK(tilt(t.ring).ring.spec() == t.ring.spec());
  }
  CHECK_THROWS_AS(tilt(ring("Zmod(4)")), DomainMismatch);
}

TEST_CASE("perfect series and Robba literals") {
  auto half = PerfectSeries::monomial(2, mpq_class(1, 2));
  CHECK(half.to_string() == "tbar^(1/2)");
  CHECK(half.norm().to_string() == "2^-1/2");
  CHECK((half * half).to_string() == "tbar");
  CHECK((half + half).is_zero());
  CHECK(half.frobenius().to_string() == "tbar");
  CHECK(PerfectSeries::monomial(2, 3).root(1).to_string() == "tbar^(3/2)");
  CHECK_THROWS_AS(PerfectSeries::monomial(2, mpq_class(1, 3)), InvalidArgument);

  auto f = RobbaElement::parse("p^0*[tbar^(1/2)] + p^1*[tbar^3]", 2);
  CHECK(f.to_string() == "p^0*[tbar^(1/2)] + p^1*[tbar^3]");
  CHECK(RobbaElement::parse(f.to_string(), 2) == f);
  CHECK(RobbaElement::parse("2", 2) == RobbaElement::parse("p^1*[1]", 2));
  CHECK((teich(2, 0) + teich(2, 0)).to_string() == "p^1*[1]");
  CHECK(RobbaElement::parse("0", 2).is_zero());
  auto sum = RobbaElement::parse("[tbar + tbar^2] + [tbar]", 2);
  CHECK(sum.digits()[0].to_string() == "tbar^2");
  CHECK_FALSE(sum == RobbaElement::parse("[tbar^2]", 2));
  CHECK_THROWS_AS(RobbaElement::parse("p^1*[tbar^(1/3)]", 2), ParseError);
  CHECK_THROWS_AS(RobbaElement::parse("p^1*[tbar", 2), ParseError);
}

TEST_CASE("Robba norm examples") {
  auto t = teich(2, 1);
  CHECK(robba_norm(t, 1) == NormValue::power(2, -1));
  auto f = RobbaElement::parse("2 + [tbar]", 2);
  CHECK(robba_norm(f, 2) == NormValue::power(2, -1));
  CHECK(robba_norm(RobbaElement::zero(2), 1).is_zero());
  CHECK(interval_norm(f, 1, 2) == NormValue::power(2, -1));
  auto g = RobbaElement::parse("p^1*[tbar^(1/2)]", 2);
  CHECK(interval_norm(g, 1, 2).to_string() == "2^-3/2");
  CHECK(interval_norm(g, 2, 2) == robba_norm(g, 2));
  CHECK_THROWS_AS(interval_norm(g, 2, 1), InvalidArgument);

  CHECK(t.phi() == teich(2, 2));
  CHECK(robba_norm(t.phi(), 1) == NormValue::power(2, -2));
  CHECK(robba_norm(t.phi(), 1) == robba_norm(t, 2));
  CHECK(RobbaElement::from_integer(2, 2).phi() == RobbaElement::from_integer(2, 2));
  CHECK(t.phi().phi() == teich(2, 4));

  // mixed bases at p = 3
  auto h = RobbaElement::parse("p^1*[tbar^(1/3)]", 3);
  CHECK(robba_norm(h, 1).to_string() == "2^-1/3*3^-1");
}

TEST_CASE("Robba norm properties") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(-4, 8), den_exp(0, 2), digit_count(1, 2), which(0, 1);
  auto random_element = [&](unsigned p) {
    RobbaElement f = RobbaElement::zero(p);
    for (unsigned k = 0; k < 2; ++k) {
      if (k == 1 && which(rng) == 0) continue;
      PerfectSeries s(p);
      int terms = digit_count(rng);
      for (int i = 0; i < terms; ++i) {
        mpq_class e(num(rng), static_cast<unsigned long>(std::pow(p, den_exp(rng))));
        e.canonicalize();
        s = s + PerfectSeries::monomial(p, e);
      }
      if (s.is_zero()) s = PerfectSeries::monomial(p, 1);
      f = f + RobbaElement::teichmuller(s, k);
    }
    return f;
  };
  const std::vector<mpq_class> radii{mpq_class(1, 2), mpq_class(1), mpq_class(2)};
  std::size_t tested = 0;
  for (unsigned p : {2u, 3u}) {
    for (int trial = 0; trial < 30; ++trial) {
      auto f = random_element(p), g = random_element(p);
      auto fg = f * g;
      if (fg.flagged()) continue;
      ++tested;
      for (const auto& r : radii) {
        CHECK(robba_norm(fg, r) == robba_norm(f, r) * robba_norm(g, r));
        CHECK(robba_norm(f.phi(), r) == robba_norm(f, r * p));
        CHECK(interval_norm(f, r, r) == robba_norm(f, r));
        CHECK(robba_norm(f + g, r) <= max(robba_norm(f, r), robba_norm(g, r)));
      }
      // the interval norm dominates the norm at interior points (log-convexity)
      for (int i = 1; i < 4; ++i) {
        mpq_class mid = mpq_class(1, 2) + mpq_class(3 * i, 8);
        CHECK(robba_norm(f, mid) <= interval_norm(f, mpq_class(1, 2), 2));
      }
    }
  }
  CHECK(tested >= 50);
}
