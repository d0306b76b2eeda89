#include <random>

#include <doctest.h>

#include "adic/padic.hpp"
#include "adic/error.hpp"
#include "adic/text.hpp"

using namespace adic;

TEST_CASE("padic addition of 2 and 2") {
  auto two = PadicNumber::from_integer(2, 8, 2);
  auto s = two + two;
  CHECK(s.valuation() == 2);
  CHECK(s.unit() == 1);
  CHECK(s.to_rational() == 4);
}

TEST_CASE("padic multiplication by one is the identity") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> num(-500, 500), den(1, 60);
  for (int i = 0; i < 20; ++i) {
    long n = num(rng);
    long d = den(rng);
    if (d % 2 == 0) ++d;
    if (n == 0) n = 1;
    auto x = PadicNumber::from_rational(2, 8, mpq_class(n, d));
    CHECK(x * PadicNumber::from_integer(2, 8, 1) == x);
  }
}

TEST_CASE("padic division of 1 by 3") {
  // independent check: brute-force search for the inverse of 3 modulo 16
  long inverse = 0;
  for (long k = 1; k < 16; ++k)
    if (3 * k % 16 == 1) inverse = k;
  REQUIRE(inverse == 11);
  auto q = PadicNumber::approximate(2, 4, 0, 1) / PadicNumber::approximate(2, 4, 0, 3);
  CHECK(q.valuation() == 0);
  CHECK(q.unit() == inverse);
  auto exact = PadicNumber::from_integer(2, 4, 1) / PadicNumber::from_integer(2, 4, 3);
  CHECK(exact.unit() == inverse);
}

TEST_CASE("padic error conditions") {
  auto a = PadicNumber::from_integer(2, 8, 3);
  auto b = PadicNumber::from_integer(3, 8, 3);
  CHECK_THROWS_AS(a + b, DomainMismatch);
  CHECK_THROWS_AS(a / PadicNumber::zero(2, 8), DivisionByZero);
  auto x = PadicNumber::approximate(2, 4, 0, 5);
  auto y = PadicNumber::approximate(2, 4, 0, 11);  // 5 + 11 = 16 = 0 mod 2^4
  CHECK_THROWS_AS(x + y, PrecisionLoss);
  // exact values never lose precision
  auto e = PadicNumber::from_integer(2, 4, 5) + PadicNumber::from_integer(2, 4, 11);
  CHECK(e.valuation() == 4);
  CHECK((PadicNumber::from_integer(2, 4, 5) - PadicNumber::from_integer(2, 4, 5)).is_zero());
}

TEST_CASE("padic norms") {
  CHECK(PadicNumber::from_integer(2, 8, 12).norm() == NormValue::power(2, mpq_class(-2)));
  CHECK(PadicNumber::zero(2, 8).norm().is_zero());
  CHECK(PadicNumber::from_rational(3, 8, mpq_class(1, 9)).norm() == NormValue::power(3, 2));
  CHECK(NormValue::power(2, mpq_class(-3, 2)).to_string() == "2^-3/2");
  CHECK(NormValue::power(2, 0).to_string() == "1");
}

TEST_CASE("padic ultrametric and multiplicativity properties") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> val(-3, 5);
  for (unsigned p : {2u, 3u, 5u}) {
    std::uniform_int_distribution<long> unit(1, 10000);
    for (int i = 0; i < 200; ++i) {
      auto draw = [&] {
        long u = unit(rng);
        while (u % p == 0) ++u;
        return PadicNumber::approximate(p, 6, val(rng), u);
      };
      auto a = draw();
      auto b = draw();
      try {
        auto s = a + b;
        CHECK(s.norm() <= max(a.norm(), b.norm()));
        if (a.norm() != b.norm()) CHECK(s.norm() == max(a.norm(), b.norm()));
      } catch (const PrecisionLoss&) {
      }
      CHECK((a * b).norm() == a.norm() * b.norm());
      auto q = a / b;
      CHECK(q * b == a);
    }
  }
}

TEST_CASE("tokenizer and polynomial reader") {
  std::vector<std::string> names{"T", "u"};
  auto f = parse_poly("2*u - T^2 + (T - 1)/3", names, Field::rationals());
  CHECK(f.to_string(names) == "-T^2 + 1/3*T + 2*u - 1/3");
  CHECK_THROWS_AS(parse_poly("u + C", names, Field::rationals()), ParseError);
  try {
    parse_poly("u +\n  C", names, Field::rationals());
  } catch (const ParseError& e) {
    CHECK(e.pos().line == 2);
    CHECK(e.pos().column == 3);
  }
  auto toks = tokenize("classify-lifting B; glue-check C; x-y");
  CHECK(toks[0].text == "classify-lifting");
  CHECK(toks[3].text == "glue-check");
  CHECK(toks[6].text == "x");
}
