#include <doctest.h>

#include <random>

#include "adic/linalg.hpp"

using namespace adic;

TEST_CASE("rank and kernel over Q and F_p") {
  Matrix m(2, 3);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(0, 2) = 3;
  m.at(1, 0) = 2;
  m.at(1, 1) = 4;
  m.at(1, 2) = 6;
  CHECK(rank(m, Field::rationals()) == 1);
  auto k = kernel(m, Field::rationals());
  CHECK(k.size() == 2);
  for (const Vec& v : k) CHECK(m.apply(v, Field::rationals()) == Vec{0, 0});
  Matrix n(2, 2);
  n.at(0, 0) = 1;
  n.at(0, 1) = 1;
  n.at(1, 0) = 1;
  n.at(1, 1) = 3;
  CHECK(rank(n, Field::rationals()) == 2);
  Matrix n2 = n;
  n2.at(1, 1) = 1;
  CHECK(rank(n2, Field::prime(2)) == 1);
}

TEST_CASE("solve") {
  Matrix m(2, 2);
  m.at(0, 0) = 2;
  m.at(1, 1) = 3;
  auto x = solve(m, {1, 1}, Field::rationals());
  REQUIRE(x);
  CHECK((*x)[0] == mpq_class(1, 2));
  Matrix z(1, 1);
  CHECK_FALSE(solve(z, {1}, Field::rationals()));
}

TEST_CASE("integral span over Z_(p)") {
  // 1 is not in the Z_(2)-span of 2, but is in the Z_(3)-span
  CHECK_FALSE(in_integral_span({{2}}, {1}, 2));
  CHECK(in_integral_span({{2}}, {1}, 3));
  CHECK(in_integral_span({{2, 1}, {0, 1}}, {1, 0}, 3));
  CHECK_FALSE(in_integral_span({{2, 1}, {0, 1}}, {1, 0}, 2));
  CHECK(in_integral_span({{4, 1}, {2, 1}}, {2, 0}, 2));  // difference
  CHECK(in_integral_span({}, {0, 0}, 2));
}

TEST_CASE("integral span agrees with brute force on small lattices") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> entry(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec> gens(2, Vec(2));
    for (auto& g : gens)
      for (auto& x : g) x = entry(rng);
    // targets a*g0 + b*g1 with a, b in (1/3)Z, which are 2-integral
    int a = entry(rng), b = entry(rng);
    Vec t{mpq_class(a, 3) * gens[0][0] + mpq_class(b, 3) * gens[1][0], mpq_class(a, 3) * gens[0][1] + mpq_class(b, 3) * gens[1][1]};
    CHECK(in_integral_span(gens, t, 2));
    Vec half{t[0] + gens[0][0] / 2, t[1] + gens[0][1] / 2};
    mpq_class det = gens[0][0] * gens[1][1] - gens[0][1] * gens[1][0];
    if (det != 0 && (det.get_num() % 2 != 0)) CHECK_FALSE(in_integral_span(gens, half, 2));
  }
}
