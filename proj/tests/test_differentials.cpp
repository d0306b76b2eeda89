#include <doctest.h>

#include <random>

#include "adic/differentials.hpp"
#include "adic/error.hpp"
#include "adic/text.hpp"

using namespace adic;

namespace {

Presentation tate(std::vector<std::string> vars, Coefficients c = Coefficients::padic(2, 8)) {
  return Presentation::tate(c, std::move(vars));
}

Presentation quot(const Presentation& base, std::vector<std::string> vars, const std::vector<std::string>& rels) {
  std::vector<std::string> names = base.all_vars();
  names.insert(names.end(), vars.begin(), vars.end());
  std::vector<Poly> polys;
  for (const auto& r : rels) polys.push_back(parse_poly(r, names, base.field()));
  return Presentation::quotient(base, std::move(vars), polys);
}

Verdict verdict(const Presentation& p) { return classify_morphism(p).verdict; }

bool is_zero(const ModVec& v) {
  for (const Poly& c : v)
    if (!c.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("Kahler differentials examples") {
  auto A = tate({});
  auto free1 = quot(A, {"T"}, {});
  auto km = kahler_differentials(free1);
  CHECK_FALSE(km.zero);
  CHECK(km.fitting_rank == 1);
  CHECK(km.locally_free);

  auto idem = quot(A, {"T"}, {"T^2 - T"});
  // (2T - 1)^2 = 1 mod (T^2 - T)
  CHECK(idem.normal_form(idem.parse("(2*T - 1)^2")) == idem.one());
  CHECK(kahler_differentials(idem).zero);

  auto dual = quot(A, {"T"}, {"T^2"});
  auto kd = kahler_differentials(dual);
  CHECK_FALSE(kd.zero);
  CHECK_FALSE(kd.locally_free);
}

TEST_CASE("naive cotangent complex examples") {
  auto A = tate({});
  auto free1 = quot(A, {"T"}, {});
  auto c0 = naive_cotangent_complex(free1);
  CHECK(c0.h_minus1_zero);
  CHECK_FALSE(c0.h0_zero);

  auto AT = tate({"T"});
  auto laurent = quot(AT, {"u"}, {"u - T^2"});
  auto c1 = naive_cotangent_complex(laurent);
  CHECK(c1.h_minus1_zero);
  CHECK(c1.h0_zero);

  auto dual = quot(A, {"T"}, {"T^2"});
  auto c2 = naive_cotangent_complex(dual);
  CHECK_FALSE(c2.h_minus1_zero);
  CHECK_FALSE(c2.h0_zero);
  // T*[T^2] lies in the kernel of d since 2T * T = 2T^2 = 0 in B
  REQUIRE(c2.kernel_generators.size() == 1);
  CHECK(c2.kernel_generators[0][0] == dual.parse("T"));
}

TEST_CASE("classifier examples") {
  auto AT = tate({"T"});
  CHECK(verdict(quot(AT, {"u"}, {"2*u - T"})) == Verdict::Etale);
  auto lisse = classify_morphism(quot(AT, {"X"}, {}));
  CHECK(lisse.verdict == Verdict::Lisse);
  CHECK_FALSE(lisse.etale);
  CHECK_FALSE(lisse.non_ramifie);
  auto A = tate({});
  CHECK(verdict(quot(A, {"T"}, {"T^2"})) == Verdict::None);
  CHECK(verdict(quot(A, {"T"}, {"T^2 - T"})) == Verdict::Etale);
  CHECK(verdict(quot(A, {"T"}, {"T^2 + T + 1"})) == Verdict::Etale);
  CHECK(verdict(quot(tate({}, Coefficients::padic(5, 8)), {"T"}, {"T^3 - T"})) == Verdict::Etale);
  CHECK(verdict(quot(AT, {"u"}, {"T*u - 1"})) == Verdict::Etale);
  // closed immersion A -> A/(T): unramified, not etale
  CHECK(verdict(quot(AT, {}, {"T"})) == Verdict::NonRamifie);
  // Frobenius-type map in characteristic p: T -> T^2 over F_2 is ramified everywhere
  auto F2 = tate({"S"}, Coefficients::finite_field(2));
  CHECK(verdict(quot(F2, {"T"}, {"T^2 - S"})) == Verdict::None);
  CHECK(verdict(quot(F2, {"T"}, {"T^2 + T + S"})) == Verdict::Etale);
  CHECK_THROWS_AS(classify_morphism(quot(tate({}, Coefficients::integers()), {"T"}, {"T^2 - T"})), Unsupported);
}

TEST_CASE("covering conjunction") {
  auto AT = tate({"T"});
  auto B = quot(AT, {"X"}, {});
  ClassifyOptions opts;
  opts.pieces = {quot(AT, {"u"}, {"2*u - T"}), quot(AT, {"v"}, {"T*v - 2"})};
  auto c = classify_morphism(B, opts);
  CHECK(c.verdict == Verdict::Etale);
  CHECK(c.pieces == 2);
}

TEST_CASE("de Rham complex examples") {
  auto A = tate({});
  auto one = de_rham_complex(quot(A, {"T"}, {}), 2);
  REQUIRE(one.pieces.size() == 3);
  CHECK_FALSE(one.pieces[0].zero);
  CHECK_FALSE(one.pieces[1].zero);
  CHECK(one.pieces[1].basis.size() == 1);
  CHECK(one.pieces[2].zero);
  CHECK(one.violations == 0);

  auto xy = quot(A, {"X", "Y"}, {});
  auto dr = de_rham_complex(xy, 2);
  CHECK(dr.pieces[2].basis.size() == 1);
  CHECK_FALSE(dr.pieces[2].zero);
  ModVec xdy(2, xy.zero());
  xdy[1] = xy.parse("X");  // X dY
  ModVec d = dr.differential(1, xdy);
  CHECK(d[0] == xy.one());
  CHECK(dr.basis_name(2, 0) == "dX^dY");
  CHECK(dr.violations == 0);

  auto idem = de_rham_complex(quot(A, {"T"}, {"T^2 - T"}), 1);
  CHECK_FALSE(idem.pieces[0].zero);
  CHECK(idem.pieces[1].zero);
}

TEST_CASE("d o d vanishes on several presentations") {
  auto AT = tate({"T"});
  for (auto pres : {quot(AT, {"X", "Y", "Z"}, {"X*Y - T", "Z^2 - X"}), quot(AT, {"u", "v"}, {"2*u - T", "T*v - 2"}),
                    quot(AT, {"X", "Y"}, {"X^2 + Y^2 - 1"})}) {
    auto dr = de_rham_complex(pres.with_degree_cap(4), 3);
    CHECK(dr.checked_generators > 0);
    CHECK(dr.violations == 0);
  }
}

TEST_CASE("integration primitive") {
  std::vector<std::string> names{"T"};
  auto q = Field::rationals();
  auto coeffs = Coefficients::padic(2, 8);
  auto r0 = etale_integration(parse_poly("1", names, q), Poly(q, 0), coeffs);
  CHECK(r0.h == parse_poly("T", names, q));
  auto r1 = etale_integration(parse_poly("T", names, q), Poly::constant(q, 0, 1), coeffs);
  CHECK(r1.h == parse_poly("(T^2 - 1)/2", names, q));
  CHECK(r1.quotient == parse_poly("(T + 1)/2", names, q));
  CHECK(r1.precision_loss);
  CHECK(r1.precision == 7);
  auto f = Poly::constant(q, 0, 3);
  auto r2 = etale_integration(parse_poly("T - 3", names, q), f, coeffs);
  CHECK(r2.h == parse_poly("(T - 3)^2/2", names, q));
  CHECK_THROWS_AS(etale_integration(parse_poly("T", names, Field::rationals()), f, Coefficients::finite_field(2)),
                  Unsupported);
}
