#include <doctest.h>

#include <map>

#include "adic/error.hpp"
#include "adic/infinitesimal.hpp"
#include "adic/localization.hpp"
#include "adic/text.hpp"

using namespace adic;

namespace {

Presentation over(Coefficients c, std::vector<std::string> base_vars = {}) { return Presentation::tate(c, std::move(base_vars)); }

Presentation quot(const Presentation& base, std::vector<std::string> vars, const std::vector<std::string>& rels) {
  std::vector<std::string> names = base.all_vars();
  names.insert(names.end(), vars.begin(), vars.end());
  std::vector<Poly> polys;
  for (const auto& r : rels) polys.push_back(parse_poly(r, names, base.field()));
  return Presentation::quotient(base, std::move(vars), polys);
}

const Coefficients F2 = Coefficients::finite_field(2);
const Coefficients ZZ = Coefficients::integers();

FiniteRing ring(const char* spec) { return FiniteRing::parse(spec); }

std::set<std::string> formatted(const PointSet& ps) {
  std::set<std::string> out;
  for (std::size_t k = 0; k < ps.size(); ++k) out.insert(ps.format(k));
  return out;
}

/// Every divided-power structure with exponent e on I found by trying all maps gamma_2..gamma_e: I -> I.
std::size_t brute_force_pd_count(const FiniteRing& R, const std::vector<Elem>& ideal) {
  unsigned e = R.nilpotency_exponent(ideal);
  PDStructure s{R, ideal, e, std::vector<std::vector<Elem>>(e + 1, std::vector<Elem>(ideal.size()))};
  for (std::size_t k = 0; k < ideal.size(); ++k) {
    s.gamma[0][k] = R.one();
    s.gamma[1][k] = ideal[k];
  }
  std::size_t slots = (e - 1) * ideal.size();
  std::vector<std::size_t> digit(slots, 0);
  std::size_t count = 0;
  while (true) {
    for (std::size_t t = 0; t < slots; ++t) s.gamma[2 + t / ideal.size()][t % ideal.size()] = ideal[digit[t]];
    if (pd_axiom_violations(s) == 0) ++count;
    std::size_t t = 0;
    while (t < slots && ++digit[t] == ideal.size()) digit[t++] = 0;
    if (t == slots) break;
  }
  return count;
}

}  // namespace

TEST_CASE("point sets") {
  auto A = over(F2);
  auto idem = quot(A, {"T"}, {"T^2 - T"});
  auto p1 = point_set(idem, ring("GF(2)"));
  CHECK(p1.size() == 2);
  CHECK(formatted(p1) == std::set<std::string>{"{T -> 0}", "{T -> 1}"});

  auto dual = quot(A, {"T"}, {"T^2"});
  CHECK(point_set(dual, ring("GF(2)")).size() == 1);
  auto eps = ring("Quot(GF(2),[e],[e^2])");
  auto p3 = point_set(dual, eps);
  CHECK(formatted(p3) == std::set<std::string>{"{T -> 0}", "{T -> e}"});

  CHECK_THROWS_AS(point_set(dual, ring("Zmod(4)")), DomainMismatch);
  auto many = quot(A, {"a", "b", "c", "d", "e"}, {});
  CHECK_THROWS_AS(point_set(many, ring("GF(2,6)")), BoundExceeded);
}

TEST_CASE("de Rham point sets") {
  auto A = over(F2);
  auto dual = quot(A, {"T"}, {"T^2"});
  auto eps = ring("Quot(GF(2),[e],[e^2])");
  CHECK(de_rham_point_set(dual, eps).size() == 1);

  auto idemZ = quot(over(ZZ), {"T"}, {"T^2 - T"});
  auto z4 = ring("Zmod(4)");
  CHECK(de_rham_point_set(idemZ, z4).size() == 2);
  CHECK(point_set(idemZ, z4).size() == 2);

  for (const char* spec : {"GF(2)", "GF(2,2)", "Prod(GF(2),GF(2))", "GF(3)"}) {
    FiniteRing R = ring(spec);
    auto pres = R.characteristic() == 2 ? dual : quot(over(ZZ), {"T"}, {"T^3 - T"});
    CHECK(de_rham_point_set(pres, R).points == point_set(pres, R).points);
  }
}

TEST_CASE("nilpotent ideals") {
  CHECK(enumerate_nilpotent_ideals(ring("Zmod(4)")).size() == 2);
  CHECK(enumerate_nilpotent_ideals(ring("Prod(GF(2),GF(2))")).size() == 1);
  auto chain = enumerate_nilpotent_ideals(ring("Quot(GF(2),[x],[x^4])"));
  REQUIRE(chain.size() == 4);
  std::vector<std::size_t> sizes, exps;
  for (const auto& I : chain) {
    sizes.push_back(I.elements.size());
    exps.push_back(I.exponent);
  }
  CHECK(sizes == std::vector<std::size_t>{1, 2, 4, 8});
  CHECK(exps == std::vector<std::size_t>{1, 2, 2, 4});
  // (x, y)^2 = 0: every subspace of the maximal ideal is an ideal
  CHECK(enumerate_nilpotent_ideals(ring("Quot(GF(2),[x,y],[x^2,x*y,y^2])")).size() == 5);
}

TEST_CASE("PD structures") {
  auto z4 = ring("Zmod(4)");
  auto two = z4.parse_element("2");
  auto pds = enumerate_pd_structures(z4, {0, two});
  REQUIRE_FALSE(pds.empty());
  bool canonical = false;
  for (const auto& s : pds) {
    CHECK(pd_axiom_violations(s) == 0);
    if (s.apply(2, two) == two) canonical = true;
  }
  CHECK(canonical);

  CHECK(enumerate_pd_structures(z4, {0}).size() == 1);

  auto eps = ring("Quot(GF(2),[e],[e^2])");
  auto pe = enumerate_pd_structures(eps, {0, eps.parse_element("e")});
  for (const auto& s : pe) CHECK(pd_axiom_violations(s) == 0);

  // the pruned search finds exactly the structures an unpruned search finds
  for (const char* spec : {"Zmod(4)", "Zmod(8)", "Zmod(9)", "Quot(GF(2),[e],[e^2])", "Quot(GF(2),[x],[x^3])", "Zmod(27)"}) {
    FiniteRing R = ring(spec);
    for (const auto& I : enumerate_nilpotent_ideals(R)) {
      if (I.elements.size() > 9 || (R.nilpotency_exponent(I.elements) - 1) * I.elements.size() > 9) continue;
      CAPTURE(spec);
      CAPTURE(I.elements.size());
      CHECK(enumerate_pd_structures(R, I.elements).size() == brute_force_pd_count(R, I.elements));
    }
  }

  // x^2 = 2 gamma_2(x) has no solution in F_2[x]/(x^3)
  auto cube = ring("Quot(GF(2),[x],[x^3])");
  auto xi = cube.ideal_generated({cube.parse_element("x")});
  CHECK(enumerate_pd_structures(cube, xi).empty());
}

TEST_CASE("crystalline points") {
  auto idemZ = quot(over(ZZ), {"T"}, {"T^2 - T"});
  auto c = crystalline_point_set(idemZ, ring("Zmod(4)"));
  CHECK(c.classes == 2);
  CHECK(c.index_pairs >= 2);
  CHECK(c.class_of.size() == 2);

  auto dual = quot(over(F2), {"T"}, {"T^2"});
  for (const char* spec : {"GF(2)", "GF(2,2)", "Prod(GF(2),GF(2))"}) {
    FiniteRing R = ring(spec);
    CHECK(crystalline_point_set(dual, R).classes == point_set(dual, R).size());
  }
}

TEST_CASE("lifting classification examples") {
  std::vector<FiniteRing> zcorpus{ring("GF(2)"), ring("Zmod(4)"), ring("Quot(GF(2),[e],[e^2])"), ring("Quot(GF(2),[x],[x^4])")};
  auto idemZ = quot(over(ZZ), {"T"}, {"T^2 - T"});
  CHECK(classify_lifting(idemZ, zcorpus, LiftingMode::DeRham).verdict == Verdict::Etale);
  CHECK(classify_lifting(idemZ, zcorpus, LiftingMode::Crystalline).verdict == Verdict::Etale);

  std::vector<FiniteRing> fcorpus{ring("GF(2)"), ring("Quot(GF(2),[e],[e^2])"), ring("Quot(GF(2),[x],[x^4])")};
  auto dual = quot(over(F2), {"T"}, {"T^2"});
  auto none = classify_lifting(dual, fcorpus, LiftingMode::DeRham);
  CHECK(none.verdict == Verdict::None);
  CHECK(none.evidence[1].map == "surjective");
  CHECK(none.evidence[2].map == "neither");
  CHECK(none.evidence[1].points == 2);
  CHECK(none.evidence[1].reduced == 1);

  for (const auto& A : {over(F2), over(ZZ), over(F2, {"S"})}) {
    auto identity = quot(A, {}, {});
    auto rings = A.coefficients().kind == Coefficients::Kind::Integers ? zcorpus : fcorpus;
    CHECK(classify_lifting(identity, rings, LiftingMode::DeRham).verdict == Verdict::Etale);
    CHECK(classify_lifting(identity, rings, LiftingMode::Crystalline).verdict == Verdict::Etale);
  }

  auto free = quot(over(F2), {"T"}, {});
  CHECK(classify_lifting(free, fcorpus, LiftingMode::DeRham).verdict == Verdict::Lisse);
  auto closed = quot(over(F2, {"S"}), {}, {"S"});
  CHECK(classify_lifting(closed, fcorpus, LiftingMode::DeRham).verdict == Verdict::NonRamifie);

  auto mismatch = classify_lifting(dual, {ring("Zmod(4)")}, LiftingMode::DeRham);
  CHECK(mismatch.verdict == Verdict::Inconclusive);
  CHECK(mismatch.evidence[0].map == "inconclusive");
}

TEST_CASE("lifting agrees with the cotangent classifier over F_2") {
  auto A = over(F2);
  auto AS = over(F2, {"S"});
  std::vector<Presentation> corpus{
      quot(A, {"T"}, {"T^2 + T + 1"}), quot(A, {"T"}, {"T^2 - T"}),     quot(A, {"T"}, {"T^2"}),
      quot(A, {"T"}, {}),              quot(A, {"T"}, {"T"}),           quot(AS, {"T"}, {"T^2 + T + S"}),
      quot(AS, {}, {"S"}),             quot(AS, {"T"}, {"T^2 - S"}),    quot(A, {"T", "U"}, {"T*U - 1"}),
      quot(AS, {"T"}, {"S*T - 1"}),    quot(A, {"T"}, {"T^4 + T"}),     quot(AS, {"T"}, {})};
  auto rings = default_test_rings(2, true);
  for (const auto& pres : corpus) {
    CAPTURE(pres.to_string());
    auto lift = classify_lifting(pres, rings, LiftingMode::DeRham);
    auto cls = classify_morphism(pres);
    CHECK((lift.verdict == Verdict::Etale) == (cls.verdict == Verdict::Etale));
    if (cls.lisse) CHECK(lift.lisse);
    if (cls.non_ramifie) CHECK(lift.non_ramifie);
    if (lift.verdict == Verdict::Etale) CHECK(classify_lifting(pres, rings, LiftingMode::Crystalline).etale);
  }
}

TEST_CASE("Mayer-Vietoris on point sets of a covering") {
  auto B = Presentation::tate(Coefficients::padic(2, 8), {"T"});
  for (const char* g : {"1", "1 - T", "T + 1 - T^2"}) {
    auto cov = binary_covering(B, B.parse("T"), B.parse(g));
    auto cert = covering_check(B, cov.f, cov.g);
    REQUIRE(cert.status == CoveringStatus::Covering);
    for (const char* spec : {"GF(2)", "GF(2,2)", "Zmod(4)", "Zmod(8)", "Quot(GF(2),[e],[e^2])", "Quot(GF(2),[x],[x^4])"}) {
      FiniteRing R = ring(spec);
      CAPTURE(g);
      CAPTURE(spec);
      std::size_t x = point_set(B, R).size();
      std::size_t x1 = point_set(cov.first, R).size(), x2 = point_set(cov.second, R).size();
      std::size_t x12 = point_set(cov.joint, R).size();
      CHECK(x + x12 == x1 + x2);
    }
  }
  // f = g: a unit constant makes u = 1 and the point sets agree with B's
  auto same = rational_localization(B, B.parse("3"), B.parse("3")).pres;
  for (const char* spec : {"GF(2)", "Zmod(4)", "Quot(GF(2),[e],[e^2])"}) CHECK(point_set(same, ring(spec)).size() == point_set(B, ring(spec)).size());
}
