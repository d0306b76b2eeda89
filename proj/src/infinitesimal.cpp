#include "adic/infinitesimal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "adic/error.hpp"

namespace adic {

namespace {

/// A polynomial with coefficients already mapped into R.
struct CompiledPoly {
  std::vector<std::pair<Elem, Monomial>> terms;
  std::size_t last_var = 0;  // highest variable index used, plus one (0 for constants)
};

CompiledPoly compile(const Poly& p, const FiniteRing& R) {
  CompiledPoly c;
  for (const Term& t : p.terms()) {
    auto coeff = R.from_rational(t.coeff);
    if (!coeff) throw DomainMismatch("coefficient " + rational_to_string(t.coeff) + " has no image in " + R.spec());
    if (*coeff == R.zero()) continue;
    c.terms.emplace_back(*coeff, t.mono);
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (t.mono[i]) c.last_var = std::max(c.last_var, i + 1);
  }
  return c;
}

Elem evaluate(const CompiledPoly& c, const std::vector<Elem>& images, const FiniteRing& R) {
  Elem acc = R.zero();
  for (const auto& [coeff, mono] : c.terms) {
    Elem v = coeff;
    for (std::size_t i = 0; i < c.last_var && v != R.zero(); ++i)
      if (mono[i]) v = R.mul(v, R.pow(images[i], mono[i]));
    acc = R.add(acc, v);
  }
  return acc;
}

std::vector<Poly> all_relations(const Presentation& pres) {
  std::vector<Poly> rels = pres.base_relations();
  rels.insert(rels.end(), pres.relations().begin(), pres.relations().end());
  return rels;
}

std::size_t index_in(const std::vector<Elem>& sorted, Elem x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) throw InvalidArgument("element outside the ideal");
  return static_cast<std::size_t>(it - sorted.begin());
}

bool contains_sorted(const std::vector<Elem>& sorted, Elem x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

mpz_class factorial(unsigned n) {
  mpz_class f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

}  // namespace

bool PointSet::contains(const std::vector<Elem>& point) const {
  return std::binary_search(points.begin(), points.end(), point);
}

std::string PointSet::format(std::size_t index) const {
  auto names = pres.all_vars();
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i] + " -> " + ring.format(points[index][i]);
  }
  return out + "}";
}

bool admits_base_map(const Coefficients& coeffs, const FiniteRing& R) {
  unsigned long c = R.characteristic();
  switch (coeffs.kind) {
    case Coefficients::Kind::Integers:
      return true;
    case Coefficients::Kind::FiniteField:
      return c == coeffs.p;
    case Coefficients::Kind::IntegersMod:
      return coeffs.modulus % c == 0;
    case Coefficients::Kind::Padic: {
      if (c < 2) return false;
      while (c % coeffs.p == 0) c /= coeffs.p;
      return c == 1;
    }
  }
  return false;
}

PointSet point_set(const Presentation& pres, const FiniteRing& R) {
  if (!admits_base_map(pres.coefficients(), R))
    throw DomainMismatch("no map from " + pres.coefficients().to_string() + " to " + R.spec());
  std::size_t n = pres.nvars();
  double space = std::pow(static_cast<double>(R.size()), static_cast<double>(n));
  if (space > static_cast<double>(kMaxSearchSpace))
    throw BoundExceeded("search space " + std::to_string(R.size()) + "^" + std::to_string(n) + " exceeds 10^6");

  std::vector<std::vector<CompiledPoly>> checks(n + 1);
  for (const Poly& r : all_relations(pres)) {
    CompiledPoly c = compile(r, R);
    checks[c.last_var].push_back(std::move(c));
  }
  PointSet out{pres, R, {}};
  std::vector<Elem> images(n, 0);
  auto passes = [&](std::size_t level) {
    return std::all_of(checks[level].begin(), checks[level].end(),
                       [&](const CompiledPoly& c) { return evaluate(c, images, R) == R.zero(); });
  };
  if (!passes(0)) return out;
  std::function<void(std::size_t)> search = [&](std::size_t i) {
    if (i == n) {
      out.points.push_back(images);
      return;
    }
    for (Elem x = 0; x < R.size(); ++x) {
      images[i] = x;
      if (passes(i + 1)) search(i + 1);
    }
    images[i] = 0;
  };
  search(0);
  std::sort(out.points.begin(), out.points.end());
  return out;
}

PointSet de_rham_point_set(const Presentation& pres, const FiniteRing& R) {
  return point_set(pres, R.quotient_by(R.nilradical()).ring);
}

std::vector<NilpotentIdeal> enumerate_nilpotent_ideals(const FiniteRing& R) {
  const auto& nil = R.nilradical();
  std::vector<NilpotentIdeal> found;
  std::vector<std::vector<Elem>> seen;
  NilpotentIdeal zero{{R.zero()}, {}, 1};
  found.push_back(zero);
  seen.push_back(zero.elements);
  for (std::size_t k = 0; k < found.size(); ++k) {
    for (Elem x : nil) {
      if (contains_sorted(found[k].elements, x)) continue;
      std::vector<Elem> gens = found[k].generators;
      gens.push_back(x);
      std::vector<Elem> elems = R.ideal_generated(gens);
      if (std::find(seen.begin(), seen.end(), elems) != seen.end()) continue;
      seen.push_back(elems);
      found.push_back({elems, gens, R.nilpotency_exponent(elems)});
    }
  }
  std::sort(found.begin(), found.end(), [](const NilpotentIdeal& a, const NilpotentIdeal& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
    return a.elements < b.elements;
  });
  return found;
}

// ------------------------------------------------------------- PD structures

Elem PDStructure::apply(unsigned n, Elem x) const {
  if (n == 0) return ring.one();
  if (n > exponent) return ring.zero();
  return gamma[n][index_in(ideal, x)];
}

std::size_t pd_axiom_violations(const PDStructure& s) {
  const FiniteRing& R = s.ring;
  unsigned top = 2 * s.exponent;
  std::size_t bad = 0;
  for (Elem x : s.ideal) {
    if (s.apply(1, x) != x) ++bad;
    for (unsigned n = 1; n <= top; ++n) {
      if (R.mul(R.from_integer(factorial(n)), s.apply(n, x)) != R.pow(x, n)) ++bad;
      if (!contains_sorted(s.ideal, s.apply(n, x))) ++bad;
    }
    for (unsigned m = 1; m <= s.exponent; ++m)
      for (unsigned n = 1; n <= s.exponent; ++n)
        if (R.mul(s.apply(m, x), s.apply(n, x)) != R.mul(R.from_integer(binomial(m + n, n)), s.apply(m + n, x))) ++bad;
    for (Elem a = 0; a < R.size(); ++a)
      for (unsigned n = 1; n <= top; ++n)
        if (s.apply(n, R.mul(a, x)) != R.mul(R.pow(a, n), s.apply(n, x))) ++bad;
    for (Elem y : s.ideal)
      for (unsigned n = 1; n <= top; ++n) {
        Elem sum = R.zero();
        for (unsigned i = 0; i <= n; ++i) sum = R.add(sum, R.mul(s.apply(i, x), s.apply(n - i, y)));
        if (s.apply(n, R.add(x, y)) != sum) ++bad;
      }
  }
  return bad;
}

namespace {

constexpr Elem kUnknown = ~Elem{0};

/// Propagates gamma from the seeded elements to all of I; false on a conflict.
bool extend_gamma(PDStructure& s) {
  const FiniteRing& R = s.ring;
  unsigned e = s.exponent;
  auto known = [&](std::size_t k) { return s.gamma[1][k] != kUnknown; };
  auto assign = [&](Elem y, const std::vector<Elem>& values, bool& changed) {
    std::size_t k = index_in(s.ideal, y);
    if (!known(k)) {
      for (unsigned n = 1; n <= e; ++n) s.gamma[n][k] = values[n];
      changed = true;
      return true;
    }
    for (unsigned n = 1; n <= e; ++n)
      if (s.gamma[n][k] != values[n]) return false;
    return true;
  };
  std::vector<Elem> values(e + 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < s.ideal.size(); ++k) {
      if (!known(k)) continue;
      Elem x = s.ideal[k];
      for (Elem a = 0; a < R.size(); ++a) {
        for (unsigned n = 1; n <= e; ++n) values[n] = R.mul(R.pow(a, n), s.gamma[n][k]);
        if (!assign(R.mul(a, x), values, changed)) return false;
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (!known(j)) continue;
        Elem y = s.ideal[j];
        for (unsigned n = 1; n <= e; ++n) {
          Elem sum = R.zero();
          for (unsigned i = 0; i <= n; ++i) {
            Elem gx = i == 0 ? R.one() : s.gamma[i][k];
            Elem gy = n - i == 0 ? R.one() : s.gamma[n - i][j];
            sum = R.add(sum, R.mul(gx, gy));
          }
          values[n] = sum;
        }
        if (!assign(R.add(x, y), values, changed)) return false;
      }
    }
  }
  for (std::size_t k = 0; k < s.ideal.size(); ++k)
    if (!known(k)) return false;
  return true;
}

}  // namespace

std::vector<PDStructure> enumerate_pd_structures(const FiniteRing& R, const std::vector<Elem>& ideal_in) {
  std::vector<Elem> ideal = ideal_in;
  std::sort(ideal.begin(), ideal.end());
  if (!R.is_ideal(ideal)) throw InvalidArgument("not an ideal of " + R.spec());
  unsigned e = R.nilpotency_exponent(ideal);
  if (e == 0) throw InvalidArgument("ideal is not nilpotent");
  if (ideal.size() > kMaxPdIdeal) throw BoundExceeded("ideal has more than " + std::to_string(kMaxPdIdeal) + " elements");

  PDStructure blank{R, ideal, e, std::vector<std::vector<Elem>>(e + 1, std::vector<Elem>(ideal.size(), kUnknown))};
  for (std::size_t k = 0; k < ideal.size(); ++k) blank.gamma[0][k] = R.one();
  if (ideal.size() == 1) {
    blank.gamma[1][0] = R.zero();
    return {blank};
  }

  std::vector<Elem> gens, span{R.zero()};
  for (Elem x : ideal) {
    if (contains_sorted(span, x)) continue;
    gens.push_back(x);
    span = R.ideal_generated(gens);
    if (span.size() == ideal.size()) break;
  }

  // candidate values of gamma_n(g) for n = 2..e, pruned by n! gamma_n(g) = g^n
  struct Slot {
    std::size_t gen;
    unsigned n;
    std::vector<Elem> options;
  };
  std::vector<Slot> slots;
  double space = 1;
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (unsigned n = 2; n <= e; ++n) {
      Slot slot{g, n, {}};
      Elem fact = R.from_integer(factorial(n));
      Elem power = R.pow(gens[g], n);
      for (Elem c : ideal)
        if (R.mul(fact, c) == power) slot.options.push_back(c);
      if (slot.options.empty()) return {};
      space *= static_cast<double>(slot.options.size());
      slots.push_back(std::move(slot));
    }
  if (space > static_cast<double>(kMaxSearchSpace)) throw BoundExceeded("PD candidate space exceeds 10^6");

  std::vector<PDStructure> out;
  std::vector<std::size_t> choice(slots.size(), 0);
  while (true) {
    PDStructure s = blank;
    std::size_t zero = index_in(ideal, R.zero());
    for (unsigned n = 1; n <= e; ++n) s.gamma[n][zero] = R.zero();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      std::size_t k = index_in(ideal, gens[g]);
      s.gamma[1][k] = gens[g];
      for (std::size_t t = 0; t < slots.size(); ++t)
        if (slots[t].gen == g) s.gamma[slots[t].n][k] = slots[t].options[choice[t]];
    }
    if (extend_gamma(s) && pd_axiom_violations(s) == 0) out.push_back(std::move(s));
    std::size_t t = 0;
    while (t < slots.size() && ++choice[t] == slots[t].options.size()) choice[t++] = 0;
    if (t == slots.size()) break;
  }
  return out;
}

// ---------------------------------------------------------- crystalline points

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

/// Map of reduced point sets X(R/I) -> X(R/J) for I in J.
std::vector<std::size_t> reduce_points(const PointSet& from, const FiniteRing::Quotient& qi, const PointSet& to,
                                       const FiniteRing::Quotient& qj, std::size_t parent_size) {
  std::vector<Elem> step(qi.ring.size(), 0);
  for (Elem r = 0; r < parent_size; ++r) step[qi.projection[r]] = qj.projection[r];
  std::vector<std::size_t> out;
  for (const auto& p : from.points) {
    std::vector<Elem> image(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) image[i] = step[p[i]];
    auto it = std::lower_bound(to.points.begin(), to.points.end(), image);
    if (it == to.points.end() || *it != image) throw Error("reduction of a point is not a point");
    out.push_back(static_cast<std::size_t>(it - to.points.begin()));
  }
  return out;
}

bool restricts_to(const PDStructure& big, const PDStructure& small) {
  if (!std::includes(big.ideal.begin(), big.ideal.end(), small.ideal.begin(), small.ideal.end())) return false;
  unsigned top = std::max(big.exponent, small.exponent);
  for (Elem x : small.ideal)
    for (unsigned n = 1; n <= top; ++n)
      if (big.apply(n, x) != small.apply(n, x)) return false;
  return true;
}

}  // namespace

CrystallinePoints crystalline_point_set(const Presentation& pres, const FiniteRing& R) {
  struct Node {
    std::size_t ideal;
    PDStructure pd;
  };
  auto ideals = enumerate_nilpotent_ideals(R);
  std::vector<FiniteRing::Quotient> quotients;
  std::vector<PointSet> points;
  std::vector<Node> nodes;
  for (std::size_t k = 0; k < ideals.size(); ++k) {
    auto pds = enumerate_pd_structures(R, ideals[k].elements);
    if (pds.empty()) {
      quotients.emplace_back();
      points.emplace_back();
      continue;
    }
    quotients.push_back(R.quotient_by(ideals[k].elements));
    points.push_back(point_set(pres, quotients.back().ring));
    for (auto& pd : pds) nodes.push_back({k, std::move(pd)});
  }
  std::vector<std::size_t> offset(nodes.size() + 1, 0);
  for (std::size_t a = 0; a < nodes.size(); ++a) offset[a + 1] = offset[a] + points[nodes[a].ideal].size();
  UnionFind uf(offset.back());
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      if (a == b || !restricts_to(nodes[b].pd, nodes[a].pd)) continue;
      std::size_t i = nodes[a].ideal, j = nodes[b].ideal;
      auto map = reduce_points(points[i], quotients[i], points[j], quotients[j], R.size());
      for (std::size_t x = 0; x < map.size(); ++x) uf.unite(offset[a] + x, offset[b] + map[x]);
    }
  CrystallinePoints out;
  out.index_pairs = nodes.size();
  std::map<std::size_t, std::size_t> labels;
  for (std::size_t x = 0; x < offset.back(); ++x) labels.emplace(uf.find(x), labels.size());
  out.classes = labels.size();
  // node 0 is the zero ideal with its unique structure
  for (std::size_t x = 0; x < points[0].size(); ++x) out.class_of.push_back(labels.at(uf.find(offset[0] + x)));
  return out;
}

// --------------------------------------------------------------- lifting

std::string to_string(LiftingMode m) { return m == LiftingMode::DeRham ? "dR" : "crys"; }

namespace {

struct MapShape {
  bool injective = true;
  bool surjective = true;
};

}  // namespace

LiftingClassification classify_lifting(const Presentation& pres, const std::vector<FiniteRing>& rings, LiftingMode mode) {
  LiftingClassification out;
  out.mode = mode;
  out.scope = "verdict quantifies over the " + std::to_string(rings.size()) + " supplied test rings only";
  Presentation base = pres.base();
  std::size_t nbase = pres.nbase();
  bool all_bij = true, all_surj = true, all_inj = true;
  std::size_t conclusive = 0;
  for (const FiniteRing& R : rings) {
    RingEvidence ev;
    ev.ring = R.spec();
    try {
      PointSet X = point_set(pres, R);
      PointSet Y = point_set(base, R);
      ev.points = X.size();
      MapShape total;
      std::vector<std::vector<Elem>> ideals;
      for (const auto& I : enumerate_nilpotent_ideals(R)) {
        if (I.elements.size() == 1) continue;
        if (mode == LiftingMode::Crystalline && enumerate_pd_structures(R, I.elements).empty()) continue;
        ideals.push_back(I.elements);
      }
      for (const auto& I : ideals) {
        auto q = R.quotient_by(I);
        PointSet Xq = point_set(pres, q.ring);
        // fibers over each base point y of R, compared with the fiber over the reduction of y
        std::map<std::vector<Elem>, std::set<std::vector<Elem>>> image_of;
        std::map<std::vector<Elem>, std::size_t> count_of;
        for (const auto& p : X.points) {
          std::vector<Elem> yb(p.begin(), p.begin() + static_cast<long>(nbase));
          std::vector<Elem> image(p.size());
          for (std::size_t i = 0; i < p.size(); ++i) image[i] = q.projection[p[i]];
          image_of[yb].insert(image);
          ++count_of[yb];
        }
        std::map<std::vector<Elem>, std::size_t> reduced_fiber;
        for (const auto& p : Xq.points) ++reduced_fiber[std::vector<Elem>(p.begin(), p.begin() + static_cast<long>(nbase))];
        for (const auto& y : Y.points) {
          std::vector<Elem> ybar(y.size());
          for (std::size_t i = 0; i < y.size(); ++i) ybar[i] = q.projection[y[i]];
          std::size_t upstairs = count_of.count(y) ? count_of.at(y) : 0;
          std::size_t images = image_of.count(y) ? image_of.at(y).size() : 0;
          std::size_t downstairs = reduced_fiber.count(ybar) ? reduced_fiber.at(ybar) : 0;
          if (images != upstairs) total.injective = false;
          if (images != downstairs) total.surjective = false;
        }
      }
      ev.ideals_checked = ideals.size();
      if (mode == LiftingMode::DeRham)
        ev.reduced = de_rham_point_set(pres, R).size();
      else
        ev.reduced = crystalline_point_set(pres, R).classes;
      ev.map = total.injective && total.surjective ? "bijective"
               : total.surjective                  ? "surjective"
               : total.injective                   ? "injective"
                                                   : "neither";
      all_bij = all_bij && total.injective && total.surjective;
      all_surj = all_surj && total.surjective;
      all_inj = all_inj && total.injective;
      ++conclusive;
    } catch (const Error& e) {
      ev.map = "inconclusive";
      ev.note = e.what();
    }
    out.evidence.push_back(std::move(ev));
  }
  if (conclusive == 0) return out;
  out.etale = all_bij;
  out.lisse = all_surj;
  out.non_ramifie = all_inj;
  out.verdict = all_bij ? Verdict::Etale : all_surj ? Verdict::Lisse : all_inj ? Verdict::NonRamifie : Verdict::None;
  if (conclusive < rings.size()) out.scope += "; some rings were inconclusive";
  return out;
}

std::vector<FiniteRing> default_test_rings(unsigned p, bool characteristic_p_base) {
  std::string P = std::to_string(p);
  std::vector<std::string> specs{"GF(" + P + ")", "Quot(GF(" + P + "),[e],[e^2])"};
  if (characteristic_p_base) {
    specs.push_back("GF(" + P + ",2)");
    specs.push_back("Quot(GF(" + P + "),[x,y],[x^2,x*y,y^2])");
  } else {
    specs.push_back("Zmod(" + std::to_string(p * p) + ")");
    specs.push_back("Zmod(" + std::to_string(p * p * p) + ")");
  }
  specs.push_back("Quot(GF(" + P + "),[x],[x^4])");
  specs.push_back("Prod(GF(" + P + "),GF(" + P + "))");
  std::vector<FiniteRing> rings;
  for (const auto& s : specs) rings.push_back(FiniteRing::parse(s));
  return rings;
}

}  // namespace adic
