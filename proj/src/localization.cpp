#include "adic/localization.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "adic/error.hpp"
#include "adic/linalg.hpp"

namespace adic {

namespace {

constexpr std::size_t kMaxGluingDimension = 1500;

std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

std::string fresh_name(const std::string& name, const std::vector<std::string>& taken) {
  std::string candidate = name;
  while (std::find(taken.begin(), taken.end(), candidate) != taken.end()) candidate += "'";
  return candidate;
}

Poly widen(const Poly& p, std::size_t n) { return p.remap(n, identity_map(p.nvars())); }

Presentation adjoin(const Presentation& B, std::vector<std::string> vars, const std::vector<Poly>& rels) {
  return Presentation::quotient(B, std::move(vars), rels);
}

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_compare(a, b) < 0; }
};

/// Coordinates of polynomials on a fixed list of monomials.
class CoordinateSpace {
 public:
  CoordinateSpace() = default;
  explicit CoordinateSpace(const std::vector<Monomial>& monos) {
    for (const Monomial& m : monos) add(m);
  }
  std::size_t add(const Monomial& m) {
    auto [it, inserted] = index_.emplace(m, index_.size());
    return it->second;
  }
  std::size_t size() const { return index_.size(); }
  bool contains(const Monomial& m) const { return index_.count(m) > 0; }
  /// Writes the coefficients of `p` at `offset`; returns false if a monomial is missing.
  bool write(const Poly& p, Vec& out, std::size_t offset, int sign = 1) const {
    for (const Term& t : p.terms()) {
      auto it = index_.find(t.mono);
      if (it == index_.end()) return false;
      out[offset + it->second] += sign > 0 ? t.coeff : mpq_class(-t.coeff);
    }
    return true;
  }

 private:
  std::map<Monomial, std::size_t, MonomialLess> index_;
};

}  // namespace

RationalLocalization rational_localization(const Presentation& B, const Poly& f, const Poly& g, const std::string& var) {
  std::string name = fresh_name(var, B.all_vars());
  std::size_t n = B.nvars() + 1;
  Field field = B.field();
  Poly u = Poly::variable(field, n, n - 1);
  Poly rel = widen(g.over(field), n) * u - widen(f.over(field), n);
  Presentation loc = adjoin(B, {name}, {rel});
  return {loc, Morphism::structural(loc)};
}

CoveringCertificate covering_check(const Presentation& B, const Poly& f_in, const Poly& g_in) {
  CoveringCertificate cert;
  Field field = B.field();
  std::size_t n = B.nvars();
  Poly f = B.normal_form(f_in), g = B.normal_form(g_in);
  cert.a = cert.b = cert.i = Poly(field, n);
  // unit shortcuts keep the certificate in its simplest form
  if (g.is_constant() && !g.is_zero()) {
    cert.status = CoveringStatus::Covering;
    cert.b = Poly::constant(field, n, field.inv(g.leading().coeff));
    return cert;
  }
  if (f.is_constant() && !f.is_zero()) {
    cert.status = CoveringStatus::Covering;
    cert.a = Poly::constant(field, n, field.inv(f.leading().coeff));
    return cert;
  }
  try {
    const auto& ideal = B.groebner().basis();
    std::size_t m = 2 + ideal.size();
    std::vector<ModVec> gens;
    auto tagged = [&](const Poly& h, std::size_t k) {
      ModVec v(1 + m, Poly(field, n));
      v[0] = h;
      v[1 + k] = Poly::constant(field, n, 1);
      return v;
    };
    gens.push_back(tagged(f, 0));
    gens.push_back(tagged(g, 1));
    for (std::size_t k = 0; k < ideal.size(); ++k) gens.push_back(tagged(ideal[k], 2 + k));
    GroebnerLimits limits;
    limits.max_degree = std::max(4 * B.degree_cap(), 32u);
    ModuleBasis mb = ModuleBasis::compute(gens, 1 + m, field, n, limits);
    for (const ModVec& v : mb.elements()) {
      if (!(v[0].is_constant() && !v[0].is_zero())) continue;
      mpq_class scale = field.inv(v[0].leading().coeff);
      cert.a = v[1].scaled(scale);
      cert.b = v[2].scaled(scale);
      for (std::size_t k = 0; k < ideal.size(); ++k) cert.i += (v[3 + k] * ideal[k]).scaled(scale);
      cert.status = CoveringStatus::Covering;
      return cert;
    }
    cert.status = CoveringStatus::NotCovering;
    cert.note = "1 is not in I + (f, g)";
  } catch (const BoundExceeded& e) {
    cert.status = CoveringStatus::Inconclusive;
    cert.note = e.what();
  }
  return cert;
}

BinaryCovering binary_covering(const Presentation& B, const Poly& f_in, const Poly& g_in) {
  BinaryCovering cov;
  cov.ring = B;
  Field field = B.field();
  cov.f = f_in.over(field);
  cov.g = g_in.over(field);
  std::size_t n = B.nvars();
  cov.u = fresh_name("u", B.all_vars());
  std::vector<std::string> taken = B.all_vars();
  taken.push_back(cov.u);
  cov.v = fresh_name("v", taken);
  Poly f1 = widen(cov.f, n + 1), g1 = widen(cov.g, n + 1);
  Poly t1 = Poly::variable(field, n + 1, n);
  cov.first = adjoin(B, {cov.u}, {g1 * t1 - f1});
  cov.second = adjoin(B, {cov.v}, {f1 * t1 - g1});
  Poly f2 = widen(cov.f, n + 2), g2 = widen(cov.g, n + 2);
  Poly u = Poly::variable(field, n + 2, n), v = Poly::variable(field, n + 2, n + 1);
  cov.joint = adjoin(B, {cov.u, cov.v}, {g2 * u - f2, f2 * v - g2});
  return cov;
}

BinaryCovering mutate(const BinaryCovering& cov, Mutation m) {
  BinaryCovering out = cov;
  const Presentation& B = cov.ring;
  Field field = B.field();
  std::size_t n = B.nvars();
  Poly f1 = widen(cov.f, n + 1), g1 = widen(cov.g, n + 1);
  Poly t1 = Poly::variable(field, n + 1, n);
  Poly f2 = widen(cov.f, n + 2), g2 = widen(cov.g, n + 2);
  Poly u = Poly::variable(field, n + 2, n);
  switch (m) {
    case Mutation::DropFirstRelation:
      out.first = adjoin(B, {cov.u}, {});
      break;
    case Mutation::ShiftFirstRelation:
      out.first = adjoin(B, {cov.u}, {g1 * t1 - f1 - Poly::constant(field, n + 1, 1)});
      break;
    case Mutation::DropSecondInJoint:
      out.joint = adjoin(B, {cov.u, cov.v}, {g2 * u - f2});
      break;
  }
  return out;
}

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::Exact:
      return "exact";
    case Exactness::Failed:
      return "failed";
    case Exactness::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

struct Piece {
  IdealBasis gb;
  std::vector<bool> allowed;
  Presentation pres;
};

/// Sequence maps on truncated spaces. Index layout of the ambient ring: B's variables, u, v.
class GluingSpaces {
 public:
  GluingSpaces(const BinaryCovering& cov) : n_(cov.ring.nvars()), field_(cov.ring.field()) {
    std::size_t N = n_ + 2;
    auto to_ambient = [&](const Presentation& p, std::vector<std::size_t> map) {
      std::vector<Poly> rels;
      Presentation abs = p.absolute();
      for (const Poly& r : abs.relations()) rels.push_back(r.remap(N, map));
      return rels;
    };
    std::vector<std::size_t> base_map = identity_map(n_);
    std::vector<std::size_t> first_map = identity_map(n_ + 1);
    std::vector<std::size_t> second_map = identity_map(n_ + 1);
    second_map[n_] = n_ + 1;
    std::vector<std::size_t> joint_map = identity_map(n_ + 2);
    rels_[0] = to_ambient(cov.ring, base_map);
    rels_[1] = to_ambient(cov.first, first_map);
    rels_[2] = to_ambient(cov.second, second_map);
    rels_[3] = to_ambient(cov.joint, joint_map);
    GroebnerLimits limits;
    limits.max_degree = std::max(4 * cov.ring.degree_cap(), 32u);
    for (int k = 0; k < 4; ++k) {
      gb_[k] = IdealBasis::compute(rels_[k], field_, N, limits);
      allowed_[k].assign(N, false);
      for (std::size_t i = 0; i < n_; ++i) allowed_[k][i] = true;
    }
    allowed_[1][n_] = true;
    allowed_[2][n_ + 1] = true;
    allowed_[3][n_] = allowed_[3][n_ + 1] = true;
  }

  /// Generators of ring `small` all vanish in ring `big`.
  bool contained(int small, int big) const {
    return std::all_of(rels_[small].begin(), rels_[small].end(), [&](const Poly& r) { return gb_[big].contains(r); });
  }

  std::vector<Monomial> basis(int k, unsigned d) const { return gb_[k].standard_monomials(d, allowed_[k]); }
  Poly nf(int k, const Poly& p) const { return gb_[k].reduce(p); }
  Poly mono(const Monomial& m) const { return Poly::term(field_, n_ + 2, m, 1); }
  Field field() const { return field_; }

 private:
  std::size_t n_;
  Field field_;
  std::vector<Poly> rels_[4];
  IdealBasis gb_[4];
  std::vector<bool> allowed_[4];
};

/// Columns iota(b) for b in V_B(<= d), in coordinates V1(<= d') + V2(<= d').
std::vector<Vec> iota_columns(const GluingSpaces& s, unsigned d, const CoordinateSpace& c1, const CoordinateSpace& c2) {
  std::vector<Vec> cols;
  for (const Monomial& m : s.basis(0, d)) {
    Vec col(c1.size() + c2.size(), 0);
    Poly b = s.mono(m);
    if (!c1.write(s.nf(1, b), col, 0) || !c2.write(s.nf(2, b), col, c1.size())) throw Error("coordinate overflow");
    cols.push_back(std::move(col));
  }
  return cols;
}

/// Columns delta(w) for w running over V1(<= d) + V2(<= d), in coordinates V12.
std::vector<Vec> delta_columns(const GluingSpaces& s, const std::vector<Monomial>& v1, const std::vector<Monomial>& v2,
                               const CoordinateSpace& c12) {
  std::vector<Vec> cols;
  for (const Monomial& m : v1) {
    Vec col(c12.size(), 0);
    if (!c12.write(s.nf(3, s.mono(m)), col, 0)) throw Error("coordinate overflow");
    cols.push_back(std::move(col));
  }
  for (const Monomial& m : v2) {
    Vec col(c12.size(), 0);
    if (!c12.write(s.nf(3, s.mono(m)), col, 0, -1)) throw Error("coordinate overflow");
    cols.push_back(std::move(col));
  }
  return cols;
}

bool span_contains(const std::vector<Vec>& cols, const std::vector<Vec>& targets, std::size_t dim, Field field) {
  if (targets.empty()) return true;
  Matrix a = Matrix::from_columns(cols, dim);
  std::vector<Vec> both = cols;
  both.insert(both.end(), targets.begin(), targets.end());
  return rank(a, field) == rank(Matrix::from_columns(both, dim), field);
}

Vec embed(const Vec& v, const std::vector<Monomial>& from1, const std::vector<Monomial>& from2, const CoordinateSpace& to1,
          const CoordinateSpace& to2, const GluingSpaces& s) {
  Vec out(to1.size() + to2.size(), 0);
  for (std::size_t i = 0; i < from1.size(); ++i) {
    if (sgn(v[i]) == 0) continue;
    to1.write(s.mono(from1[i]).scaled(v[i]), out, 0);
  }
  for (std::size_t i = 0; i < from2.size(); ++i) {
    if (sgn(v[from1.size() + i]) == 0) continue;
    to2.write(s.mono(from2[i]).scaled(v[from1.size() + i]), out, to1.size());
  }
  return out;
}

}  // namespace

ExactnessReport gluing_sequence_check(const BinaryCovering& cov, unsigned D, int N) {
  ExactnessReport rep;
  rep.degree_cap = D;
  rep.precision = N;
  GluingSpaces s(cov);
  Field field = s.field();

  bool iota_defined = s.contained(0, 1) && s.contained(0, 2);
  bool delta_defined = s.contained(1, 3) && s.contained(2, 3);
  if (!iota_defined) {
    rep.left = rep.middle = Exactness::Failed;
    rep.notes.push_back("B -> B<f/g> + B<g/f> is not well defined: a relation of B survives in a localization");
  }
  if (!delta_defined) {
    rep.middle = rep.right = Exactness::Failed;
    rep.notes.push_back("difference map is not well defined: a relation of a localization survives in the overlap");
  }

  auto vB = s.basis(0, D), v1 = s.basis(1, D), v2 = s.basis(2, D), v12 = s.basis(3, D);
  auto v1_2 = s.basis(1, 2 * D), v2_2 = s.basis(2, 2 * D), v12_2 = s.basis(3, 2 * D);
  if (v1_2.size() + v2_2.size() > kMaxGluingDimension || v12_2.size() > kMaxGluingDimension) {
    if (iota_defined && delta_defined) rep.left = rep.middle = rep.right = Exactness::Inconclusive;
    rep.notes.push_back("truncated spaces too large at twice the degree cap");
    return rep;
  }
  CoordinateSpace c1(v1), c2(v2), c12(v12), c1_2(v1_2), c2_2(v2_2), c12_2(v12_2);

  if (iota_defined) {
    auto cols = iota_columns(s, D, c1, c2);
    std::size_t r = rank(Matrix::from_columns(cols, c1.size() + c2.size()), field);
    rep.left = r == vB.size() ? Exactness::Exact : Exactness::Failed;
    if (rep.left == Exactness::Failed) rep.notes.push_back("a nonzero element of B vanishes in both localizations");
  }

  if (iota_defined && delta_defined) {
    // delta o iota vanishes
    auto icols = iota_columns(s, D, c1, c2);
    auto dcols = delta_columns(s, v1, v2, c12);
    Matrix dm = Matrix::from_columns(dcols, c12.size());
    bool composite_zero = true;
    for (const Vec& col : icols)
      for (const Vec& x : {dm.apply(col, field)})
        if (std::any_of(x.begin(), x.end(), [](const mpq_class& q) { return sgn(q) != 0; })) composite_zero = false;
    if (!composite_zero) {
      rep.middle = Exactness::Failed;
      rep.notes.push_back("the composite B -> overlap is nonzero");
    } else {
      std::vector<Vec> ker = kernel(dm, field);
      if (span_contains(icols, ker, c1.size() + c2.size(), field)) {
        rep.middle = Exactness::Exact;
      } else {
        auto icols2 = iota_columns(s, 2 * D, c1_2, c2_2);
        std::vector<Vec> lifted;
        for (const Vec& k : ker) lifted.push_back(embed(k, v1, v2, c1_2, c2_2, s));
        if (span_contains(icols2, lifted, c1_2.size() + c2_2.size(), field)) {
          rep.middle = Exactness::Exact;
          rep.notes.push_back("middle exactness needed elements of B up to degree " + std::to_string(2 * D));
        } else {
          rep.middle = Exactness::Failed;
          rep.notes.push_back("a compatible pair of degree <= " + std::to_string(D) +
                              " is not the image of any element of B of degree <= " + std::to_string(2 * D));
        }
      }
    }
  }

  if (delta_defined) {
    auto dcols = delta_columns(s, v1, v2, c12);
    if (rank(Matrix::from_columns(dcols, c12.size()), field) == v12.size()) {
      rep.right = Exactness::Exact;
    } else {
      auto dcols2 = delta_columns(s, v1_2, v2_2, c12_2);
      std::vector<Vec> targets;
      for (const Monomial& m : v12) {
        Vec t(c12_2.size(), 0);
        c12_2.write(s.mono(m), t, 0);
        targets.push_back(std::move(t));
      }
      if (span_contains(dcols2, targets, c12_2.size(), field)) {
        rep.right = Exactness::Exact;
        rep.notes.push_back("surjectivity needed preimages up to degree " + std::to_string(2 * D));
      } else {
        rep.right = Exactness::Inconclusive;
        rep.notes.push_back("no preimage found up to degree " + std::to_string(2 * D));
      }
    }
  }
  return rep;
}

// ------------------------------------------------------- joint surjection

namespace {

std::vector<std::vector<unsigned>> exponent_vectors(std::size_t k, unsigned total) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> e(k, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == k) {
      out.push_back(e);
      return;
    }
    for (unsigned x = 0; x <= left; ++x) {
      e[i] = x;
      rec(i + 1, left - x);
    }
    e[i] = 0;
  };
  rec(0, total);
  return out;
}

}  // namespace

bool certify_generation(const Presentation& B, const std::vector<Poly>& generators, unsigned D, unsigned p) {
  std::size_t n = B.nvars();
  Field field = B.field();
  std::vector<bool> base_only(n, false);
  for (std::size_t i = 0; i < B.nbase(); ++i) base_only[i] = true;
  std::vector<Poly> gens;
  for (const Poly& g : generators) gens.push_back(B.normal_form(g));

  std::vector<Poly> spanning;
  auto base_monos = monomials_up_to(n, D, base_only);
  for (const auto& e : exponent_vectors(gens.size(), D)) {
    unsigned weight = std::accumulate(e.begin(), e.end(), 0u);
    Poly prod = B.one();
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (e[i]) prod = B.normal_form(prod * gens[i].pow(e[i]));
    for (const Monomial& m : base_monos) {
      if (m.degree + weight > D) continue;
      spanning.push_back(B.normal_form(prod.mul_term(m, 1)));
    }
  }
  std::vector<Poly> targets;
  for (const Monomial& m : monomials_up_to(n, D)) targets.push_back(B.normal_form(Poly::term(field, n, m, 1)));

  CoordinateSpace coords;
  for (const auto* list : {&spanning, &targets})
    for (const Poly& q : *list)
      for (const Term& t : q.terms()) coords.add(t.mono);
  auto vec = [&](const Poly& q) {
    Vec v(coords.size(), 0);
    coords.write(q, v, 0);
    return v;
  };
  if (field.characteristic != 0) {
    std::vector<Vec> cols, tcols;
    for (const Poly& q : spanning) cols.push_back(vec(q));
    for (const Poly& q : targets) tcols.push_back(vec(q));
    return span_contains(cols, tcols, coords.size(), field);
  }
  IntegralSpan span(coords.size(), p);
  for (const Poly& q : spanning) span.add(vec(q));
  return std::all_of(targets.begin(), targets.end(), [&](const Poly& q) { return span.contains(vec(q)); });
}

JointLift joint_surjection_lift(const BinaryCovering& cov, const SurjectionData& s1, const SurjectionData& s2,
                                unsigned D, int N) {
  const Presentation& B = cov.ring;
  const Coefficients& coeffs = B.coefficients();
  unsigned p = coeffs.kind == Coefficients::Kind::Padic || coeffs.kind == Coefficients::Kind::FiniteField ? coeffs.p : 0;
  if (p == 0) throw Unsupported("joint surjection lift needs p-adic or F_p coefficients");
  std::size_t n = B.nvars();
  Field field = B.field();

  // coefficients of the local generators with respect to the localization variable
  std::vector<Poly> candidates;
  auto collect = [&](const SurjectionData& s) {
    if (s.target.nvars() != n + 1) throw InvalidArgument("surjection data must live on a localization of B");
    for (const Poly& gen : s.generators) {
      Poly g = s.target.normal_form(gen);
      std::map<unsigned, Poly> by_power;
      for (const Term& t : g.terms()) {
        Monomial m = t.mono;
        unsigned k = m[n];
        m.set(n, 0);
        auto it = by_power.emplace(k, Poly(field, n)).first;
        Monomial mb;
        for (std::size_t i = 0; i < n; ++i) mb.set(i, m[i]);
        it->second += Poly::term(field, n, mb, t.coeff);
      }
      for (auto& [k, c] : by_power) {
        Poly nf = B.normal_form(c);
        bool base_only = true;
        for (std::size_t i = B.nbase(); i < n; ++i)
          if (nf.uses_var(i)) base_only = false;
        if (base_only) continue;
        if (std::find(candidates.begin(), candidates.end(), nf) == candidates.end()) candidates.push_back(nf);
      }
    }
  };
  collect(s1);
  collect(s2);

  JointLift out;
  out.candidates = candidates.size();
  // truncated approximants within distance p^-1
  NormValue delta = NormValue::power(p, -1);
  std::vector<Poly> approx;
  for (const Poly& c : candidates) {
    Poly kept(field, n), dropped(field, n);
    for (const Term& t : c.terms()) {
      bool small = field.characteristic == 0 && valuation(t.coeff, p) >= 1;
      bool far = t.mono.degree > D || (field.characteristic == 0 && valuation(t.coeff, p) >= N);
      if (far && small)
        dropped += Poly::term(field, n, t.mono, t.coeff);
      else
        kept += Poly::term(field, n, t.mono, t.coeff);
    }
    if (!dropped.is_zero()) {
      ++out.perturbed;
      NormValue dist = NormValue::zero();
      for (const Term& t : dropped.terms()) dist = max(dist, NormValue::power(p, -valuation(t.coeff, p)));
      if (dist > delta) throw Error("perturbation exceeds p^-1");
    }
    if (!kept.is_zero()) approx.push_back(kept);
  }

  if (!certify_generation(B, approx, D, p)) {
    out.certified = false;
    out.generators = approx;
    out.note = "certification failure at cap: the patched generators do not span B up to degree " + std::to_string(D);
    return out;
  }
  out.certified = true;
  for (std::size_t i = approx.size(); i-- > 0;) {
    std::vector<Poly> fewer = approx;
    fewer.erase(fewer.begin() + static_cast<long>(i));
    if (certify_generation(B, fewer, D, p)) approx = std::move(fewer);
  }
  out.generators = approx;
  return out;
}

}  // namespace adic
