#include "adic/tate.hpp"

#include <algorithm>
#include <numeric>

#include "adic/error.hpp"
#include "adic/text.hpp"

namespace adic {

// ---------------------------------------------------------------- TateSeries

TateSeries::TateSeries(unsigned p, int precision, std::vector<std::string> vars, unsigned degree_cap)
    : p_(p), n_(precision), vars_(std::move(vars)), cap_(degree_cap) {
  if (vars_.size() > kMaxVars) throw BoundExceeded("too many variables");
}

TateSeries TateSeries::from_poly(const Poly& poly, unsigned p, int precision, std::vector<std::string> vars,
                                 unsigned degree_cap) {
  if (poly.field().characteristic != 0) throw DomainMismatch("Tate series need rational coefficients");
  TateSeries s(p, precision, std::move(vars), degree_cap);
  for (const Term& t : poly.terms()) {
    if (t.mono.degree > degree_cap) {
      s.overflow_ = true;
      continue;
    }
    s.coeffs_.emplace(t.mono, PadicNumber::from_rational(p, precision, t.coeff));
  }
  return s;
}

PadicNumber TateSeries::coefficient(const Monomial& m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? PadicNumber::zero(p_, n_) : it->second;
}

void TateSeries::set_coefficient(const Monomial& m, const PadicNumber& c) {
  if (m.degree > cap_) {
    overflow_ = true;
    return;
  }
  if (c.is_zero())
    coeffs_.erase(m);
  else
    coeffs_[m] = c;
}

void TateSeries::check_compatible(const TateSeries& other) const {
  if (p_ != other.p_) throw DomainMismatch("Tate series over different primes");
  if (cap_ != other.cap_ || n_ != other.n_) throw DomainMismatch("cap mismatch: (D,N) differ between operands");
  if (vars_ != other.vars_) throw DomainMismatch("Tate series in different variables");
}

TateSeries TateSeries::operator+(const TateSeries& other) const {
  check_compatible(other);
  TateSeries r = *this;
  r.overflow_ = overflow_ || other.overflow_;
  for (const auto& [m, c] : other.coeffs_) {
    auto it = r.coeffs_.find(m);
    if (it == r.coeffs_.end()) {
      r.coeffs_.emplace(m, c);
    } else {
      PadicNumber s = it->second + c;
      if (s.is_zero())
        r.coeffs_.erase(it);
      else
        it->second = s;
    }
  }
  return r;
}

TateSeries TateSeries::operator-(const TateSeries& other) const {
  TateSeries neg = other;
  for (auto& [m, c] : neg.coeffs_) c = -c;
  return *this + neg;
}

TateSeries TateSeries::operator*(const TateSeries& other) const {
  check_compatible(other);
  TateSeries r(p_, n_, vars_, cap_);
  r.overflow_ = overflow_ || other.overflow_;
  for (const auto& [ma, ca] : coeffs_)
    for (const auto& [mb, cb] : other.coeffs_) {
      if (ma.degree + mb.degree > cap_) {
        r.overflow_ = true;
        continue;
      }
      Monomial m = ma * mb;
      PadicNumber c = ca * cb;
      auto it = r.coeffs_.find(m);
      if (it == r.coeffs_.end()) {
        r.coeffs_.emplace(m, c);
      } else {
        PadicNumber s = it->second + c;
        if (s.is_zero())
          r.coeffs_.erase(it);
        else
          it->second = s;
      }
    }
  return r;
}

TateSeries TateSeries::pow(unsigned k) const {
  TateSeries r(p_, n_, vars_, cap_);
  r.coeffs_.emplace(Monomial::one(), PadicNumber::from_integer(p_, n_, 1));
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

NormValue TateSeries::gauss_norm() const {
  NormValue best = NormValue::zero();
  for (const auto& [m, c] : coeffs_) best = max(best, c.norm());
  return best;
}

Poly TateSeries::to_poly() const {
  Poly out(Field::rationals(), vars_.size());
  for (const auto& [m, c] : coeffs_) out += Poly::term(Field::rationals(), vars_.size(), m, c.to_rational());
  return out;
}

std::string TateSeries::to_string() const { return to_poly().to_string(vars_); }

// -------------------------------------------------------------- Coefficients

std::optional<Field> Coefficients::field() const {
  switch (kind) {
    case Kind::Padic:
    case Kind::Integers:
      return Field::rationals();
    case Kind::FiniteField:
      return Field::prime(p);
    case Kind::IntegersMod:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string Coefficients::to_string() const {
  switch (kind) {
    case Kind::Padic:
      return "Qp(" + std::to_string(p) + "," + std::to_string(precision) + ")";
    case Kind::FiniteField:
      return "GF(" + std::to_string(p) + ")";
    case Kind::Integers:
      return "ZZ";
    case Kind::IntegersMod:
      return "Zmod(" + std::to_string(modulus) + ")";
  }
  return {};
}

// -------------------------------------------------------------- Presentation

namespace {

std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), 0);
  return m;
}

std::vector<Poly> widen(const std::vector<Poly>& polys, std::size_t nvars) {
  std::vector<Poly> out;
  for (const Poly& p : polys) out.push_back(p.remap(nvars, identity_map(p.nvars())));
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

std::string fresh_name(const std::string& name, const std::vector<std::string>& taken) {
  std::string candidate = name;
  while (std::find(taken.begin(), taken.end(), candidate) != taken.end()) candidate += "'";
  return candidate;
}

}  // namespace

Presentation::Presentation() : Presentation(Data{}) {}

Presentation::Presentation(Data data) {
  std::size_t n = data.base_vars.size() + data.vars.size();
  if (n > kMaxVars) throw BoundExceeded("presentation has more than " + std::to_string(kMaxVars) + " variables");
  std::vector<std::string> names = data.base_vars;
  names.insert(names.end(), data.vars.begin(), data.vars.end());
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw InvalidArgument("variable " + names[i] + " declared twice");
  auto field = data.coeffs.field();
  for (auto* list : {&data.base_relations, &data.relations})
    for (Poly& r : *list) {
      if (r.nvars() != n) r = r.remap(n, identity_map(r.nvars()));
      if (field && r.field() != *field) {
        try {
          r = r.over(*field);
        } catch (const DivisionByZero&) {
          throw PrecisionLoss("relation coefficient not defined in " + data.coeffs.to_string());
        }
      }
    }
  data_ = std::make_shared<const Data>(std::move(data));
  if (field) {
    std::vector<Poly> all = data_->base_relations;
    all.insert(all.end(), data_->relations.begin(), data_->relations.end());
    gb_ = std::make_shared<const IdealBasis>(IdealBasis::compute(all, *field, n));
    base_gb_ = std::make_shared<const IdealBasis>(IdealBasis::compute(data_->base_relations, *field, n));
  }
}

Presentation Presentation::tate(Coefficients coeffs, std::vector<std::string> vars, unsigned degree_cap) {
  Data d;
  d.coeffs = coeffs;
  d.vars = std::move(vars);
  d.degree_cap = degree_cap;
  return Presentation(std::move(d));
}

Presentation Presentation::quotient(const Presentation& base, std::vector<std::string> vars, std::vector<Poly> relations) {
  Data d;
  d.coeffs = base.coefficients();
  d.base_vars = base.all_vars();
  d.vars = std::move(vars);
  std::size_t n = d.base_vars.size() + d.vars.size();
  d.base_relations = widen(base.base_relations(), n);
  auto rest = widen(base.relations(), n);
  d.base_relations.insert(d.base_relations.end(), rest.begin(), rest.end());
  d.relations = std::move(relations);
  d.degree_cap = base.degree_cap();
  return Presentation(std::move(d));
}

std::vector<std::string> Presentation::all_vars() const {
  std::vector<std::string> out = data_->base_vars;
  out.insert(out.end(), data_->vars.begin(), data_->vars.end());
  return out;
}

Field Presentation::field() const {
  auto f = data_->coeffs.field();
  if (!f) throw Unsupported("no polynomial model over " + data_->coeffs.to_string());
  return *f;
}

Presentation Presentation::base() const {
  Data d;
  d.coeffs = data_->coeffs;
  d.vars = data_->base_vars;
  d.degree_cap = data_->degree_cap;
  std::vector<std::size_t> keep = identity_map(nbase());
  for (const Poly& r : data_->base_relations) {
    // base relations only involve base variables; drop the adjoined slots
    Poly s(r.field(), nbase());
    for (const Term& t : r.terms()) {
      Monomial m;
      for (std::size_t i = 0; i < nbase(); ++i) m.set(i, t.mono[i]);
      s += Poly::term(r.field(), nbase(), m, t.coeff);
    }
    d.relations.push_back(s);
  }
  return Presentation(std::move(d));
}

Presentation Presentation::absolute() const {
  Data d = *data_;
  d.vars = all_vars();
  d.base_vars.clear();
  d.relations = data_->base_relations;
  d.relations.insert(d.relations.end(), data_->relations.begin(), data_->relations.end());
  d.base_relations.clear();
  return Presentation(std::move(d));
}

Presentation Presentation::with_degree_cap(unsigned cap) const {
  Presentation p = *this;
  Data d = *data_;
  d.degree_cap = cap;
  p.data_ = std::make_shared<const Data>(std::move(d));
  return p;
}

const IdealBasis& Presentation::groebner() const {
  if (!gb_) throw Unsupported("no Groebner basis over " + data_->coeffs.to_string());
  return *gb_;
}

const IdealBasis& Presentation::base_groebner() const {
  if (!base_gb_) throw Unsupported("no Groebner basis over " + data_->coeffs.to_string());
  return *base_gb_;
}

Poly Presentation::normal_form(const Poly& f) const { return groebner().reduce(f.over(field())); }

int Presentation::dimension() const { return groebner().krull_dimension(); }

Poly Presentation::zero() const { return Poly(field(), nvars()); }
Poly Presentation::one() const { return Poly::constant(field(), nvars(), 1); }
Poly Presentation::variable(std::size_t index) const { return Poly::variable(field(), nvars(), index); }

Poly Presentation::parse(const std::string& text) const {
  auto f = data_->coeffs.field();
  return parse_poly(text, all_vars(), f ? *f : Field::rationals());
}

std::string Presentation::to_string() const {
  auto rel_text = [](const std::vector<Poly>& rels, const std::vector<std::string>& names) {
    std::vector<std::string> parts;
    for (const Poly& r : rels) parts.push_back(r.to_string(names));
    return join(parts);
  };
  std::string cap = "; D=" + std::to_string(data_->degree_cap) + ")";
  if (data_->base_vars.empty()) {
    std::string tate = "Tate(" + data_->coeffs.to_string() + ",[" + join(data_->vars) + "]" + cap;
    if (data_->relations.empty()) return tate;
    return "Quot(Tate(" + data_->coeffs.to_string() + ",[]" + cap + ",[" + join(data_->vars) + "],[" +
           rel_text(data_->relations, data_->vars) + "])";
  }
  return "Quot(" + base().to_string() + ",[" + join(data_->vars) + "],[" + rel_text(data_->relations, all_vars()) + "])";
}

bool operator==(const Presentation& a, const Presentation& b) {
  if (a.coefficients() != b.coefficients() || a.all_vars() != b.all_vars()) return false;
  if (a.gb_ && b.gb_) return *a.gb_ == *b.gb_;
  auto ra = a.absolute().relations(), rb = b.absolute().relations();
  return ra == rb;
}

NormalForm normal_form(const Poly& f, const Presentation& pres) {
  Poly nf = pres.normal_form(f);
  const Coefficients& c = pres.coefficients();
  unsigned p = c.kind == Coefficients::Kind::Padic ? c.p : kDefaultPrime;
  int n = c.kind == Coefficients::Kind::Padic ? c.precision : kDefaultPrecision;
  Poly rational = nf.field().characteristic == 0 ? nf : nf.over(Field::rationals());
  return {nf, TateSeries::from_poly(rational, p, n, pres.all_vars(), pres.degree_cap())};
}

GroebnerResult groebner_basis(const std::vector<TateSeries>& generators) {
  std::vector<Poly> polys;
  std::size_t n = generators.empty() ? 0 : generators.front().vars().size();
  for (const TateSeries& s : generators) {
    for (const auto& [m, c] : s.coefficients())
      if (!c.is_exact()) throw InvalidArgument("non-rational coefficient rejected: " + c.to_string());
    polys.push_back(s.to_poly());
  }
  IdealBasis gb = IdealBasis::compute(polys, Field::rationals(), n);
  return {gb.basis(), gb.krull_dimension()};
}

// ------------------------------------------------------------------ Morphism

Morphism::Morphism(Presentation source, Presentation target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_.nvars())
    throw InvalidArgument("morphism needs " + std::to_string(source_.nvars()) + " images, got " +
                          std::to_string(images_.size()));
  auto field = target_.coefficients().field();
  for (Poly& img : images_) {
    if (img.nvars() != target_.nvars()) throw InvalidArgument("image lives in the wrong number of variables");
    if (field && img.field() != *field) img = img.over(*field);
  }
}

Morphism Morphism::identity(const Presentation& a) {
  std::vector<Poly> imgs;
  for (std::size_t i = 0; i < a.nvars(); ++i) imgs.push_back(a.variable(i));
  return Morphism(a, a, imgs);
}

Morphism Morphism::structural(const Presentation& pres) {
  std::vector<Poly> imgs;
  for (std::size_t i = 0; i < pres.nbase(); ++i) imgs.push_back(pres.variable(i));
  return Morphism(pres.base(), pres, imgs);
}

bool Morphism::is_structural() const {
  if (target_.base_vars() != source_.all_vars()) return false;
  if (!(target_.base() == source_)) return false;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != target_.variable(i)) return false;
  return true;
}

void Morphism::check() const {
  Presentation abs = source_.absolute();
  for (const Poly& r : abs.relations()) {
    Poly pushed;
    try {
      pushed = r.over(target_.field()).substitute(images_);
    } catch (const DivisionByZero&) {
      throw PrecisionLoss("coefficient push fails: relation has a coefficient not defined in the target");
    }
    if (!target_.normal_form(pushed).is_zero())
      throw DomainMismatch("incompatible variable images: relation " + r.to_string(abs.vars()) + " is not respected");
  }
}

Presentation Morphism::relative() const {
  if (is_structural()) return target_;
  if (source_.coefficients() != target_.coefficients())
    throw Unsupported("relative presentation needs a common coefficient ring");
  Presentation::Data d;
  d.coeffs = target_.coefficients();
  d.base_vars = source_.all_vars();
  for (const std::string& v : target_.all_vars()) {
    std::vector<std::string> taken = d.base_vars;
    taken.insert(taken.end(), d.vars.begin(), d.vars.end());
    d.vars.push_back(fresh_name(v, taken));
  }
  std::size_t ns = source_.nvars();
  std::size_t n = ns + target_.nvars();
  d.base_relations = widen(source_.absolute().relations(), n);
  std::vector<std::size_t> shift(target_.nvars());
  std::iota(shift.begin(), shift.end(), ns);
  Presentation target_abs = target_.absolute();
  for (const Poly& r : target_abs.relations()) d.relations.push_back(r.remap(n, shift));
  Field f = target_.field();
  for (std::size_t i = 0; i < ns; ++i)
    d.relations.push_back(Poly::variable(f, n, i) - images_[i].remap(n, shift));
  d.degree_cap = std::max(source_.degree_cap(), target_.degree_cap());
  return Presentation(std::move(d));
}

Morphism compose(const Morphism& f, const Morphism& g) {
  if (!(f.target() == g.source())) throw DomainMismatch("incompatible morphisms: target of the first is not the source of the second");
  if (f.is_structural() && g.is_structural()) {
    const Presentation& B = f.target();
    const Presentation& C = g.target();
    Presentation::Data d;
    d.coeffs = C.coefficients();
    d.base_vars = B.base_vars();
    d.vars = B.vars();
    d.vars.insert(d.vars.end(), C.vars().begin(), C.vars().end());
    std::size_t n = C.nvars();
    d.base_relations = widen(B.base_relations(), n);
    d.relations = widen(B.relations(), n);
    d.relations.insert(d.relations.end(), C.relations().begin(), C.relations().end());
    d.degree_cap = C.degree_cap();
    Presentation composite(std::move(d));
    return Morphism(f.source(), composite,
                    [&] {
                      std::vector<Poly> imgs;
                      for (std::size_t i = 0; i < f.source().nvars(); ++i) imgs.push_back(composite.variable(i));
                      return imgs;
                    }());
  }
  std::vector<Poly> imgs;
  for (const Poly& img : f.images()) imgs.push_back(g.target().normal_form(img.substitute(g.images())));
  return Morphism(f.source(), g.target(), imgs);
}

Presentation base_change(const Presentation& pres, const Morphism& phi) {
  if (!(pres.base() == phi.source()))
    throw DomainMismatch("base change needs a morphism out of the base of the presentation");
  const Presentation& target = phi.target();
  Presentation::Data d;
  d.coeffs = target.coefficients();
  d.base_vars = target.all_vars();
  for (const std::string& v : pres.vars()) {
    std::vector<std::string> taken = d.base_vars;
    taken.insert(taken.end(), d.vars.begin(), d.vars.end());
    d.vars.push_back(fresh_name(v, taken));
  }
  std::size_t nt = target.nvars();
  std::size_t n = nt + pres.vars().size();
  d.base_relations = widen(target.absolute().relations(), n);
  Field f = target.field();
  std::vector<Poly> subst;
  for (const Poly& img : phi.images()) subst.push_back(img.remap(n, identity_map(nt)));
  for (std::size_t k = 0; k < pres.vars().size(); ++k) subst.push_back(Poly::variable(f, n, nt + k));
  for (const Poly& r : pres.relations()) {
    Poly pushed;
    try {
      pushed = r.over(f);
    } catch (const DivisionByZero&) {
      throw PrecisionLoss("coefficient push fails: " + r.to_string(pres.all_vars()) + " has a coefficient not defined in " +
                          target.coefficients().to_string());
    }
    d.relations.push_back(pushed.substitute(subst));
  }
  d.degree_cap = std::max(pres.degree_cap(), target.degree_cap());
  d.declared = pres.data().declared;
  return Presentation(std::move(d));
}

}  // namespace adic
