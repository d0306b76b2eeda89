#include "adic/finite_ring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "adic/error.hpp"
#include "adic/padic.hpp"
#include "adic/text.hpp"

namespace adic {

using Elem = FiniteRing::Elem;
using Coords = std::vector<unsigned long>;

struct FiniteRing::Impl {
  enum class Kind { Integers, Factor, Product, Table };

  Kind kind = Kind::Table;
  std::string spec;
  std::size_t size = 1;
  unsigned long characteristic = 1;
  Elem one = 0;

  // structure-constant form: e_i * e_j = sum_k structure[i][j][k] e_k
  std::vector<unsigned long> orders;
  std::vector<std::vector<Coords>> structure;
  Coords one_coords;
  std::vector<std::size_t> radix;

  // tables, present for table rings and for small structure-constant rings
  std::vector<std::uint16_t> add_table, mul_table, neg_table;

  std::vector<Elem> nilradical;
  std::vector<RingFactor> factors;
  std::vector<FiniteRing> components;  // direct factors of a product
  std::vector<std::size_t> component_offsets;
  std::vector<std::string> labels;  // table rings

  bool has_tables() const { return !add_table.empty(); }

  Coords decode(Elem a) const {
    Coords c(orders.size());
    std::size_t x = a;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      c[i] = x % orders[i];
      x /= orders[i];
    }
    return c;
  }

  Elem encode(const Coords& c) const {
    std::size_t x = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) x += (c[i] % orders[i]) * radix[i];
    return static_cast<Elem>(x);
  }

  Elem basis_add(Elem a, Elem b) const {
    Coords ca = decode(a), cb = decode(b);
    for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = (ca[i] + cb[i]) % orders[i];
    return encode(ca);
  }

  Elem basis_neg(Elem a) const {
    Coords ca = decode(a);
    for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = (orders[i] - ca[i]) % orders[i];
    return encode(ca);
  }

  Coords coord_mul(const Coords& ca, const Coords& cb) const {
    std::size_t r = orders.size();
    std::vector<unsigned long long> acc(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
      if (ca[i] == 0) continue;
      for (std::size_t j = 0; j < r; ++j) {
        if (cb[j] == 0) continue;
        unsigned long long ab = static_cast<unsigned long long>(ca[i]) * cb[j];
        const Coords& s = structure[i][j];
        for (std::size_t k = 0; k < r; ++k)
          if (s[k] != 0) acc[k] = (acc[k] + ab % orders[k] * s[k]) % orders[k];
      }
    }
    return Coords(acc.begin(), acc.end());
  }

  Elem basis_mul(Elem a, Elem b) const { return encode(coord_mul(decode(a), decode(b))); }

  Elem add(Elem a, Elem b) const { return has_tables() ? add_table[a * size + b] : basis_add(a, b); }
  Elem mul(Elem a, Elem b) const { return has_tables() ? mul_table[a * size + b] : basis_mul(a, b); }
  Elem neg(Elem a) const { return has_tables() ? neg_table[a] : basis_neg(a); }

  void finish_basis_form() {
    radix.assign(orders.size(), 1);
    size = 1;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      radix[i] = size;
      size *= orders[i];
      if (size > kMaxCardinality) throw BoundExceeded("cardinality bound exceeded: ring has more than 4096 elements");
    }
    one = encode(one_coords);
    if (size <= kMaxTableCardinality) {
      add_table.resize(size * size);
      mul_table.resize(size * size);
      neg_table.resize(size);
      std::vector<Coords> all(size);
      for (std::size_t a = 0; a < size; ++a) all[a] = decode(static_cast<Elem>(a));
      for (std::size_t a = 0; a < size; ++a) {
        neg_table[a] = static_cast<std::uint16_t>(basis_neg(static_cast<Elem>(a)));
        for (std::size_t b = a; b < size; ++b) {
          Coords s(orders.size());
          for (std::size_t i = 0; i < s.size(); ++i) s[i] = (all[a][i] + all[b][i]) % orders[i];
          auto sum = static_cast<std::uint16_t>(encode(s));
          auto prod = static_cast<std::uint16_t>(encode(coord_mul(all[a], all[b])));
          add_table[a * size + b] = add_table[b * size + a] = sum;
          mul_table[a * size + b] = mul_table[b * size + a] = prod;
        }
      }
    }
    finish_common();
  }

  void finish_common() {
    characteristic = 1;
    Elem x = one;
    while (x != 0) {
      x = add(x, one);
      ++characteristic;
    }
    if (size == 1) characteristic = 1;
    unsigned bound = 1;
    while ((std::size_t{1} << bound) < size) ++bound;
    ++bound;
    nilradical.clear();
    for (std::size_t a = 0; a < size; ++a) {
      Elem y = static_cast<Elem>(a);
      for (unsigned e = 1; e < bound && y != 0; e *= 2) y = mul(y, y);
      if (y == 0) nilradical.push_back(static_cast<Elem>(a));
    }
  }
};

namespace {

std::shared_ptr<FiniteRing::Impl> make_impl() { return std::make_shared<FiniteRing::Impl>(); }

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

using UPoly = std::vector<unsigned long>;  // coefficients, low degree first

bool divides_mod_p(const UPoly& d, UPoly f, unsigned p) {
  // d is monic
  std::size_t dd = d.size() - 1;
  for (std::size_t k = f.size(); k-- > dd;) {
    unsigned long c = f[k] % p;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dd; ++i) f[k - dd + i] = (f[k - dd + i] + (p - c) * d[i]) % p;
  }
  return std::all_of(f.begin(), f.end(), [&](unsigned long c) { return c % p == 0; });
}

UPoly nth_monic(unsigned p, unsigned degree, unsigned long index) {
  UPoly f(degree + 1, 0);
  f[degree] = 1;
  for (unsigned i = 0; i < degree; ++i) {
    f[i] = index % p;
    index /= p;
  }
  return f;
}

UPoly find_irreducible(unsigned p, unsigned k) {
  unsigned long count = 1;
  for (unsigned i = 0; i < k; ++i) count *= p;
  for (unsigned long idx = 0; idx < count; ++idx) {
    UPoly f = nth_monic(p, k, idx);
    bool irreducible = true;
    for (unsigned d = 1; d <= k / 2 && irreducible; ++d) {
      unsigned long dcount = 1;
      for (unsigned i = 0; i < d; ++i) dcount *= p;
      for (unsigned long j = 0; j < dcount && irreducible; ++j)
        if (divides_mod_p(nth_monic(p, d, j), f, p)) irreducible = false;
    }
    if (irreducible) return f;
  }
  throw InvalidArgument("no irreducible polynomial found");
}

FiniteRing::Impl factor_impl(unsigned p, std::vector<std::string> vars, const std::vector<Poly>& relations,
                             std::string spec) {
  if (!is_prime(p)) throw InvalidArgument("Quot needs a prime field, got characteristic " + std::to_string(p));
  if (vars.size() > kMaxVars) throw BoundExceeded("too many variables in ring spec");
  Field fp = Field::prime(p);
  std::vector<Poly> rels;
  for (const Poly& r : relations) {
    try {
      rels.push_back(r.over(fp));
    } catch (const DivisionByZero&) {
      throw InvalidArgument("relation coefficient is not defined modulo " + std::to_string(p));
    }
  }
  RingFactor factor;
  factor.p = p;
  factor.vars = std::move(vars);
  factor.ideal = IdealBasis::compute(rels, fp, factor.vars.size());
  long dim = factor.ideal.vector_space_dimension(64);
  if (dim < 0) throw BoundExceeded("cardinality bound exceeded: quotient is infinite or larger than 4096 elements");
  double card = 1;
  for (long i = 0; i < dim; ++i) card *= p;
  if (card > static_cast<double>(FiniteRing::kMaxCardinality))
    throw BoundExceeded("cardinality bound exceeded: ring has more than 4096 elements");
  factor.basis = factor.ideal.standard_monomials(static_cast<unsigned>(std::max<long>(dim, 0)));
  std::sort(factor.basis.begin(), factor.basis.end(),
            [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) < 0; });

  FiniteRing::Impl impl;
  impl.kind = FiniteRing::Impl::Kind::Factor;
  impl.spec = std::move(spec);
  std::size_t r = factor.basis.size();
  impl.orders.assign(r, p);
  impl.structure.assign(r, std::vector<Coords>(r, Coords(r, 0)));
  std::size_t n = factor.vars.size();
  auto coords_of = [&](const Poly& q) {
    Coords c(r, 0);
    for (const Term& t : q.terms()) {
      auto it = std::find(factor.basis.begin(), factor.basis.end(), t.mono);
      c[static_cast<std::size_t>(it - factor.basis.begin())] = t.coeff.get_num().get_ui();
    }
    return c;
  };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      impl.structure[i][j] = coords_of(factor.ideal.reduce(Poly::term(fp, n, factor.basis[i] * factor.basis[j], 1)));
  impl.one_coords = coords_of(factor.ideal.reduce(Poly::constant(fp, n, 1)));
  impl.factors.push_back(std::move(factor));
  return impl;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace

FiniteRing::FiniteRing() : FiniteRing(galois_field(2, 1)) {}

FiniteRing FiniteRing::zmod(unsigned long m) {
  if (m < 1) throw InvalidArgument("Zmod needs a positive modulus");
  if (m > kMaxCardinality) throw BoundExceeded("cardinality bound exceeded: ring has more than 4096 elements");
  if (is_prime(m)) {
    auto impl = std::make_shared<Impl>(factor_impl(static_cast<unsigned>(m), {}, {}, "Zmod(" + std::to_string(m) + ")"));
    impl->finish_basis_form();
    return FiniteRing(impl);
  }
  auto impl = make_impl();
  impl->kind = Impl::Kind::Integers;
  impl->spec = "Zmod(" + std::to_string(m) + ")";
  impl->orders = {m};
  impl->structure = {{Coords{1 % m}}};
  impl->one_coords = {1 % m};
  impl->finish_basis_form();
  return FiniteRing(impl);
}

FiniteRing FiniteRing::galois_field(unsigned p, unsigned k) {
  if (!is_prime(p)) throw InvalidArgument("GF needs a prime, got " + std::to_string(p));
  if (k < 1) throw InvalidArgument("GF needs a positive degree");
  std::string spec = k == 1 ? "GF(" + std::to_string(p) + ")" : "GF(" + std::to_string(p) + "," + std::to_string(k) + ")";
  std::vector<Poly> rels;
  std::vector<std::string> vars;
  if (k > 1) {
    double card = 1;
    for (unsigned i = 0; i < k; ++i) card *= p;
    if (card > kMaxCardinality) throw BoundExceeded("cardinality bound exceeded: ring has more than 4096 elements");
    UPoly h = find_irreducible(p, k);
    Poly rel(Field::rationals(), 1);
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i]) rel += Poly::term(Field::rationals(), 1, Monomial::var(0, static_cast<unsigned>(i)), h[i]);
    rels.push_back(rel);
    vars.push_back("a");
  }
  auto impl = std::make_shared<Impl>(factor_impl(p, vars, rels, spec));
  impl->finish_basis_form();
  return FiniteRing(impl);
}

FiniteRing FiniteRing::quotient(unsigned p, std::vector<std::string> vars, const std::vector<Poly>& relations) {
  std::vector<std::string> rel_text;
  for (const Poly& r : relations) rel_text.push_back(r.to_string(vars));
  std::string spec = "Quot(GF(" + std::to_string(p) + "),[" + join(vars, ",") + "],[" + join(rel_text, ",") + "])";
  auto impl = std::make_shared<Impl>(factor_impl(p, vars, relations, spec));
  impl->finish_basis_form();
  return FiniteRing(impl);
}

FiniteRing FiniteRing::product(const std::vector<FiniteRing>& factors) {
  if (factors.empty()) throw InvalidArgument("Prod needs at least one factor");
  auto impl = make_impl();
  impl->kind = Impl::Kind::Product;
  std::vector<std::string> specs;
  bool all_factor_form = true;
  double card = 1;
  for (const FiniteRing& f : factors) card *= static_cast<double>(f.size());
  if (card > kMaxCardinality) throw BoundExceeded("cardinality bound exceeded: ring has more than 4096 elements");
  std::vector<FiniteRing> flat;
  for (const FiniteRing& f : factors) {
    if (f.impl_->kind == Impl::Kind::Product) {
      flat.insert(flat.end(), f.impl_->components.begin(), f.impl_->components.end());
    } else {
      if (f.impl_->kind == Impl::Kind::Table) throw Unsupported("Prod needs rings given by ring specs");
      flat.push_back(f);
    }
    specs.push_back(f.spec());
  }
  impl->spec = "Prod(" + join(specs, ",") + ")";
  std::size_t total = 0;
  for (const FiniteRing& f : flat) total += f.impl_->orders.size();
  impl->structure.assign(total, std::vector<Coords>(total, Coords(total, 0)));
  std::size_t offset = 0;
  for (const FiniteRing& f : flat) {
    const Impl& c = *f.impl_;
    std::size_t r = c.orders.size();
    impl->component_offsets.push_back(offset);
    for (std::size_t i = 0; i < r; ++i) {
      impl->orders.push_back(c.orders[i]);
      impl->one_coords.push_back(c.one_coords[i]);
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < r; ++k) impl->structure[offset + i][offset + j][offset + k] = c.structure[i][j][k];
    }
    if (c.factors.empty()) all_factor_form = false;
    offset += r;
  }
  if (all_factor_form)
    for (const FiniteRing& f : flat) impl->factors.push_back(f.impl_->factors.front());
  impl->components = std::move(flat);
  impl->finish_basis_form();
  return FiniteRing(impl);
}

FiniteRing FiniteRing::parse(std::string_view spec) {
  TokenStream ts(tokenize(spec));
  FiniteRing r = parse(ts);
  if (!ts.at_end()) ts.fail("trailing input '" + ts.peek().text + "'");
  return r;
}

FiniteRing FiniteRing::parse(TokenStream& ts) {
  const Token& head = ts.expect_identifier();
  std::string name = head.text;
  ts.expect_symbol("(");
  FiniteRing result;
  if (name == "Zmod") {
    long m = ts.expect_integer();
    if (m < 1) throw ParseError("Zmod needs a positive modulus", head.pos);
    result = zmod(static_cast<unsigned long>(m));
  } else if (name == "GF") {
    long p = ts.expect_integer();
    long k = 1;
    if (ts.accept_symbol(",")) k = ts.expect_integer();
    if (p < 2 || k < 1) throw ParseError("GF needs a prime and a positive degree", head.pos);
    result = galois_field(static_cast<unsigned>(p), static_cast<unsigned>(k));
  } else if (name == "Quot") {
    FiniteRing base = parse(ts);
    if (base.factors().size() != 1 || !base.factors().front().vars.empty())
      throw ParseError("Quot of a finite ring needs a prime field GF(p) as base", head.pos);
    unsigned p = base.factors().front().p;
    ts.expect_symbol(",");
    ts.expect_symbol("[");
    std::vector<std::string> vars;
    while (!ts.is_symbol("]")) {
      const Token& v = ts.expect_identifier();
      if (std::find(vars.begin(), vars.end(), v.text) != vars.end())
        throw ParseError("duplicate variable " + v.text, v.pos);
      vars.push_back(v.text);
      if (!ts.accept_symbol(",")) break;
    }
    ts.expect_symbol("]");
    ts.expect_symbol(",");
    ts.expect_symbol("[");
    std::vector<Poly> rels;
    while (!ts.is_symbol("]")) {
      rels.push_back(parse_poly(ts, vars, Field::rationals()));
      if (!ts.accept_symbol(",")) break;
    }
    ts.expect_symbol("]");
    result = quotient(p, vars, rels);
  } else if (name == "Prod") {
    std::vector<FiniteRing> parts{parse(ts)};
    while (ts.accept_symbol(",")) parts.push_back(parse(ts));
    result = product(parts);
  } else {
    throw ParseError("unknown ring constructor " + name, head.pos);
  }
  ts.expect_symbol(")");
  return result;
}

const std::string& FiniteRing::spec() const { return impl_->spec; }
std::size_t FiniteRing::size() const { return impl_->size; }
Elem FiniteRing::one() const { return impl_->one; }
unsigned long FiniteRing::characteristic() const { return impl_->characteristic; }

Elem FiniteRing::add(Elem a, Elem b) const { return impl_->add(a, b); }
Elem FiniteRing::sub(Elem a, Elem b) const { return impl_->add(a, impl_->neg(b)); }
Elem FiniteRing::neg(Elem a) const { return impl_->neg(a); }
Elem FiniteRing::mul(Elem a, Elem b) const { return impl_->mul(a, b); }

Elem FiniteRing::pow(Elem a, unsigned long e) const {
  Elem result = one();
  Elem base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

Elem FiniteRing::from_integer(const mpz_class& n) const {
  unsigned long c = characteristic();
  mpz_class r = n % c;
  if (r < 0) r += c;
  unsigned long k = r.get_ui();
  Elem result = 0;
  Elem base = one();
  while (k) {
    if (k & 1) result = add(result, base);
    k >>= 1;
    if (k) base = add(base, base);
  }
  return result;
}

std::optional<Elem> FiniteRing::from_rational(const mpq_class& q) const {
  Elem den = from_integer(q.get_den());
  auto inv = inverse(den);
  if (!inv) return std::nullopt;
  return mul(from_integer(q.get_num()), *inv);
}

std::optional<Elem> FiniteRing::inverse(Elem a) const {
  if (a == one()) return one();
  for (std::size_t b = 0; b < size(); ++b)
    if (mul(a, static_cast<Elem>(b)) == one()) return static_cast<Elem>(b);
  return std::nullopt;
}

bool FiniteRing::is_nilpotent(Elem a) const {
  return std::binary_search(impl_->nilradical.begin(), impl_->nilradical.end(), a);
}

const std::vector<Elem>& FiniteRing::nilradical() const { return impl_->nilradical; }

const std::vector<RingFactor>& FiniteRing::factors() const { return impl_->factors; }

std::vector<Poly> FiniteRing::factor_polys(Elem a) const {
  if (impl_->factors.empty()) throw Unsupported("ring " + spec() + " has no polynomial factor description");
  Coords c = impl_->decode(a);
  std::vector<Poly> out;
  std::size_t offset = 0;
  for (const RingFactor& f : impl_->factors) {
    Poly q(Field::rationals(), f.vars.size());
    for (std::size_t i = 0; i < f.basis.size(); ++i)
      if (c[offset + i]) q += Poly::term(Field::rationals(), f.vars.size(), f.basis[i], c[offset + i]);
    out.push_back(q);
    offset += f.basis.size();
  }
  return out;
}

Elem FiniteRing::from_factor_polys(const std::vector<Poly>& polys) const {
  const auto& fs = impl_->factors;
  if (fs.empty()) throw Unsupported("ring " + spec() + " has no polynomial factor description");
  if (polys.size() != fs.size()) throw InvalidArgument("wrong number of factor components");
  Coords c(impl_->orders.size(), 0);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    Poly q = fs[k].ideal.reduce(polys[k].over(Field::prime(fs[k].p)));
    for (const Term& t : q.terms()) {
      auto it = std::find(fs[k].basis.begin(), fs[k].basis.end(), t.mono);
      c[offset + static_cast<std::size_t>(it - fs[k].basis.begin())] = t.coeff.get_num().get_ui();
    }
    offset += fs[k].basis.size();
  }
  return impl_->encode(c);
}

std::string FiniteRing::format(Elem a) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case Impl::Kind::Integers:
      return std::to_string(im.decode(a)[0]);
    case Impl::Kind::Factor: {
      Poly q = factor_polys(a).front();
      return q.to_string(im.factors.front().vars);
    }
    case Impl::Kind::Product: {
      Coords c = im.decode(a);
      std::vector<std::string> parts;
      for (std::size_t k = 0; k < im.components.size(); ++k) {
        const FiniteRing& comp = im.components[k];
        Coords sub(c.begin() + static_cast<long>(im.component_offsets[k]),
                   c.begin() + static_cast<long>(im.component_offsets[k] + comp.impl_->orders.size()));
        parts.push_back(comp.format(comp.impl_->encode(sub)));
      }
      return "(" + join(parts, ", ") + ")";
    }
    case Impl::Kind::Table:
      return im.labels[a];
  }
  return {};
}

Elem FiniteRing::parse_element(std::string_view text) const {
  TokenStream ts(tokenize(text));
  Elem e = parse_element(ts);
  if (!ts.at_end()) ts.fail("trailing input '" + ts.peek().text + "'");
  return e;
}

Elem FiniteRing::parse_element(TokenStream& ts) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case Impl::Kind::Integers: {
      Poly q = parse_poly(ts, {}, Field::rationals());
      return evaluate(q, {});
    }
    case Impl::Kind::Factor: {
      const RingFactor& f = im.factors.front();
      SourcePos at = ts.peek().pos;
      Poly q = parse_poly(ts, f.vars, Field::rationals());
      try {
        return from_factor_polys({q});
      } catch (const DivisionByZero&) {
        throw ParseError("coefficient not defined in " + spec(), at);
      }
    }
    case Impl::Kind::Product: {
      ts.expect_symbol("(");
      Coords c;
      for (std::size_t k = 0; k < im.components.size(); ++k) {
        if (k) ts.expect_symbol(",");
        const FiniteRing& comp = im.components[k];
        Coords sub = comp.impl_->decode(comp.parse_element(ts));
        c.insert(c.end(), sub.begin(), sub.end());
      }
      ts.expect_symbol(")");
      return im.encode(c);
    }
    case Impl::Kind::Table: {
      const Token& t = ts.peek();
      for (std::size_t i = 0; i < im.labels.size(); ++i)
        if (im.labels[i] == t.text) {
          ts.next();
          return static_cast<Elem>(i);
        }
      ts.fail("elements of " + spec() + " are read by label");
    }
  }
  return 0;
}

Elem FiniteRing::evaluate(const Poly& poly, const std::vector<Elem>& images) const {
  Elem acc = 0;
  for (const Term& t : poly.terms()) {
    auto c = from_rational(t.coeff);
    if (!c) throw DomainMismatch("coefficient " + rational_to_string(t.coeff) + " has no image in " + spec());
    Elem m = *c;
    for (std::size_t v = 0; v < poly.nvars() && m != 0; ++v)
      if (t.mono[v]) m = mul(m, pow(images.at(v), t.mono[v]));
    acc = add(acc, m);
  }
  return acc;
}

namespace {

std::vector<Elem> additive_closure(const FiniteRing& R, const std::vector<Elem>& gens) {
  std::vector<char> in(R.size(), 0);
  std::vector<Elem> members{0};
  in[0] = 1;
  std::vector<Elem> steps;
  for (Elem g : gens)
    if (g != 0) steps.push_back(g);
  for (std::size_t i = 0; i < members.size(); ++i)
    for (Elem g : steps) {
      Elem s = R.add(members[i], g);
      if (!in[s]) {
        in[s] = 1;
        members.push_back(s);
      }
    }
  std::sort(members.begin(), members.end());
  return members;
}

}  // namespace

std::vector<Elem> FiniteRing::ideal_generated(const std::vector<Elem>& gens) const {
  std::vector<char> seen(size(), 0);
  std::vector<Elem> multiples;
  for (Elem g : gens)
    for (std::size_t r = 0; r < size(); ++r) {
      Elem x = mul(static_cast<Elem>(r), g);
      if (!seen[x]) {
        seen[x] = 1;
        multiples.push_back(x);
      }
    }
  return additive_closure(*this, multiples);
}

bool FiniteRing::is_ideal(const std::vector<Elem>& elems) const {
  if (elems.empty() || elems.front() != 0) return false;
  std::vector<char> in(size(), 0);
  for (Elem x : elems) in[x] = 1;
  for (Elem x : elems) {
    for (Elem y : elems)
      if (!in[add(x, y)]) return false;
    for (std::size_t r = 0; r < size(); ++r)
      if (!in[mul(static_cast<Elem>(r), x)]) return false;
  }
  return true;
}

std::vector<Elem> ideal_product(const FiniteRing& R, const std::vector<Elem>& I, const std::vector<Elem>& J) {
  std::vector<char> seen(R.size(), 0);
  std::vector<Elem> prods;
  for (Elem x : I)
    for (Elem y : J) {
      Elem z = R.mul(x, y);
      if (!seen[z]) {
        seen[z] = 1;
        prods.push_back(z);
      }
    }
  return additive_closure(R, prods);
}

unsigned FiniteRing::nilpotency_exponent(const std::vector<Elem>& ideal) const {
  std::vector<Elem> power = ideal;
  unsigned e = 1;
  while (!(power.size() == 1 && power.front() == 0)) {
    std::vector<Elem> next = ideal_product(*this, power, ideal);
    if (next == power) return 0;
    power = std::move(next);
    ++e;
  }
  return e;
}

FiniteRing::Quotient FiniteRing::quotient_by(const std::vector<Elem>& ideal) const {
  std::size_t n = size();
  std::vector<Elem> rep(n);
  for (std::size_t x = 0; x < n; ++x) {
    Elem best = static_cast<Elem>(x);
    for (Elem i : ideal) best = std::min(best, add(static_cast<Elem>(x), i));
    rep[x] = best;
  }
  std::vector<Elem> reps(rep);
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  std::size_t m = reps.size();
  if (m > kMaxTableCardinality) throw BoundExceeded("quotient too large for table form");
  std::vector<Elem> index(n);
  for (std::size_t x = 0; x < n; ++x)
    index[x] = static_cast<Elem>(std::lower_bound(reps.begin(), reps.end(), rep[x]) - reps.begin());

  // a small generating set for the spec string
  std::vector<Elem> gens;
  std::vector<Elem> span{0};
  for (Elem x : ideal)
    if (!std::binary_search(span.begin(), span.end(), x)) {
      gens.push_back(x);
      span = ideal_generated(gens);
    }
  std::vector<std::string> gen_text;
  for (Elem g : gens) gen_text.push_back(format(g));

  auto impl = make_impl();
  impl->kind = Impl::Kind::Table;
  impl->spec = spec() + "/(" + join(gen_text, ",") + ")";
  impl->size = m;
  impl->add_table.resize(m * m);
  impl->mul_table.resize(m * m);
  impl->neg_table.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    impl->labels.push_back(format(reps[a]));
    impl->neg_table[a] = static_cast<std::uint16_t>(index[neg(reps[a])]);
    for (std::size_t b = 0; b < m; ++b) {
      impl->add_table[a * m + b] = static_cast<std::uint16_t>(index[add(reps[a], reps[b])]);
      impl->mul_table[a * m + b] = static_cast<std::uint16_t>(index[mul(reps[a], reps[b])]);
    }
  }
  impl->one = index[one()];
  impl->finish_common();
  return {FiniteRing(impl), index};
}

FiniteRing FiniteRing::subring(const std::vector<Elem>& elems, std::string spec_text) const {
  std::size_t m = elems.size();
  if (m == 0 || elems.front() != 0) throw InvalidArgument("subring must contain zero");
  if (m > kMaxTableCardinality) throw BoundExceeded("subring too large for table form");
  auto index_of = [&](Elem x) {
    auto it = std::lower_bound(elems.begin(), elems.end(), x);
    if (it == elems.end() || *it != x) throw InvalidArgument("subset is not closed under the ring operations");
    return static_cast<std::uint16_t>(it - elems.begin());
  };
  auto impl = make_impl();
  impl->kind = Impl::Kind::Table;
  impl->spec = std::move(spec_text);
  impl->size = m;
  impl->add_table.resize(m * m);
  impl->mul_table.resize(m * m);
  impl->neg_table.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    impl->labels.push_back(format(elems[a]));
    impl->neg_table[a] = index_of(neg(elems[a]));
    for (std::size_t b = 0; b < m; ++b) {
      impl->add_table[a * m + b] = index_of(add(elems[a], elems[b]));
      impl->mul_table[a * m + b] = index_of(mul(elems[a], elems[b]));
    }
  }
  impl->one = index_of(one());
  impl->finish_common();
  return FiniteRing(impl);
}

void FiniteRing::verify_axioms(bool exhaustive) const {
  const Impl& im = *impl_;
  auto fail = [&](const std::string& what) { throw InvalidArgument("spec does not define a ring: " + what + " fails"); };
  if (im.kind != Impl::Kind::Table) {
    std::size_t r = im.orders.size();
    auto unit = [&](std::size_t i) {
      Coords c(r, 0);
      c[i] = 1;
      return c;
    };
    for (std::size_t i = 0; i < r; ++i) {
      if (im.coord_mul(im.one_coords, unit(i)) != unit(i)) fail("unit law");
      for (std::size_t j = 0; j < r; ++j) {
        if (im.structure[i][j] != im.structure[j][i]) fail("commutativity");
        for (std::size_t k = 0; k < r; ++k) {
          if (im.orders[i] * im.structure[i][j][k] % im.orders[k] != 0) fail("torsion compatibility");
          if (im.coord_mul(im.coord_mul(unit(i), unit(j)), unit(k)) != im.coord_mul(unit(i), im.coord_mul(unit(j), unit(k))))
            fail("associativity");
        }
      }
    }
  }
  if (!exhaustive || size() > 256) return;
  std::size_t n = size();
  for (Elem a = 0; a < n; ++a) {
    if (mul(one(), a) != a || add(0, a) != a || add(a, neg(a)) != 0) fail("identity law");
    for (Elem b = 0; b < n; ++b) {
      if (mul(a, b) != mul(b, a) || add(a, b) != add(b, a)) fail("commutativity");
      for (Elem c = 0; c < n; ++c) {
        if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) fail("distributivity");
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) fail("associativity");
        if (add(add(a, b), c) != add(a, add(b, c))) fail("additive associativity");
      }
    }
  }
}

}  // namespace adic
