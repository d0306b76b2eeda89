#include "adic/groebner.hpp"

#include <algorithm>
#include <set>

#include "adic/error.hpp"

namespace adic {

namespace {

struct Lead {
  std::size_t pos;
  Monomial mono;
  mpq_class coeff;
};

bool lead_of(const ModVec& v, Lead& out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_zero()) {
      out = {i, v[i].leading().mono, v[i].leading().coeff};
      return true;
    }
  }
  return false;
}

bool is_zero_vec(const ModVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

unsigned vec_degree(const ModVec& v) {
  unsigned d = 0;
  for (const auto& p : v) d = std::max(d, p.total_degree());
  return d;
}

ModVec vec_mul_term(const ModVec& v, const Monomial& m, const mpq_class& c) {
  ModVec r;
  r.reserve(v.size());
  for (const auto& p : v) r.push_back(p.mul_term(m, c));
  return r;
}

ModVec vec_scale(const ModVec& v, const mpq_class& c) {
  ModVec r;
  for (const auto& p : v) r.push_back(p.scaled(c));
  return r;
}

ModVec vec_sub(const ModVec& a, const ModVec& b) {
  ModVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

ModVec monic_vec(const ModVec& v, Field f) {
  Lead l;
  if (!lead_of(v, l)) return v;
  return vec_scale(v, f.inv(l.coeff));
}

struct Reducer {
  const std::vector<ModVec>& basis;
  std::vector<Lead> leads;
  Field field;

  explicit Reducer(const std::vector<ModVec>& b, Field f) : basis(b), field(f) {
    for (const auto& g : basis) {
      Lead l;
      lead_of(g, l);
      leads.push_back(l);
    }
  }

  void add(std::size_t idx) {
    Lead l;
    lead_of(basis[idx], l);
    if (leads.size() <= idx) leads.resize(idx + 1);
    leads[idx] = l;
  }

  ModVec reduce(ModVec v, std::size_t skip = static_cast<std::size_t>(-1)) const {
    for (std::size_t pos = 0; pos < v.size(); ++pos) {
      Poly remainder(v[pos].field(), v[pos].nvars());
      std::vector<Term> kept;
      Poly p = v[pos];
      while (!p.is_zero()) {
        const Term lt = p.leading();
        bool reduced = false;
        for (std::size_t k = 0; k < leads.size(); ++k) {
          if (k == skip || leads[k].pos != pos) continue;
          if (!leads[k].mono.divides(lt.mono)) continue;
          Monomial q = lt.mono / leads[k].mono;
          mpq_class c = field.div(lt.coeff, leads[k].coeff);
          const ModVec& g = basis[k];
          p = p - g[pos].mul_term(q, c);
          for (std::size_t j = pos + 1; j < v.size(); ++j)
            if (!g[j].is_zero()) v[j] = v[j] - g[j].mul_term(q, c);
          reduced = true;
          break;
        }
        if (!reduced) {
          kept.push_back(lt);
          p = p - Poly::term(p.field(), p.nvars(), lt.mono, lt.coeff);
        }
      }
      Poly r(v[pos].field(), v[pos].nvars());
      for (const auto& t : kept) r += Poly::term(r.field(), r.nvars(), t.mono, t.coeff);
      v[pos] = std::move(r);
    }
    return v;
  }
};

struct Pair {
  std::size_t i, j;
  Monomial lcm;
};

}  // namespace

ModuleBasis ModuleBasis::compute(std::vector<ModVec> generators, std::size_t rank, Field field,
                                 std::size_t nvars, const GroebnerLimits& limits) {
  ModuleBasis mb;
  mb.rank_ = rank;
  mb.field_ = field;
  mb.nvars_ = nvars;
  for (auto& g : generators) {
    if (g.size() != rank) throw InvalidArgument("module generator has wrong rank");
    for (auto& p : g) {
      if (p.field() != field) p = p.over(field);
      if (p.nvars() != nvars) p = p.remap(nvars, [&] {
          std::vector<std::size_t> id(p.nvars());
          for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
          return id;
        }());
    }
  }

  std::vector<ModVec> basis;
  Reducer red(basis, field);
  std::vector<Pair> pairs;
  std::set<std::pair<std::size_t, std::size_t>> pending;
  std::size_t processed = 0;

  auto add_element = [&](ModVec v) {
    v = monic_vec(v, field);
    if (vec_degree(v) > limits.max_degree) throw BoundExceeded("Groebner degree bound exceeded");
    basis.push_back(std::move(v));
    red.add(basis.size() - 1);
    std::size_t n = basis.size() - 1;
    if (basis.size() > limits.max_basis) throw BoundExceeded("Groebner basis size bound exceeded");
    for (std::size_t i = 0; i < n; ++i) {
      if (red.leads[i].pos != red.leads[n].pos) continue;
      if (rank == 1 && red.leads[i].mono.coprime(red.leads[n].mono)) continue;
      pairs.push_back({i, n, Monomial::lcm(red.leads[i].mono, red.leads[n].mono)});
      pending.insert({i, n});
    }
  };

  for (auto& g : generators) {
    ModVec r = red.reduce(g);
    if (!is_zero_vec(r)) add_element(std::move(r));
  }

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      return grevlex_compare(a.lcm, b.lcm) < 0;
    });
    Pair pr = *best;
    pairs.erase(best);
    pending.erase({pr.i, pr.j});
    if (++processed > limits.max_pairs) throw BoundExceeded("Groebner pair bound exceeded");

    // Chain criterion: skip when some k with the same position divides the lcm and
    // both pairs (i,k), (j,k) are already treated.
    bool skip = false;
    for (std::size_t k = 0; k < basis.size() && !skip; ++k) {
      if (k == pr.i || k == pr.j || red.leads[k].pos != red.leads[pr.i].pos) continue;
      if (!red.leads[k].mono.divides(pr.lcm)) continue;
      auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
      if (!pending.count(key(pr.i, k)) && !pending.count(key(pr.j, k))) skip = true;
    }
    if (skip) continue;

    const Lead& li = red.leads[pr.i];
    const Lead& lj = red.leads[pr.j];
    ModVec s = vec_sub(vec_mul_term(basis[pr.i], pr.lcm / li.mono, field.inv(li.coeff)),
                       vec_mul_term(basis[pr.j], pr.lcm / lj.mono, field.inv(lj.coeff)));
    ModVec r = red.reduce(s);
    if (!is_zero_vec(r)) add_element(std::move(r));
  }

  // Interreduce: drop redundant leads, then fully reduce each survivor by the others.
  std::vector<ModVec> minimal;
  std::vector<Lead> min_leads;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j || red.leads[j].pos != red.leads[i].pos) continue;
      if (red.leads[j].mono.divides(red.leads[i].mono) &&
          (red.leads[j].mono != red.leads[i].mono || j < i))
        redundant = true;
    }
    if (!redundant) minimal.push_back(basis[i]);
  }
  std::vector<ModVec> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    Reducer others(minimal, field);
    reduced.push_back(monic_vec(others.reduce(minimal[i], i), field));
  }
  std::sort(reduced.begin(), reduced.end(), [](const ModVec& a, const ModVec& b) {
    Lead la, lb;
    lead_of(a, la);
    lead_of(b, lb);
    if (la.pos != lb.pos) return la.pos < lb.pos;
    return grevlex_compare(la.mono, lb.mono) < 0;
  });
  mb.basis_ = std::move(reduced);
  return mb;
}

ModVec ModuleBasis::reduce(const ModVec& v) const {
  Reducer red(basis_, field_);
  ModVec w = v;
  for (auto& p : w)
    if (p.field() != field_) p = p.over(field_);
  return red.reduce(std::move(w));
}

bool ModuleBasis::contains(const ModVec& v) const { return is_zero_vec(reduce(v)); }

bool ModuleBasis::is_everything() const {
  std::vector<bool> unit(rank_, false);
  for (const auto& g : basis_) {
    Lead l;
    if (lead_of(g, l) && l.mono.degree == 0) unit[l.pos] = true;
  }
  return std::all_of(unit.begin(), unit.end(), [](bool b) { return b; });
}

unsigned ModuleBasis::max_degree() const {
  unsigned d = 0;
  for (const auto& g : basis_) d = std::max(d, vec_degree(g));
  return d;
}

IdealBasis IdealBasis::compute(const std::vector<Poly>& generators, Field field, std::size_t nvars,
                               const GroebnerLimits& limits) {
  std::vector<ModVec> gens;
  for (const auto& g : generators) gens.push_back({g});
  ModuleBasis mb = ModuleBasis::compute(std::move(gens), 1, field, nvars, limits);
  IdealBasis ib(field, nvars);
  for (const auto& v : mb.elements()) ib.basis_.push_back(v[0]);
  return ib;
}

Poly IdealBasis::reduce(const Poly& p) const {
  std::vector<ModVec> b;
  b.reserve(basis_.size());
  for (const auto& g : basis_) b.push_back({g});
  Reducer red(b, field_);
  Poly q = p.field() == field_ ? p : p.over(field_);
  return red.reduce({q})[0];
}

bool IdealBasis::is_unit() const {
  return std::any_of(basis_.begin(), basis_.end(), [](const Poly& g) { return g.leading().mono.degree == 0; });
}

int IdealBasis::krull_dimension() const {
  if (is_unit()) return -1;
  int best = 0;
  std::size_t n = nvars_;
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    int size = __builtin_popcountll(mask);
    if (size <= best) continue;
    bool independent = true;
    for (const auto& g : basis_) {
      const Monomial& m = g.leading().mono;
      bool inside = true;
      for (std::size_t i = 0; i < n; ++i)
        if (m[i] != 0 && !(mask & (std::size_t(1) << i))) inside = false;
      if (inside) {
        independent = false;
        break;
      }
    }
    if (independent) best = size;
  }
  return best;
}

std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned max_degree, const std::vector<bool>& allowed) {
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto&& self, std::size_t var, unsigned remaining) -> void {
    if (var == nvars) {
      out.push_back(cur);
      return;
    }
    bool ok = allowed.empty() || allowed[var];
    unsigned top = ok ? remaining : 0;
    for (unsigned e = 0; e <= top; ++e) {
      cur.set(var, e);
      self(self, var + 1, remaining - e);
    }
    cur.set(var, 0);
  };
  rec(rec, 0, max_degree);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) < 0; });
  return out;
}

std::vector<Monomial> IdealBasis::standard_monomials(unsigned max_degree, const std::vector<bool>& allowed) const {
  std::vector<Monomial> out;
  for (const auto& m : monomials_up_to(nvars_, max_degree, allowed)) {
    bool standard = std::none_of(basis_.begin(), basis_.end(),
                                 [&](const Poly& g) { return g.leading().mono.divides(m); });
    if (standard) out.push_back(m);
  }
  return out;
}

long IdealBasis::vector_space_dimension(long bound) const {
  if (is_unit()) return 0;
  // Finite iff every variable has a pure power among the leading monomials.
  unsigned max_pow = 0;
  for (std::size_t v = 0; v < nvars_; ++v) {
    bool found = false;
    for (const auto& g : basis_) {
      const Monomial& m = g.leading().mono;
      if (m[v] == m.degree && m.degree > 0) {
        found = true;
        max_pow = std::max<unsigned>(max_pow, m.degree);
      }
    }
    if (!found) return -1;
  }
  unsigned cap = static_cast<unsigned>(max_pow * nvars_);
  auto sm = standard_monomials(cap);
  if (static_cast<long>(sm.size()) > bound) throw BoundExceeded("quotient dimension exceeds bound");
  return static_cast<long>(sm.size());
}

std::vector<ModVec> syzygies(const std::vector<ModVec>& vectors, std::size_t rank, Field field,
                             std::size_t nvars, const GroebnerLimits& limits) {
  std::size_t m = vectors.size();
  std::vector<ModVec> gens;
  for (std::size_t i = 0; i < m; ++i) {
    ModVec w(rank + m, Poly(field, nvars));
    for (std::size_t j = 0; j < rank; ++j) w[j] = vectors[i][j];
    w[rank + i] = Poly::constant(field, nvars, 1);
    gens.push_back(std::move(w));
  }
  ModuleBasis mb = ModuleBasis::compute(std::move(gens), rank + m, field, nvars, limits);
  std::vector<ModVec> out;
  for (const auto& g : mb.elements()) {
    bool first_zero = true;
    for (std::size_t j = 0; j < rank; ++j)
      if (!g[j].is_zero()) first_zero = false;
    if (!first_zero) continue;
    out.emplace_back(g.begin() + static_cast<long>(rank), g.end());
  }
  return out;
}

}  // namespace adic
