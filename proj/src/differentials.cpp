#include "adic/differentials.hpp"

#include <algorithm>
#include <numeric>

#include "adic/error.hpp"
#include "adic/padic.hpp"

namespace adic {

namespace {

constexpr std::size_t kMaxMinors = 20000;

void require_field_base(const Presentation& pres) {
  if (!pres.coefficients().is_field())
    throw Unsupported("the cotangent classifier needs a field of coefficients (Q_p or F_p), got " +
                      pres.coefficients().to_string());
}

GroebnerLimits scaled_limits(const Presentation& pres, GroebnerLimits limits) {
  limits.max_degree = std::min(limits.max_degree, std::max(4 * pres.degree_cap(), 32u));
  return limits;
}

ModVec zero_vec(const Presentation& pres, std::size_t rank) { return ModVec(rank, pres.zero()); }

/// Relative Jacobian rows: d f_i with respect to the adjoined variables, reduced mod I.
std::vector<ModVec> jacobian_rows(const Presentation& pres) {
  std::vector<ModVec> rows;
  std::size_t nb = pres.nbase();
  std::size_t na = pres.vars().size();
  for (const Poly& f : pres.relations()) {
    ModVec row(na);
    for (std::size_t j = 0; j < na; ++j) row[j] = pres.normal_form(f.derivative(nb + j));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Generators I_total * e_j of I * P^rank.
std::vector<ModVec> ideal_times_free(const Presentation& pres, std::size_t rank) {
  std::vector<ModVec> out;
  for (const Poly& h : pres.groebner().basis())
    for (std::size_t j = 0; j < rank; ++j) {
      ModVec v = zero_vec(pres, rank);
      v[j] = h;
      out.push_back(std::move(v));
    }
  return out;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

Poly determinant(const Presentation& pres, const std::vector<ModVec>& m, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
  std::size_t k = rows.size();
  if (k == 0) return pres.one();
  if (k == 1) return m[rows[0]][cols[0]];
  Poly acc = pres.zero();
  std::vector<std::size_t> rest(rows.begin() + 1, rows.end());
  for (std::size_t c = 0; c < k; ++c) {
    const Poly& entry = m[rows[0]][cols[c]];
    if (entry.is_zero()) continue;
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < k; ++j)
      if (j != c) sub_cols.push_back(cols[j]);
    Poly term = pres.normal_form(entry * determinant(pres, m, rest, sub_cols));
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return pres.normal_form(acc);
}

/// Minors of size s of the p x n matrix, reduced mod I (zero minors dropped).
std::vector<Poly> minors(const Presentation& pres, const std::vector<ModVec>& m, std::size_t ncols, std::size_t s) {
  std::vector<Poly> out;
  if (s == 0) return {pres.one()};
  auto rs = subsets(m.size(), s);
  auto cs = subsets(ncols, s);
  if (rs.size() * cs.size() > kMaxMinors) throw BoundExceeded("too many minors for the Fitting ideal test");
  for (const auto& r : rs)
    for (const auto& c : cs) {
      Poly d = determinant(pres, m, r, c);
      if (!d.is_zero()) out.push_back(d);
    }
  return out;
}

/// Least k with Fitt_k = (1) and whether Fitt_{k-1} vanishes in B.
std::pair<std::size_t, bool> fitting_data(const Presentation& pres, const std::vector<ModVec>& jac, std::size_t n,
                                          const GroebnerLimits& limits) {
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<Poly> gens = minors(pres, jac, n, n - k);
    std::vector<Poly> all = pres.groebner().basis();
    all.insert(all.end(), gens.begin(), gens.end());
    IdealBasis fk = IdealBasis::compute(all, pres.field(), pres.nvars(), limits);
    if (!fk.is_unit()) continue;
    bool free = k == 0 || minors(pres, jac, n, n - k + 1).empty();
    return {k, free};
  }
  return {n, false};  // unreachable: Fitt_n contains the empty minor 1
}

}  // namespace

KahlerModule kahler_differentials(const Presentation& pres, const GroebnerLimits& limits_in) {
  require_field_base(pres);
  GroebnerLimits limits = scaled_limits(pres, limits_in);
  KahlerModule km{pres, {}, jacobian_rows(pres), {}, false, 0, false};
  std::size_t n = pres.vars().size();
  for (const std::string& v : pres.vars()) km.generators.push_back("d" + v);
  std::vector<ModVec> gens = km.jacobian;
  auto extra = ideal_times_free(pres, n);
  gens.insert(gens.end(), extra.begin(), extra.end());
  km.relations = ModuleBasis::compute(gens, n, pres.field(), pres.nvars(), limits);
  km.zero = km.relations.is_everything();
  auto [k, free] = fitting_data(pres, km.jacobian, n, limits);
  km.fitting_rank = k;
  km.locally_free = free;
  return km;
}

CotangentComplexData naive_cotangent_complex(const Presentation& pres, const GroebnerLimits& limits_in) {
  require_field_base(pres);
  GroebnerLimits limits = scaled_limits(pres, limits_in);
  CotangentComplexData cc;
  cc.pres = pres;
  cc.omega = kahler_differentials(pres, limits_in);
  cc.jacobian = cc.omega.jacobian;
  cc.h0_zero = cc.omega.zero;
  std::size_t p = pres.relations().size();
  std::size_t n = pres.vars().size();
  if (p == 0) {
    cc.h_minus1_zero = true;
    return cc;
  }
  Field field = pres.field();
  std::size_t nv = pres.nvars();

  // kernel of the Jacobian map B^p -> B^n
  std::vector<ModVec> kgens;
  for (const ModVec& row : cc.jacobian) kgens.push_back(row);
  auto extra = ideal_times_free(pres, n);
  kgens.insert(kgens.end(), extra.begin(), extra.end());
  std::vector<ModVec> ksyz = syzygies(kgens, n, field, nv, limits);
  for (const ModVec& s : ksyz) {
    ModVec head(s.begin(), s.begin() + static_cast<long>(p));
    for (Poly& c : head) c = pres.normal_form(c);
    if (std::all_of(head.begin(), head.end(), [](const Poly& c) { return c.is_zero(); })) continue;
    cc.kernel_generators.push_back(std::move(head));
  }

  // relations of I/I^2: syzygies of (f_1..f_p, g_1..g_q) projected to the f part, plus I * P^p
  std::vector<ModVec> fg;
  for (const Poly& f : pres.relations()) fg.push_back({f});
  for (const Poly& g : pres.base_relations()) fg.push_back({g});
  std::vector<ModVec> rsyz = syzygies(fg, 1, field, nv, limits);
  std::vector<ModVec> rel_gens;
  for (const ModVec& s : rsyz) {
    ModVec head(s.begin(), s.begin() + static_cast<long>(p));
    for (Poly& c : head) c = pres.normal_form(c);
    if (std::all_of(head.begin(), head.end(), [](const Poly& c) { return c.is_zero(); })) continue;
    cc.conormal_relations.push_back(head);
    rel_gens.push_back(std::move(head));
  }
  auto ip = ideal_times_free(pres, p);
  rel_gens.insert(rel_gens.end(), ip.begin(), ip.end());
  ModuleBasis rel = ModuleBasis::compute(rel_gens, p, field, nv, limits);
  for (const ModVec& k : cc.kernel_generators)
    if (!rel.contains(k)) cc.kernel_witnesses.push_back(k);
  cc.h_minus1_zero = cc.kernel_witnesses.empty();
  return cc;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Etale:
      return "etale";
    case Verdict::Lisse:
      return "lisse";
    case Verdict::NonRamifie:
      return "non_ramifie";
    case Verdict::None:
      return "none";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

Classification classify_single(const Presentation& pres, const ClassifyOptions& options) {
  Classification c;
  c.degree_cap = pres.degree_cap();
  c.precision = pres.coefficients().kind == Coefficients::Kind::Padic ? pres.coefficients().precision : 0;
  try {
    CotangentComplexData cc = naive_cotangent_complex(pres, options.limits);
    c.h_minus1 = cc.kernel_witnesses.size();
    c.h0 = cc.omega.zero ? 0 : std::max<std::size_t>(cc.omega.fitting_rank, 1);
    c.non_ramifie = cc.h0_zero;
    c.etale = cc.h_minus1_zero && cc.h0_zero;
    c.lisse = cc.h_minus1_zero && cc.omega.locally_free;
    if (c.etale)
      c.verdict = Verdict::Etale;
    else if (c.lisse)
      c.verdict = Verdict::Lisse;
    else if (c.non_ramifie)
      c.verdict = Verdict::NonRamifie;
    else
      c.verdict = Verdict::None;
  } catch (const BoundExceeded& e) {
    c.verdict = Verdict::Inconclusive;
    c.flags.push_back(std::string("bound_exceeded: ") + e.what());
  }
  return c;
}

}  // namespace

Classification classify_morphism(const Presentation& pres, const ClassifyOptions& options) {
  require_field_base(pres);
  if (options.pieces.empty()) return classify_single(pres, options);
  Classification total;
  total.etale = total.lisse = total.non_ramifie = true;
  total.degree_cap = pres.degree_cap();
  total.pieces = options.pieces.size();
  bool inconclusive = false;
  for (const Presentation& piece : options.pieces) {
    Classification c = classify_single(piece, options);
    if (c.verdict == Verdict::Inconclusive) inconclusive = true;
    total.etale = total.etale && c.etale;
    total.lisse = total.lisse && c.lisse;
    total.non_ramifie = total.non_ramifie && c.non_ramifie;
    total.h_minus1 = std::max(total.h_minus1, c.h_minus1);
    total.h0 = std::max(total.h0, c.h0);
    total.precision = c.precision;
    total.flags.insert(total.flags.end(), c.flags.begin(), c.flags.end());
  }
  total.flags.push_back("covering_conjunction");
  if (inconclusive)
    total.verdict = Verdict::Inconclusive;
  else if (total.etale)
    total.verdict = Verdict::Etale;
  else if (total.lisse)
    total.verdict = Verdict::Lisse;
  else if (total.non_ramifie)
    total.verdict = Verdict::NonRamifie;
  else
    total.verdict = Verdict::None;
  return total;
}

// ----------------------------------------------------------------- de Rham

namespace {

/// Sign and merged subset for dx_j ^ dx_S, or nullopt when j is in S.
std::optional<std::pair<int, std::vector<std::size_t>>> wedge_var(std::size_t j, const std::vector<std::size_t>& s) {
  if (std::find(s.begin(), s.end(), j) != s.end()) return std::nullopt;
  std::size_t before = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](std::size_t x) { return x < j; }));
  std::vector<std::size_t> merged = s;
  merged.insert(merged.begin() + static_cast<long>(before), j);
  return std::make_pair(before % 2 == 0 ? 1 : -1, merged);
}

std::size_t index_of(const std::vector<std::vector<std::size_t>>& basis, const std::vector<std::size_t>& s) {
  return static_cast<std::size_t>(std::find(basis.begin(), basis.end(), s) - basis.begin());
}

}  // namespace

std::string DeRhamComplexData::basis_name(unsigned k, std::size_t index) const {
  const auto& s = pieces[k].basis[index];
  if (s.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "^d" : "d") + pres.vars()[s[i]];
  return out;
}

ModVec DeRhamComplexData::differential(unsigned k, const ModVec& form) const {
  const auto& src = pieces[k].basis;
  const auto& dst = pieces[k + 1].basis;
  ModVec out(dst.size(), pres.zero());
  std::size_t nb = pres.nbase();
  for (std::size_t a = 0; a < src.size(); ++a) {
    if (form[a].is_zero()) continue;
    for (std::size_t j = 0; j < pres.vars().size(); ++j) {
      auto w = wedge_var(j, src[a]);
      if (!w) continue;
      Poly d = form[a].derivative(nb + j);
      if (d.is_zero()) continue;
      std::size_t t = index_of(dst, w->second);
      out[t] = w->first > 0 ? out[t] + d : out[t] - d;
    }
  }
  return out;
}

DeRhamComplexData de_rham_complex(const Presentation& pres, unsigned top_degree, const GroebnerLimits& limits_in) {
  require_field_base(pres);
  GroebnerLimits limits = scaled_limits(pres, limits_in);
  DeRhamComplexData dr;
  dr.pres = pres;
  dr.top_degree = top_degree;
  std::size_t n = pres.vars().size();
  Field field = pres.field();
  std::size_t nb = pres.nbase();
  // relation forms d f_i as coefficient vectors on the 1-subsets
  std::vector<std::vector<Poly>> df;
  for (const Poly& f : pres.relations()) {
    std::vector<Poly> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(f.derivative(nb + j));
    df.push_back(std::move(row));
  }
  for (unsigned k = 0; k <= top_degree + 1; ++k) {
    DeRhamComplexData::Piece piece;
    piece.degree = k;
    piece.basis = subsets(n, k);
    std::size_t r = piece.basis.size();
    std::vector<ModVec> gens = r ? ideal_times_free(pres, r) : std::vector<ModVec>{};
    if (k >= 1) {
      for (const auto& t : subsets(n, k - 1))
        for (const auto& row : df) {
          ModVec v(r, pres.zero());
          for (std::size_t j = 0; j < n; ++j) {
            auto w = wedge_var(j, t);
            if (!w || row[j].is_zero()) continue;
            std::size_t idx = index_of(piece.basis, w->second);
            v[idx] = w->first > 0 ? v[idx] + row[j] : v[idx] - row[j];
          }
          gens.push_back(std::move(v));
        }
    }
    piece.relations = ModuleBasis::compute(gens, r, field, pres.nvars(), limits);
    piece.zero = r == 0 || piece.relations.is_everything();
    dr.pieces.push_back(std::move(piece));
  }

  // d o d = 0 on monomial generators, and d maps relations into relations
  auto monos = monomials_up_to(pres.nvars(), pres.degree_cap());
  for (unsigned k = 0; k + 2 <= top_degree + 1 && k + 2 < dr.pieces.size(); ++k) {
    for (std::size_t a = 0; a < dr.pieces[k].basis.size(); ++a)
      for (const Monomial& m : monos) {
        ModVec form(dr.pieces[k].basis.size(), pres.zero());
        form[a] = Poly::term(field, pres.nvars(), m, 1);
        ModVec dd = dr.reduce(k + 2, dr.differential(k + 1, dr.differential(k, form)));
        ++dr.checked_generators;
        if (!std::all_of(dd.begin(), dd.end(), [](const Poly& c) { return c.is_zero(); })) ++dr.violations;
      }
  }
  for (unsigned k = 0; k <= top_degree && k + 1 < dr.pieces.size(); ++k)
    for (const ModVec& g : dr.pieces[k].relations.elements()) {
      ModVec image = dr.reduce(k + 1, dr.differential(k, g));
      ++dr.checked_generators;
      if (!std::all_of(image.begin(), image.end(), [](const Poly& c) { return c.is_zero(); })) ++dr.violations;
    }
  dr.pieces.resize(top_degree + 1);
  return dr;
}

// ------------------------------------------------------------- integration

EtaleIntegral etale_integration(const Poly& omega, const Poly& f, const Coefficients& coeffs) {
  if (coeffs.kind != Coefficients::Kind::Padic)
    throw Unsupported("integration needs a characteristic-0 base, got " + coeffs.to_string());
  if (omega.field().characteristic != 0 || f.field().characteristic != 0)
    throw DomainMismatch("integration needs rational coefficients");
  std::size_t n = omega.nvars();
  if (n == 0 || f.nvars() + 1 != n) throw InvalidArgument("omega must live in base variables plus T");
  std::size_t t = n - 1;
  Field q = Field::rationals();
  std::vector<std::size_t> keep(f.nvars());
  std::iota(keep.begin(), keep.end(), 0);
  Poly fw = f.remap(n, keep);
  Poly T = Poly::variable(q, n, t);

  EtaleIntegral out;
  out.precision = coeffs.precision;
  out.h = Poly(q, n);
  out.quotient = Poly(q, n);
  unsigned degree = omega.degree_in(t);
  for (unsigned i = 0; i <= degree; ++i) {
    // a_i = coefficient of T^i, a polynomial in the base variables
    Poly a(q, n);
    for (const Term& term : omega.terms())
      if (term.mono[t] == i) {
        Monomial m = term.mono;
        m.set(t, 0);
        a += Poly::term(q, n, m, term.coeff);
      }
    if (a.is_zero()) continue;
    if ((i + 1) % coeffs.p == 0) {
      out.precision_loss = true;
      out.lossy_degrees.push_back(i + 1);
      out.precision = std::min(out.precision, coeffs.precision - valuation(mpz_class(i + 1), coeffs.p));
    }
    mpq_class inv(1, i + 1);
    out.h += (a * (T.pow(i + 1) - fw.pow(i + 1))).scaled(inv);
    Poly geometric(q, n);
    for (unsigned j = 0; j <= i; ++j) geometric += T.pow(j) * fw.pow(i - j);
    out.quotient += (a * geometric).scaled(inv);
  }
  return out;
}

}  // namespace adic
