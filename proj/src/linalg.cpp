#include "adic/linalg.hpp"

#include <algorithm>

#include "adic/error.hpp"
#include "adic/padic.hpp"

namespace adic {

Matrix Matrix::from_columns(const std::vector<Vec>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw InvalidArgument("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = columns[j][i];
  }
  return m;
}

Vec Matrix::column(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

Vec Matrix::apply(const Vec& x, Field field) const {
  Vec y(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    mpq_class acc = 0;
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn(at(i, j)) != 0 && sgn(x[j]) != 0) acc += at(i, j) * x[j];
    y[i] = field.normalize(acc);
  }
  return y;
}

RowEchelon row_reduce(Matrix m, Field field) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && sgn(m.at(pivot, c)) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(r, j), m.at(pivot, j));
    mpq_class inv = field.inv(m.at(r, c));
    for (std::size_t j = c; j < m.cols(); ++j)
      if (sgn(m.at(r, j)) != 0) m.at(r, j) = field.mul(m.at(r, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m.at(i, c)) == 0) continue;
      mpq_class f = m.at(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (sgn(m.at(r, j)) != 0) m.at(i, j) = field.sub(m.at(i, j), field.mul(f, m.at(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m, Field field) { return row_reduce(m, field).pivots.size(); }

std::vector<Vec> kernel(const Matrix& m, Field field) {
  RowEchelon e = row_reduce(m, field);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = field.normalize(-e.reduced.at(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b, Field field) {
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  RowEchelon e = row_reduce(std::move(aug), field);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), 0);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced.at(r, m.cols());
  return x;
}

namespace {

std::size_t first_nonzero(const Vec& v, std::size_t from) {
  while (from < v.size() && sgn(v[from]) == 0) ++from;
  return from;
}

void axpy(Vec& v, const mpq_class& f, const Vec& w) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(w[i]) != 0) v[i] -= f * w[i];
}

}  // namespace

void IntegralSpan::add(Vec v) {
  if (v.size() != dim_) throw InvalidArgument("vector length mismatch");
  std::size_t k = 0;
  std::size_t lead = first_nonzero(v, 0);
  while (lead < dim_) {
    while (k < basis_.size() && basis_[k].first < lead) ++k;
    if (k == basis_.size() || basis_[k].first > lead) {
      basis_.insert(basis_.begin() + static_cast<long>(k), {lead, std::move(v)});
      return;
    }
    Vec& b = basis_[k].second;
    if (valuation(v[lead], p_) < valuation(b[lead], p_)) std::swap(v, b);
    mpq_class f = v[lead] / b[lead];
    axpy(v, f, b);
    lead = first_nonzero(v, lead);
  }
}

bool IntegralSpan::contains(Vec v) const {
  if (v.size() != dim_) throw InvalidArgument("vector length mismatch");
  for (const auto& [pivot, b] : basis_) {
    if (first_nonzero(v, 0) < pivot) return false;
    if (sgn(v[pivot]) == 0) continue;
    mpq_class f = v[pivot] / b[pivot];
    if (valuation(f, p_) < 0) return false;
    axpy(v, f, b);
  }
  return first_nonzero(v, 0) == dim_;
}

bool in_integral_span(const std::vector<Vec>& generators, const Vec& target, unsigned p) {
  IntegralSpan span(target.size(), p);
  for (const Vec& g : generators) span.add(g);
  return span.contains(target);
}

}  // namespace adic
