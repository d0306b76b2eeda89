#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "adic/poly.hpp"

namespace adic {

using Vec = std::vector<mpq_class>;

/// Dense row-major matrix of rationals; in characteristic p entries are kept in [0, p).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static Matrix from_columns(const std::vector<Vec>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpq_class& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpq_class& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Vec column(std::size_t j) const;
  Vec apply(const Vec& x, Field field) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

struct RowEchelon {
  Matrix reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon row_reduce(Matrix m, Field field);
std::size_t rank(const Matrix& m, Field field);
/// Basis of {x : m x = 0}.
std::vector<Vec> kernel(const Matrix& m, Field field);
/// Some x with m x = b, if one exists.
std::optional<Vec> solve(const Matrix& m, const Vec& b, Field field);

/// Incremental membership test for the Z_(p)-module spanned by rational vectors:
/// a triangular basis built by elimination with pivots of least p-adic valuation.
class IntegralSpan {
 public:
  IntegralSpan(std::size_t dimension, unsigned p) : dim_(dimension), p_(p) {}
  void add(Vec v);
  bool contains(Vec v) const;
  std::size_t rank() const { return basis_.size(); }

 private:
  std::size_t dim_;
  unsigned p_;
  std::vector<std::pair<std::size_t, Vec>> basis_;  // (pivot coordinate, vector), sorted by pivot
};

/// Whether `target` is a Z_(p)-linear combination of `generators`.
bool in_integral_span(const std::vector<Vec>& generators, const Vec& target, unsigned p);

}  // namespace adic
