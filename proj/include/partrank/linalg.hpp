#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "partrank/field.hpp"
#include "partrank/rational.hpp"

namespace partrank {

using Vector = std::vector<Value>;

/// Dense m x n matrix of canonical values over a FieldSpec, row-major.
class Matrix {
 public:
  Matrix(FieldSpec spec, std::size_t rows, std::size_t cols);
  static Matrix identity(FieldSpec spec, std::size_t n);
  /// Rows must all have the same length; entries are reduced into the domain.
  static Matrix from_rows(FieldSpec spec, const std::vector<Vector>& rows);
  static Matrix from_columns(FieldSpec spec, const std::vector<Vector>& cols);

  const FieldSpec& spec() const noexcept { return spec_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Value operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Value& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Vector apply(std::span<const Value> v) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  FieldSpec spec_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Value> data_;
};

/// Rank by exact elimination. Over the integer ring this is the rank over Q
/// (fraction-free elimination in big integers).
std::size_t rank(const Matrix& m);

/// Scalar determinant by elimination; square input only.
Value determinant(const Matrix& m);

/// Basis of {v : Mv = 0}: one vector per free column of the reduced row
/// echelon form, free coordinate set to 1. Prime fields only.
std::vector<Vector> kernel_basis(const Matrix& m);

/// Some x with Mx = b, or nullopt. Prime fields only.
std::optional<Vector> solve(const Matrix& m, std::span<const Value> b);

bool is_zero_vector(std::span<const Value> v) noexcept;

/// Rank of the matrix whose rows are the given vectors (all of length n).
std::size_t rank_of(FieldSpec spec, const std::vector<Vector>& vectors, std::size_t n);

/// A in SL_n with A e_i = v_i for the given independent vectors. Missing
/// columns are standard basis vectors chosen greedily and the last free
/// column absorbs det^{-1}; when k == n the last column is divided by det.
/// Throws PreconditionError naming a dependent index.
Matrix complete_to_sl(FieldSpec spec, const std::vector<Vector>& vectors, std::size_t n);

/// Exact Pr[rk(A) < m] for A uniform in F_q^{m x n}:
/// 1 - prod_{i<m} (1 - q^{i-n}). Any integer q >= 2 is accepted.
Rational rank_deficient_probability(int m, int n, std::int64_t q);

}  // namespace partrank
