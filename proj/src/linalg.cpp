#include "partrank/linalg.hpp"

#include <limits>
#include <string>

#include "partrank/error.hpp"

namespace partrank {

Matrix::Matrix(FieldSpec spec, std::size_t rows, std::size_t cols)
    : spec_(spec), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(FieldSpec spec, std::size_t n) {
  Matrix m(spec, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(FieldSpec spec, const std::vector<Vector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(spec, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw PreconditionError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = spec.from_int(rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_columns(FieldSpec spec, const std::vector<Vector>& cols) {
  return from_rows(spec, cols).transpose();
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(spec_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (spec_ != other.spec_ || cols_ != other.rows_) {
    throw PreconditionError("matrix product shape or domain mismatch");
  }
  Matrix out(spec_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Value a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j)
        out(i, j) = spec_.add(out(i, j), spec_.mul(a, other(k, j)));
    }
  return out;
}

Vector Matrix::apply(std::span<const Value> v) const {
  if (v.size() != cols_) throw PreconditionError("matrix-vector dimension mismatch");
  Vector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out[i] = spec_.add(out[i], spec_.mul((*this)(i, j), v[j]));
  return out;
}

namespace {

void require_prime(const FieldSpec& spec, const char* what) {
  if (!spec.is_prime_field()) {
    throw PreconditionError(std::string(what) + " requires a prime field");
  }
}

// In-place reduced row echelon form over F_p; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m) {
  const FieldSpec& f = m.spec();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    const Value scale = f.inv(m(row, col));
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = f.mul(m(row, j), scale);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Value factor = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) = f.sub(m(i, j), f.mul(factor, m(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Fraction-free (Bareiss) elimination over Z. Returns rank; `det` receives
// the determinant when the matrix is square.
std::size_t bareiss(const Matrix& in, BigInt* det) {
  const std::size_t rows = in.rows(), cols = in.cols();
  std::vector<BigInt> a(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] = in(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return a[i * cols + j]; };
  BigInt prev = 1;
  int sign = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && at(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != row) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(pivot, j), at(row, j));
      sign = -sign;
    }
    for (std::size_t i = row + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j)
        at(i, j) = (at(row, col) * at(i, j) - at(i, col) * at(row, j)) / prev;
      at(i, col) = 0;
    }
    prev = at(row, col);
    ++row;
  }
  if (det != nullptr) {
    *det = (row == rows && rows == cols) ? BigInt(sign) * prev : BigInt(0);
    if (rows == 0) *det = 1;
  }
  return row;
}

}  // namespace

std::size_t rank(const Matrix& m) {
  if (!m.spec().is_prime_field()) return bareiss(m, nullptr);
  Matrix work = m;
  return rref(work).size();
}

Value determinant(const Matrix& m) {
  if (!m.is_square()) throw PreconditionError("determinant of a non-square matrix");
  const FieldSpec& f = m.spec();
  if (!f.is_prime_field()) {
    BigInt det;
    bareiss(m, &det);
    if (det > std::numeric_limits<Value>::max() || det < std::numeric_limits<Value>::min()) {
      throw OverflowError("integer determinant does not fit in 64 bits");
    }
    return det.convert_to<Value>();
  }
  Matrix a = m;
  const std::size_t n = a.rows();
  Value det = f.from_int(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = f.neg(det);
    }
    det = f.mul(det, a(col, col));
    const Value inv = f.inv(a(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      const Value factor = f.mul(a(i, col), inv);
      for (std::size_t j = col; j < n; ++j) a(i, j) = f.sub(a(i, j), f.mul(factor, a(col, j)));
    }
  }
  return det;
}

std::vector<Vector> kernel_basis(const Matrix& m) {
  require_prime(m.spec(), "kernel_basis");
  const FieldSpec& f = m.spec();
  Matrix r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(r(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& m, std::span<const Value> b) {
  require_prime(m.spec(), "solve");
  if (b.size() != m.rows()) throw PreconditionError("solve: right-hand side has wrong length");
  Matrix aug(m.spec(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = m.spec().from_int(b[i]);
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols(), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

bool is_zero_vector(std::span<const Value> v) noexcept {
  for (Value x : v)
    if (x != 0) return false;
  return true;
}

std::size_t rank_of(FieldSpec spec, const std::vector<Vector>& vectors, std::size_t n) {
  if (vectors.empty()) return 0;
  for (const auto& v : vectors)
    if (v.size() != n) throw PreconditionError("vector length differs from dimension");
  return rank(Matrix::from_rows(spec, vectors));
}

Matrix complete_to_sl(FieldSpec spec, const std::vector<Vector>& vectors, std::size_t n) {
  require_prime(spec, "complete_to_sl");
  if (vectors.size() > n) throw PreconditionError("more than n vectors cannot be independent");
  std::vector<Vector> cols;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) throw PreconditionError("vector length differs from dimension");
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = spec.from_int(vectors[i][j]);
    cols.push_back(std::move(v));
    if (rank_of(spec, cols, n) != cols.size()) {
      throw PreconditionError("complete_to_sl: vector " + std::to_string(i + 1) +
                              " depends on the previous ones");
    }
  }
  for (std::size_t j = 0; j < n && cols.size() < n; ++j) {
    Vector e(n, 0);
    e[j] = 1;
    cols.push_back(e);
    if (rank_of(spec, cols, n) != cols.size()) cols.pop_back();
  }
  Matrix a = Matrix::from_columns(spec, cols);
  const Value det = determinant(a);
  if (det != 1 && n > 0) {
    // The last column is free when k < n; otherwise it is v_n itself.
    const Value scale = spec.inv(det);
    for (std::size_t i = 0; i < n; ++i) a(i, n - 1) = spec.mul(a(i, n - 1), scale);
  }
  return a;
}

Rational rank_deficient_probability(int m, int n, std::int64_t q) {
  if (m < 1 || n < 1) throw PreconditionError("rank_deficient_probability needs m, n >= 1");
  if (m > n) throw PreconditionError("rank_deficient_probability needs m <= n");
  if (q < 2) throw PreconditionError("rank_deficient_probability needs q >= 2");
  // Full-rank count prod (q^n - q^i) over q^{mn}.
  const BigInt qn = big_pow(q, static_cast<unsigned>(n));
  BigInt full = 1;
  for (int i = 0; i < m; ++i) full *= qn - big_pow(q, static_cast<unsigned>(i));
  const BigInt total = big_pow(q, static_cast<unsigned>(m) * static_cast<unsigned>(n));
  return Rational(total - full, total);
}

}  // namespace partrank
