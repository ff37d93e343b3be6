#include "structnil/matrix.hpp"

namespace structnil {

Vector zero_vector(const FieldSpec& f, size_t n) { return Vector(n, f.zero()); }

Vector unit_vector(const FieldSpec& f, size_t n, size_t i) {
  Vector v = zero_vector(f, n);
  v.at(i) = f.one();
  return v;
}

Vector vector_from_ints(const FieldSpec& f, std::initializer_list<long long> v) {
  Vector out;
  out.reserve(v.size());
  for (long long x : v) out.push_back(f.from_int(x));
  return out;
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vector operator+(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector sum");
  Vector r;
  r.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector difference");
  Vector r;
  r.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
  return r;
}

Vector operator*(const Scalar& c, const Vector& v) {
  Vector r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(c * x);
  return r;
}

Scalar dot(const Vector& a, const Vector& b) {
  require(a.size() == b.size() && !a.empty(), ErrorCode::DimensionMismatch, "dot product");
  Scalar s = a[0] * b[0];
  for (size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

size_t leading_index(const Vector& v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) return i;
  return v.size();
}

// ---------------------------------------------------------------------------

Matrix::Matrix(FieldSpec f, size_t rows, size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, f.zero()) {}

Matrix Matrix::identity(const FieldSpec& f, size_t n) {
  Matrix m(f, n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

Matrix Matrix::from_ints(const FieldSpec& f, std::initializer_list<std::initializer_list<long long>> rows) {
  size_t r = rows.size();
  size_t c = r ? rows.begin()->size() : 0;
  Matrix m(f, r, c);
  size_t i = 0;
  for (const auto& row : rows) {
    require(row.size() == c, ErrorCode::DimensionMismatch, "ragged matrix literal");
    size_t j = 0;
    for (long long x : row) m(i, j++) = f.from_int(x);
    ++i;
  }
  return m;
}

Matrix Matrix::from_rows(const FieldSpec& f, size_t cols, const std::vector<Vector>& rows) {
  Matrix m(f, rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == cols, ErrorCode::DimensionMismatch, "row length");
    for (size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::from_columns(const FieldSpec& f, size_t rows, const std::vector<Vector>& cols) {
  Matrix m(f, rows, cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    require(cols[j].size() == rows, ErrorCode::DimensionMismatch, "column length");
    for (size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Matrix Matrix::outer(const FieldSpec& f, const Vector& col, const Vector& row) {
  Matrix m(f, col.size(), row.size());
  for (size_t i = 0; i < col.size(); ++i) {
    if (col[i].is_zero()) continue;
    for (size_t j = 0; j < row.size(); ++j) m(i, j) = col[i] * row[j];
  }
  return m;
}

Matrix Matrix::unflatten(const FieldSpec& f, size_t n, const Vector& v) {
  require(v.size() == n * n, ErrorCode::DimensionMismatch, "unflatten");
  Matrix m(f, n, n);
  m.data_ = v;
  return m;
}

Vector Matrix::row(size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector Matrix::col(size_t j) const {
  Vector v;
  v.reserve(rows_);
  for (size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

std::vector<Vector> Matrix::row_list() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch, "matrix sum");
  Matrix r(*this);
  for (size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch, "matrix difference");
  Matrix r(*this);
  for (size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r(*this);
  for (auto& x : r.data_) x = -x;
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  require(cols_ == o.rows_, ErrorCode::DimensionMismatch, "matrix product");
  if (field_ != o.field_ && rows_ * cols_ * o.cols_ > 0) fail(ErrorCode::FieldMismatch, "matrix product");
  Matrix r(field_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (size_t j = 0; j < o.cols_; ++j) {
        const Scalar& b = o(k, j);
        if (!b.is_zero()) r(i, j) += a * b;
      }
    }
  return r;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix r(*this);
  for (auto& x : r.data_) x = c * x;
  return r;
}

Vector Matrix::apply(const Vector& v) const {
  require(v.size() == cols_, ErrorCode::DimensionMismatch, "matrix-vector product");
  Vector r = zero_vector(field_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      const Scalar& a = (*this)(i, j);
      if (!a.is_zero() && !v[j].is_zero()) r[i] += a * v[j];
    }
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(field_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::power(size_t k) const {
  require(is_square(), ErrorCode::DimensionMismatch, "power of a non-square matrix");
  Matrix r = identity(field_, rows_);
  for (size_t i = 0; i < k; ++i) r = r * *this;
  return r;
}

Scalar Matrix::trace() const {
  require(is_square(), ErrorCode::DimensionMismatch, "trace");
  Scalar s = field_.zero();
  for (size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool Matrix::is_symmetric() const {
  if (!is_square()) return false;
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool Matrix::is_alternating() const {
  if (!is_square()) return false;
  for (size_t i = 0; i < rows_; ++i) {
    if (!(*this)(i, i).is_zero()) return false;
    for (size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != -(*this)(j, i)) return false;
  }
  return true;
}

Matrix Matrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
  require(r0 + nr <= rows_ && c0 + nc <= cols_, ErrorCode::DimensionMismatch, "block");
  Matrix b(field_, nr, nc);
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(size_t r0, size_t c0, const Matrix& b) {
  require(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, ErrorCode::DimensionMismatch, "set_block");
  for (size_t i = 0; i < b.rows_; ++i)
    for (size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::vstack(const Matrix& below) const {
  require(cols_ == below.cols_, ErrorCode::DimensionMismatch, "vstack");
  Matrix r(field_, rows_ + below.rows_, cols_);
  r.data_ = data_;
  r.data_.insert(r.data_.end(), below.data_.begin(), below.data_.end());
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  if (data_.empty()) return field_ == o.field_;
  for (size_t k = 0; k < data_.size(); ++k)
    if (data_[k] != o.data_[k]) return false;
  return true;
}

// ---------------------------------------------------------------------------

RrefResult rref(Matrix m) {
  RrefResult out;
  const size_t R = m.rows(), C = m.cols();
  size_t r = 0;
  for (size_t c = 0; c < C && r < R; ++c) {
    size_t piv = r;
    while (piv < R && m(piv, c).is_zero()) ++piv;
    if (piv == R) continue;
    if (piv != r)
      for (size_t j = 0; j < C; ++j) std::swap(m(r, j), m(piv, j));
    Scalar inv = m(r, c).inv();
    for (size_t j = c; j < C; ++j) m(r, j) = m(r, j) * inv;
    for (size_t i = 0; i < R; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (size_t j = c; j < C; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

size_t rank(const Matrix& m) { return rref(m).rank(); }

Matrix kernel_basis(const Matrix& m) {
  auto rr = rref(m);
  const size_t C = m.cols();
  std::vector<bool> is_pivot(C, false);
  for (size_t c : rr.pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (size_t free = 0; free < C; ++free) {
    if (is_pivot[free]) continue;
    Vector v = zero_vector(m.field(), C);
    v[free] = m.field().one();
    for (size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.reduced(i, free);
    basis.push_back(std::move(v));
  }
  // Back-substitution vectors are independent; reduce to canonical echelon form.
  auto canon = rref(Matrix::from_rows(m.field(), C, basis));
  return canon.reduced.block(0, 0, canon.rank(), C);
}

Matrix image_basis(const Matrix& m) {
  auto rr = rref(m.transpose());
  return rr.reduced.block(0, 0, rr.rank(), m.rows());
}

std::optional<AffineSolution> try_solve(const Matrix& m, const Vector& rhs) {
  require(rhs.size() == m.rows(), ErrorCode::DimensionMismatch, "right-hand side length");
  const size_t C = m.cols();
  Matrix aug(m.field(), m.rows(), C + 1);
  aug.set_block(0, 0, m);
  for (size_t i = 0; i < m.rows(); ++i) aug(i, C) = rhs[i];
  auto rr = rref(aug);
  if (!rr.pivots.empty() && rr.pivots.back() == C) return std::nullopt;
  Vector x = zero_vector(m.field(), C);
  for (size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = rr.reduced(i, C);
  return AffineSolution{std::move(x), kernel_basis(m)};
}

AffineSolution solve_linear(const Matrix& m, const Vector& rhs) {
  auto s = try_solve(m, rhs);
  if (!s) fail(ErrorCode::NoSolution, "inconsistent linear system");
  return std::move(*s);
}

std::optional<Matrix> inverse(const Matrix& m) {
  require(m.is_square(), ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const size_t n = m.rows();
  Matrix aug(m.field(), n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Matrix::identity(m.field(), n));
  auto rr = rref(aug);
  if (rr.rank() < n || (n > 0 && rr.pivots[n - 1] != n - 1)) return std::nullopt;
  return rr.reduced.block(0, n, n, n);
}

Scalar determinant(const Matrix& m) {
  require(m.is_square(), ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  Matrix a(m);
  const size_t n = a.rows();
  Scalar det = m.field().one();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a(piv, c).is_zero()) ++piv;
    if (piv == n) return m.field().zero();
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    Scalar inv = a(c, c).inv();
    for (size_t i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      Scalar f = a(i, c) * inv;
      for (size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

std::optional<size_t> nilindex(const Matrix& m) {
  require(m.is_square(), ErrorCode::DimensionMismatch, "nilindex of a non-square matrix");
  const size_t n = m.rows();
  if (n == 0) return 0;
  Matrix p = m;
  for (size_t k = 1; k <= n; ++k) {
    if (p.is_zero()) return k;
    p = p * m;
  }
  return std::nullopt;
}

}  // namespace structnil
