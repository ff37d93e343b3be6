#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "structnil/field.hpp"

namespace structnil {

/// Column vector of exact scalars.  The owning field travels with the
/// matrices and subspaces that consume it.
using Vector = std::vector<Scalar>;

Vector zero_vector(const FieldSpec& f, size_t n);
Vector unit_vector(const FieldSpec& f, size_t n, size_t i);
Vector vector_from_ints(const FieldSpec& f, std::initializer_list<long long> v);
bool is_zero(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Scalar& c, const Vector& v);
Scalar dot(const Vector& a, const Vector& b);
/// Index of the first nonzero coordinate, or size() for the zero vector.
size_t leading_index(const Vector& v);

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldSpec f, size_t rows, size_t cols);

  static Matrix identity(const FieldSpec& f, size_t n);
  static Matrix from_ints(const FieldSpec& f, std::initializer_list<std::initializer_list<long long>> rows);
  static Matrix from_rows(const FieldSpec& f, size_t cols, const std::vector<Vector>& rows);
  static Matrix from_columns(const FieldSpec& f, size_t rows, const std::vector<Vector>& cols);
  /// Column vector times row vector.
  static Matrix outer(const FieldSpec& f, const Vector& col, const Vector& row);
  /// Square matrix read from a row-major flattening of length n*n.
  static Matrix unflatten(const FieldSpec& f, size_t n, const Vector& v);

  const FieldSpec& field() const { return field_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  Vector row(size_t i) const;
  Vector col(size_t j) const;
  std::vector<Vector> row_list() const;
  /// Row-major flattening (the coordinates of an endomorphism in F^{n^2}).
  Vector flatten() const { return data_; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(const Scalar& c) const;
  Vector apply(const Vector& v) const;
  Matrix transpose() const;
  Matrix power(size_t k) const;
  Scalar trace() const;

  bool is_zero() const;
  bool is_symmetric() const;
  /// Skew-symmetric with zero diagonal.
  bool is_alternating() const;

  Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
  void set_block(size_t r0, size_t c0, const Matrix& b);
  Matrix vstack(const Matrix& below) const;

  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

 private:
  FieldSpec field_;
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Scalar> data_;
};

struct RrefResult {
  Matrix reduced;             // rank nonzero rows first, then zero rows
  std::vector<size_t> pivots; // pivot column of each nonzero row
  size_t rank() const { return pivots.size(); }
};

RrefResult rref(Matrix m);
size_t rank(const Matrix& m);
/// Rows form the reduced echelon basis of {x : m x = 0}.
Matrix kernel_basis(const Matrix& m);
/// Rows form the reduced echelon basis of the column space of m.
Matrix image_basis(const Matrix& m);

struct AffineSolution {
  Vector particular;
  Matrix kernel;  // rows span the homogeneous solutions
};

/// Full solution set of m x = rhs; nullopt when inconsistent.
std::optional<AffineSolution> try_solve(const Matrix& m, const Vector& rhs);
/// As try_solve, but throws ErrorCode::NoSolution for inconsistent systems.
AffineSolution solve_linear(const Matrix& m, const Vector& rhs);

std::optional<Matrix> inverse(const Matrix& m);
Scalar determinant(const Matrix& m);

/// Nilindex of a nilpotent square matrix (0 on the zero space), nullopt if
/// m^n != 0.
std::optional<size_t> nilindex(const Matrix& m);

}  // namespace structnil
