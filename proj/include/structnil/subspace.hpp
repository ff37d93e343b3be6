#pragma once

#include <optional>
#include <vector>

#include "structnil/matrix.hpp"

namespace structnil {

/// A linear subspace of F^d stored by its reduced row echelon basis, so two
/// subspaces are equal exactly when their stored bases coincide.
class Subspace {
 public:
  Subspace() = default;
  /// The zero subspace of F^d.
  Subspace(const FieldSpec& f, size_t ambient_dim);

  static Subspace span(const FieldSpec& f, size_t ambient_dim, const std::vector<Vector>& vectors);
  /// Span of the rows of m.
  static Subspace row_space(const Matrix& m);
  static Subspace full(const FieldSpec& f, size_t ambient_dim);
  static Subspace kernel(const Matrix& m);
  static Subspace image(const Matrix& m);

  const FieldSpec& field() const { return basis_.field(); }
  size_t ambient_dim() const { return basis_.cols(); }
  size_t dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }

  /// Rows are the canonical basis vectors.
  const Matrix& basis() const { return basis_; }
  Vector vector(size_t i) const { return basis_.row(i); }
  std::vector<Vector> vectors() const { return basis_.row_list(); }
  const std::vector<size_t>& pivots() const { return pivots_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of v in the stored basis, nullopt when v is outside.
  std::optional<Vector> coordinates(const Vector& v) const;
  /// Linear combination of the stored basis.
  Vector combine(const Vector& coords) const;

  Subspace intersect(const Subspace& o) const;
  Subspace sum(const Subspace& o) const;
  Subspace with(const Vector& v) const;
  /// Rows of the returned matrix are linear forms vanishing exactly on this subspace.
  Matrix annihilator() const;
  /// Vectors extending this basis to a basis of `outer` (which must contain it),
  /// chosen greedily from the canonical basis of `outer`.
  std::vector<Vector> complement_in(const Subspace& outer) const;

  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

 private:
  explicit Subspace(RrefResult rr);

  Matrix basis_;
  std::vector<size_t> pivots_;
};

struct LinearQueryResult {
  bool member = false;
  std::optional<Vector> coordinates;
};

LinearQueryResult membership(const Subspace& s, const Vector& v);

/// The quotient outer / F x for a nonzero x in `outer`.  Quotient
/// coordinates refer to a fixed section: the canonical basis vectors of
/// `outer` minus the one at the first nonzero coordinate of x.
class LineQuotient {
 public:
  LineQuotient(Subspace outer, Vector x);

  size_t dim() const { return section_.size(); }
  const Subspace& outer() const { return outer_; }
  const Vector& line() const { return x_; }
  const std::vector<Vector>& section() const { return section_; }

  /// Quotient coordinates of v in outer; throws DimensionMismatch outside.
  Vector project(const Vector& v) const;
  /// Section representative of quotient coordinates q.
  Vector lift(const Vector& q) const;
  /// Inverse image of a subspace of the quotient (always contains F x).
  Subspace preimage(const Subspace& q) const;
  /// Matrix of the map induced on the quotient by u, which must map outer
  /// into itself and F x into F x.
  Matrix induced(const Matrix& u) const;

 private:
  Subspace outer_;
  Vector x_;
  Vector x_coords_;
  size_t dropped_ = 0;
  std::vector<Vector> section_;
};

/// F_0 = {0} subset F_1 subset ... subset F_p.
struct Flag {
  std::vector<Subspace> spaces;

  size_t length() const { return spaces.empty() ? 0 : spaces.size() - 1; }
  size_t ambient_dim() const { return spaces.empty() ? 0 : spaces.front().ambient_dim(); }
  /// F_i = span(v_1, ..., v_i).
  static Flag from_vectors(const FieldSpec& f, size_t ambient_dim, const std::vector<Vector>& v);
  /// dim F_i = i and each space contains the previous one.
  bool is_partially_complete() const;
  bool is_complete() const;
  bool operator==(const Flag& o) const { return spaces == o.spaces; }
};

}  // namespace structnil
