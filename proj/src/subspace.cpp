#include "structnil/subspace.hpp"

namespace structnil {

Subspace::Subspace(const FieldSpec& f, size_t ambient_dim) : basis_(f, 0, ambient_dim) {}

Subspace::Subspace(RrefResult rr)
    : basis_(rr.reduced.block(0, 0, rr.rank(), rr.reduced.cols())), pivots_(std::move(rr.pivots)) {}

Subspace Subspace::span(const FieldSpec& f, size_t ambient_dim, const std::vector<Vector>& vectors) {
  for (const auto& v : vectors)
    if (!v.empty() && v.front().field() != f) fail(ErrorCode::FieldMismatch, "span");
  return row_space(Matrix::from_rows(f, ambient_dim, vectors));
}

Subspace Subspace::row_space(const Matrix& m) { return Subspace(rref(m)); }

Subspace Subspace::full(const FieldSpec& f, size_t ambient_dim) {
  return row_space(Matrix::identity(f, ambient_dim));
}

Subspace Subspace::kernel(const Matrix& m) { return row_space(kernel_basis(m)); }

Subspace Subspace::image(const Matrix& m) { return row_space(m.transpose()); }

std::optional<Vector> Subspace::coordinates(const Vector& v) const {
  require(v.size() == ambient_dim(), ErrorCode::DimensionMismatch, "subspace coordinates");
  Vector c;
  c.reserve(dim());
  for (size_t p : pivots_) c.push_back(v[p]);
  // with pivots normalized to 1 and cleared elsewhere, the pivot entries are the coordinates
  Vector rebuilt = combine(c);
  for (size_t j = 0; j < v.size(); ++j)
    if (rebuilt[j] != v[j]) return std::nullopt;
  return c;
}

bool Subspace::contains(const Vector& v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  require(other.ambient_dim() == ambient_dim(), ErrorCode::DimensionMismatch, "subspace inclusion");
  for (size_t i = 0; i < other.dim(); ++i)
    if (!contains(other.vector(i))) return false;
  return true;
}

Vector Subspace::combine(const Vector& coords) const {
  require(coords.size() == dim(), ErrorCode::DimensionMismatch, "subspace combination");
  Vector r = zero_vector(field(), ambient_dim());
  for (size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].is_zero()) continue;
    for (size_t j = 0; j < ambient_dim(); ++j)
      if (!basis_(i, j).is_zero()) r[j] += coords[i] * basis_(i, j);
  }
  return r;
}

Matrix Subspace::annihilator() const { return kernel_basis(basis_); }

Subspace Subspace::intersect(const Subspace& o) const {
  require(o.ambient_dim() == ambient_dim(), ErrorCode::DimensionMismatch, "intersection");
  return kernel(annihilator().vstack(o.annihilator()));
}

Subspace Subspace::sum(const Subspace& o) const {
  require(o.ambient_dim() == ambient_dim(), ErrorCode::DimensionMismatch, "sum of subspaces");
  return row_space(basis_.vstack(o.basis_));
}

Subspace Subspace::with(const Vector& v) const {
  return row_space(basis_.vstack(Matrix::from_rows(field(), ambient_dim(), {v})));
}

std::vector<Vector> Subspace::complement_in(const Subspace& outer) const {
  require(outer.contains(*this), ErrorCode::DimensionMismatch, "complement of a non-contained subspace");
  std::vector<Vector> out;
  Subspace acc = *this;
  for (size_t i = 0; i < outer.dim() && acc.dim() < outer.dim(); ++i) {
    Vector v = outer.vector(i);
    if (acc.contains(v)) continue;
    acc = acc.with(v);
    out.push_back(std::move(v));
  }
  return out;
}

LinearQueryResult membership(const Subspace& s, const Vector& v) {
  LinearQueryResult r;
  r.coordinates = s.coordinates(v);
  r.member = r.coordinates.has_value();
  return r;
}


LineQuotient::LineQuotient(Subspace outer, Vector x) : outer_(std::move(outer)), x_(std::move(x)) {
  require(!is_zero(x_), ErrorCode::ZeroVector, "quotient by the zero vector");
  auto c = outer_.coordinates(x_);
  require(c.has_value(), ErrorCode::DimensionMismatch, "quotient line is not inside the ambient subspace");
  x_coords_ = std::move(*c);
  dropped_ = leading_index(x_coords_);
  for (size_t i = 0; i < outer_.dim(); ++i)
    if (i != dropped_) section_.push_back(outer_.vector(i));
}

Vector LineQuotient::project(const Vector& v) const {
  auto a = outer_.coordinates(v);
  require(a.has_value(), ErrorCode::DimensionMismatch, "projection of a vector outside the ambient subspace");
  const Scalar ratio = (*a)[dropped_] / x_coords_[dropped_];
  Vector q;
  q.reserve(dim());
  for (size_t i = 0; i < outer_.dim(); ++i)
    if (i != dropped_) q.push_back((*a)[i] - ratio * x_coords_[i]);
  return q;
}

Vector LineQuotient::lift(const Vector& q) const {
  require(q.size() == dim(), ErrorCode::DimensionMismatch, "lift");
  Vector v = zero_vector(outer_.field(), outer_.ambient_dim());
  for (size_t i = 0; i < q.size(); ++i)
    if (!q[i].is_zero()) v = v + q[i] * section_[i];
  return v;
}

Subspace LineQuotient::preimage(const Subspace& q) const {
  require(q.ambient_dim() == dim(), ErrorCode::DimensionMismatch, "preimage");
  std::vector<Vector> gens{x_};
  for (size_t i = 0; i < q.dim(); ++i) gens.push_back(lift(q.vector(i)));
  return Subspace::span(outer_.field(), outer_.ambient_dim(), gens);
}

Matrix LineQuotient::induced(const Matrix& u) const {
  Matrix r(outer_.field(), dim(), dim());
  for (size_t j = 0; j < dim(); ++j) {
    Vector img = project(u.apply(section_[j]));
    for (size_t i = 0; i < dim(); ++i) r(i, j) = img[i];
  }
  return r;
}

Flag Flag::from_vectors(const FieldSpec& f, size_t ambient_dim, const std::vector<Vector>& v) {
  Flag fl;
  fl.spaces.emplace_back(f, ambient_dim);
  for (size_t i = 0; i < v.size(); ++i) fl.spaces.push_back(fl.spaces.back().with(v[i]));
  return fl;
}

bool Flag::is_partially_complete() const {
  for (size_t i = 0; i < spaces.size(); ++i) {
    if (spaces[i].dim() != i) return false;
    if (i > 0 && !spaces[i].contains(spaces[i - 1])) return false;
  }
  return !spaces.empty();
}

bool Flag::is_complete() const { return is_partially_complete() && length() == ambient_dim(); }

}  // namespace structnil
