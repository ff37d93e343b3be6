#pragma once

#include <optional>

#include "structnil/bilinear.hpp"
#include "structnil/verdict.hpp"

namespace structnil {

json to_json(const Scalar& s);
json to_json(const Vector& v);
/// {"field", "rows", "cols", "entries": [[...], ...]} with decimal-string scalars.
json to_json(const Matrix& m);
/// Basis rows as a Matrix object.
json to_json(const Subspace& s);
json to_json(const BilinearForm& b);
/// Ordered list of subspaces F_0, ..., F_p.
json to_json(const Flag& fl);
json to_json(const WittDecomposition& wd);

/// `fallback` is used when the object carries no "field" entry.
Matrix matrix_from_json(const json& j, const std::optional<FieldSpec>& fallback = std::nullopt);
Vector vector_from_json(const json& j, const FieldSpec& f);
Subspace subspace_from_json(const json& j, const FieldSpec& f, size_t ambient_dim);
BilinearForm form_from_json(const json& j, const std::optional<FieldSpec>& fallback = std::nullopt);
/// Accepts a list of subspaces.  A list of vectors v_1, ..., v_p is read as
/// the flag F_i = span(v_1, ..., v_i).
Flag flag_from_json(const json& j, const FieldSpec& f, size_t ambient_dim);

}  // namespace structnil
