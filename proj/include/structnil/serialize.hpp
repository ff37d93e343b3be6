#pragma once

#include <optional>
#include <string>

#include "structnil/json_io.hpp"
#include "structnil/nilspace.hpp"

namespace structnil {

/// {"field", "n", "form"?, "adaptation"?: "S_b"|"A_b", "basis": [Matrix, ...]}.
json to_json(const OperatorSpace& v);
OperatorSpace space_from_json(const json& j);

json to_json(const GenericProfile& prof);

/// Gram shorthand: "hyp:k", "diag:a,b,...", "symp:k" joined by "+".  The
/// hyperbolic (or symplectic) f-vectors come first, diagonal entries next and
/// the matching h-vectors last.  A JSON form object or matrix is also
/// accepted; a bare matrix is symmetric or alternating as it reads.
BilinearForm parse_gram(const std::string& text, const FieldSpec& f);

/// "std:nu" (the first nu unit vectors) or a JSON flag.
Flag parse_flag(const std::string& text, const FieldSpec& f, size_t n);

}  // namespace structnil
