#include "structnil/json_io.hpp"

namespace structnil {

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    default: return "hypothesis_unmet";
  }
}

json Verdict::to_json() const {
  json j = {{"check", check}, {"status", to_string(status)}, {"counters", counters}};
  if (!witness.is_null()) j["witness"] = witness;
  if (!note.empty()) j["note"] = note;
  return j;
}

json to_json(const Scalar& s) { return s.to_string(); }

json to_json(const Vector& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s.to_string());
  return a;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return {{"field", m.field().to_string()}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

json to_json(const Subspace& s) { return to_json(s.basis()); }

json to_json(const BilinearForm& b) { return {{"kind", to_string(b.kind())}, {"gram", to_json(b.gram())}}; }

json to_json(const Flag& fl) {
  json a = json::array();
  for (const auto& s : fl.spaces) a.push_back(to_json(s));
  return a;
}

json to_json(const WittDecomposition& wd) {
  json pairs = json::array();
  for (const auto& [f, h] : wd.hyperbolic_pairs) pairs.push_back({{"f", to_json(f)}, {"h", to_json(h)}});
  json an = json::array();
  for (const auto& g : wd.anisotropic_basis) an.push_back(to_json(g));
  json j = {{"hyperbolic_pairs", pairs}, {"anisotropic_basis", an}, {"witt_index", wd.witt_index},
            {"complete", wd.complete}};
  if (!wd.warning.empty()) j["warning"] = wd.warning;
  return j;
}

namespace {

Scalar scalar_from_json(const json& j, const FieldSpec& f) {
  if (j.is_string()) return f.parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return f.from_int(j.get<long long>());
  fail(ErrorCode::ParseError, "scalar must be a string or an integer");
}

}  // namespace

Vector vector_from_json(const json& j, const FieldSpec& f) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "vector must be an array");
  Vector v;
  for (const auto& e : j) v.push_back(scalar_from_json(e, f));
  return v;
}

Matrix matrix_from_json(const json& j, const std::optional<FieldSpec>& fallback) {
  FieldSpec f;
  if (j.is_object() && j.contains("field")) f = FieldSpec::parse(j.at("field").get<std::string>());
  else if (fallback) f = *fallback;
  else fail(ErrorCode::ParseError, "matrix without a field");
  const json& rows = j.is_object() ? j.at("entries") : j;
  if (!rows.is_array()) fail(ErrorCode::ParseError, "matrix entries must be an array of rows");
  size_t cols = 0;
  if (j.is_object() && j.contains("cols")) cols = j.at("cols").get<size_t>();
  else if (!rows.empty()) cols = rows.front().size();
  std::vector<Vector> rv;
  for (const auto& r : rows) {
    rv.push_back(vector_from_json(r, f));
    if (rv.back().size() != cols) fail(ErrorCode::ParseError, "ragged matrix rows");
  }
  if (j.is_object() && j.contains("rows") && j.at("rows").get<size_t>() != rv.size())
    fail(ErrorCode::ParseError, "row count does not match entries");
  return Matrix::from_rows(f, cols, rv);
}

Subspace subspace_from_json(const json& j, const FieldSpec& f, size_t ambient_dim) {
  Matrix m = matrix_from_json(j, f);
  if (m.rows() == 0) return Subspace(f, ambient_dim);
  require(m.cols() == ambient_dim, ErrorCode::DimensionMismatch, "subspace ambient dimension");
  return Subspace::row_space(m);
}

BilinearForm form_from_json(const json& j, const std::optional<FieldSpec>& fallback) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("gram"))
    fail(ErrorCode::ParseError, "form needs \"kind\" and \"gram\"");
  return BilinearForm(matrix_from_json(j.at("gram"), fallback), parse_form_kind(j.at("kind").get<std::string>()));
}

Flag flag_from_json(const json& j, const FieldSpec& f, size_t ambient_dim) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "flag must be an array");
  bool vectors = !j.empty();
  for (const auto& e : j) vectors = vectors && e.is_array() && (e.empty() || !e.front().is_array());
  if (vectors) {
    std::vector<Vector> vs;
    for (const auto& e : j) {
      vs.push_back(vector_from_json(e, f));
      require(vs.back().size() == ambient_dim, ErrorCode::DimensionMismatch, "flag vector length");
    }
    return Flag::from_vectors(f, ambient_dim, vs);
  }
  Flag fl;
  for (const auto& e : j) fl.spaces.push_back(subspace_from_json(e, f, ambient_dim));
  if (fl.spaces.empty() || !fl.spaces.front().is_zero()) fl.spaces.insert(fl.spaces.begin(), Subspace(f, ambient_dim));
  return fl;
}

}  // namespace structnil
