#include "structnil/serialize.hpp"

#include <sstream>

namespace structnil {

json to_json(const OperatorSpace& v) {
  json basis = json::array();
  for (const auto& b : v.basis()) basis.push_back(to_json(b));
  json j = {{"field", v.field().to_string()}, {"n", v.n()}, {"dim", v.dim()}, {"basis", basis}};
  if (v.form()) j["form"] = to_json(*v.form());
  if (v.adaptation()) j["adaptation"] = *v.adaptation() == Adaptation::b_symmetric ? "S_b" : "A_b";
  return j;
}

OperatorSpace space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("field") || !j.contains("n") || !j.contains("basis"))
    fail(ErrorCode::ParseError, "space needs \"field\", \"n\" and \"basis\"");
  FieldSpec f = FieldSpec::parse(j.at("field").get<std::string>());
  const size_t n = j.at("n").get<size_t>();
  std::vector<Matrix> gens;
  for (const auto& m : j.at("basis")) {
    gens.push_back(matrix_from_json(m, f));
    require(gens.back().field() == f, ErrorCode::FieldMismatch, "basis matrix over another field");
    require(gens.back().rows() == n && gens.back().cols() == n, ErrorCode::DimensionMismatch, "basis matrix size");
  }
  std::optional<BilinearForm> form;
  if (j.contains("form")) {
    form = form_from_json(j.at("form"), f);
    require(form->dim() == n, ErrorCode::DimensionMismatch, "form size");
  }
  std::optional<Adaptation> adapt;
  if (j.contains("adaptation")) {
    std::string a = j.at("adaptation").get<std::string>();
    if (a == "S_b" || a == "b_symmetric") adapt = Adaptation::b_symmetric;
    else if (a == "A_b" || a == "b_alternating") adapt = Adaptation::b_alternating;
    else fail(ErrorCode::ParseError, "adaptation must be S_b or A_b");
  }
  return OperatorSpace(f, n, gens, form, adapt);
}

json to_json(const GenericProfile& prof) {
  json tops = json::array();
  for (const auto& x : prof.top_images) tops.push_back(to_json(x));
  json j = {{"p", prof.p},
            {"status", to_string(prof.status)},
            {"exhaustive", prof.exhaustive},
            {"cap", prof.cap},
            {"top_images", tops},
            {"K", to_json(prof.K)},
            {"dim_K", prof.K.dim()},
            {"pure", prof.pure},
            {"inspected", prof.inspected},
            {"top_count", prof.top_count}};
  if (prof.witness.rows()) j["witness"] = to_json(prof.witness);
  return j;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

size_t parse_count(const std::string& s) {
  size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size()) fail(ErrorCode::ParseError, "expected a count, got '" + s + "'");
  return v;
}

BilinearForm form_from_literal(const json& j, const FieldSpec& f) {
  if (j.is_object() && j.contains("kind")) return form_from_json(j, f);
  Matrix g = matrix_from_json(j, f);
  if (g.is_symmetric()) return BilinearForm(g, FormKind::symmetric);
  if (g.is_alternating()) return BilinearForm(g, FormKind::alternating);
  fail(ErrorCode::KindMismatch, "Gram matrix is neither symmetric nor alternating");
}

}  // namespace

BilinearForm parse_gram(const std::string& text, const FieldSpec& f) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorCode::ParseError, std::string("Gram JSON: ") + e.what());
    }
    return form_from_literal(j, f);
  }
  size_t hyp = 0, symp = 0;
  std::vector<Scalar> diag;
  for (const auto& term : split(text, '+')) {
    auto colon = term.find(':');
    if (colon == std::string::npos) fail(ErrorCode::ParseError, "Gram term '" + term + "' lacks ':'");
    std::string head = term.substr(0, colon), arg = term.substr(colon + 1);
    if (head == "hyp") hyp += parse_count(arg);
    else if (head == "symp") symp += parse_count(arg);
    else if (head == "diag")
      for (const auto& a : split(arg, ',')) diag.push_back(f.parse_scalar(a));
    else fail(ErrorCode::ParseError, "unknown Gram term '" + head + "'");
  }
  if (symp && (hyp || !diag.empty())) fail(ErrorCode::KindMismatch, "symp cannot be combined with hyp or diag");
  if (symp) {
    const size_t n = 2 * symp;
    Matrix g(f, n, n);
    for (size_t i = 0; i < symp; ++i) {
      g(i, symp + i) = f.one();
      g(symp + i, i) = -f.one();
    }
    return BilinearForm(g, FormKind::alternating);
  }
  const size_t n = 2 * hyp + diag.size();
  if (n == 0) fail(ErrorCode::ParseError, "empty Gram shorthand");
  Matrix g(f, n, n);
  for (size_t i = 0; i < hyp; ++i) {
    g(i, hyp + diag.size() + i) = f.one();
    g(hyp + diag.size() + i, i) = f.one();
  }
  for (size_t k = 0; k < diag.size(); ++k) g(hyp + k, hyp + k) = diag[k];
  return BilinearForm(g, FormKind::symmetric);
}

Flag parse_flag(const std::string& text, const FieldSpec& f, size_t n) {
  if (text.rfind("std:", 0) == 0) return standard_flag(f, n, parse_count(text.substr(4)));
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("flag JSON: ") + e.what());
  }
  return flag_from_json(j, f, n);
}

}  // namespace structnil
