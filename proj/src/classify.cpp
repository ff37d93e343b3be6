#include "structnil/classify.hpp"

namespace structnil {

namespace {

Flag lift_flag(const FieldSpec& f, size_t n, const Flag& sub, const std::function<Subspace(const Subspace&)>& pre) {
  Flag fl;
  fl.spaces.emplace_back(f, n);
  for (const auto& g : sub.spaces) fl.spaces.push_back(pre(g));
  return fl;
}

Flag classical_rec(const OperatorSpace& v) {
  const FieldSpec& f = v.field();
  const size_t n = v.n();
  if (n == 0) return Flag{{Subspace(f, 0)}};
  Subspace c = v.common_kernel();
  if (c.is_zero()) fail(ErrorCode::CommonKernelEmpty, "no nonzero vector is killed by every element");
  Vector x = c.vector(0);
  LineQuotient q(Subspace::full(f, n), x);
  std::vector<Matrix> gens;
  for (const auto& u : v.basis()) gens.push_back(q.induced(u));
  Flag sub = classical_rec(OperatorSpace(f, n - 1, gens));
  return lift_flag(f, n, sub, [&](const Subspace& g) { return q.preimage(g); });
}

Flag structured_rec(const OperatorSpace& v) {
  const FieldSpec& f = v.field();
  const BilinearForm& b = *v.form();
  const size_t n = v.n();
  Subspace c = v.common_kernel();
  IsotropicResult iso = find_isotropic(b, c);
  if (!iso.vector) {
    if (witt_index(b) == 0) {
      if (v.dim() != 0) fail(ErrorCode::VerificationFailed, "nonzero space over an anisotropic form");
      return Flag{{Subspace(f, n)}};
    }
    std::string why = "common kernel of dimension " + std::to_string(c.dim()) + " has no isotropic vector";
    if (!iso.complete) why += " (" + iso.warning + ")";
    fail(ErrorCode::NoIsotropicCommonKernelVector, why);
  }
  QuotientForm qf = quotient_form(b, *iso.vector);
  std::vector<Matrix> gens;
  for (const auto& u : v.basis()) gens.push_back(qf.quotient.induced(u));
  Flag sub = structured_rec(OperatorSpace(f, qf.quotient.dim(), gens, qf.form, v.adaptation()));
  return lift_flag(f, n, sub, [&](const Subspace& g) { return qf.quotient.preimage(g); });
}

}  // namespace

Classification classify_classical(const OperatorSpace& v, const ClassifyOptions& opts) {
  require(!v.adaptation(), ErrorCode::PreconditionViolated, "classical classification takes a form-free space");
  const size_t n = v.n();
  const size_t want = expected_dimension(SpaceKind::NF, n, 0);
  if (!opts.force && v.dim() != want)
    fail(ErrorCode::DimensionMismatch, "dim V = " + std::to_string(v.dim()) + ", expected " + std::to_string(want));
  Classification res;
  res.kind = SpaceKind::NF;
  res.hypothesis = "|F| >= " + std::to_string(n);
  res.hypotheses_met = v.field().has_at_least(n);
  res.flag = classical_rec(v);
  OperatorSpace rebuilt = build_canonical_space(SpaceKind::NF, std::nullopt, res.flag);
  if (!(rebuilt == v)) fail(ErrorCode::VerificationFailed, "N_F of the recovered flag differs from V");
  res.verified = true;
  return res;
}

Classification classify_structured(const OperatorSpace& v, const ClassifyOptions& opts) {
  require(v.adaptation().has_value(), ErrorCode::PreconditionViolated, "structured classification needs S_b or A_b");
  const BilinearForm& b = *v.form();
  require(b.is_nondegenerate(), ErrorCode::DegenerateForm, "structured classification needs a non-degenerate form");
  const size_t n = v.n();
  const size_t nu = witt_index(b);
  Classification res;
  res.kind = *v.adaptation() == Adaptation::b_symmetric ? SpaceKind::WS : SpaceKind::WA;
  const size_t want = expected_dimension(res.kind, n, nu);
  if (!opts.force && v.dim() != want)
    fail(ErrorCode::DimensionMismatch, "dim V = " + std::to_string(v.dim()) + ", expected " + std::to_string(want));
  const bool sym_form = b.kind() == FormKind::symmetric;
  if (sym_form && res.kind == SpaceKind::WA) {
    res.hypothesis = "|F| >= " + std::to_string(std::min(n, 2 * nu + 1));
    res.hypotheses_met = v.field().has_at_least(std::min(n, 2 * nu + 1));
  } else if (!sym_form && res.kind == SpaceKind::WS) {
    res.hypothesis = "|F| >= " + std::to_string(n);
    res.hypotheses_met = v.field().has_at_least(n);
  } else {
    res.hypothesis = "none";
  }
  res.flag = structured_rec(v);
  OperatorSpace rebuilt = build_canonical_space(res.kind, b, res.flag);
  if (!(rebuilt == v)) fail(ErrorCode::VerificationFailed, "canonical space of the recovered flag differs from V");
  res.verified = true;
  return res;
}

Classification classify(const OperatorSpace& v, const ClassifyOptions& opts) {
  return v.adaptation() ? classify_structured(v, opts) : classify_classical(v, opts);
}

}  // namespace structnil
