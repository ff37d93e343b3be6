#include "structnil/endo.hpp"

#include <algorithm>

namespace structnil {

std::string to_string(Adaptation a) {
  switch (a) {
    case Adaptation::b_symmetric: return "b_symmetric";
    case Adaptation::b_alternating: return "b_alternating";
    default: return "neither";
  }
}

std::string to_string(BlockShape s) { return s == BlockShape::odd_cell ? "odd_cell" : "double_even_cell"; }

std::string to_string(const JordanPartition& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.parts.size(); ++i) s += (i ? "," : "") + std::to_string(p.parts[i]);
  return s + "]";
}

AdaptednessReport adaptedness_check(const Matrix& u, const BilinearForm& b) {
  require(u.is_square() && u.rows() == b.dim(), ErrorCode::DimensionMismatch, "endomorphism size");
  require(u.field() == b.field(), ErrorCode::FieldMismatch, "endomorphism field");
  AdaptednessReport r;
  Matrix gu = b.gram() * u;
  r.symmetric = gu.is_symmetric();
  r.alternating = gu.is_alternating();
  r.adaptation = r.symmetric ? Adaptation::b_symmetric : r.alternating ? Adaptation::b_alternating : Adaptation::neither;
  r.nilpotent = nilindex(u).has_value();
  return r;
}

bool is_adapted(const Matrix& u, const BilinearForm& b, Adaptation a) {
  Matrix gu = b.gram() * u;
  if (a == Adaptation::b_symmetric) return gu.is_symmetric();
  if (a == Adaptation::b_alternating) return gu.is_alternating();
  return !gu.is_symmetric() && !gu.is_alternating();
}

Matrix b_tensor(const BilinearForm& b, const Vector& x, const Vector& y, TensorKind kind) {
  require(x.size() == b.dim() && y.size() == b.dim(), ErrorCode::DimensionMismatch, "tensor vectors");
  const FieldSpec& f = b.field();
  Matrix xy = Matrix::outer(f, x, b.left_form(y));
  Matrix yx = Matrix::outer(f, y, b.left_form(x));
  return kind == TensorKind::sym ? xy + yx : xy - yx;
}

JordanPartition partition_from_ranks(const std::vector<size_t>& r) {
  JordanPartition p;
  auto at = [&](size_t k) -> long long { return k < r.size() ? static_cast<long long>(r[k]) : 0; };
  for (size_t s = r.size(); s >= 1; --s) {
    long long m = at(s - 1) - 2 * at(s) + at(s + 1);
    for (long long i = 0; i < m; ++i) p.parts.push_back(s);
  }
  return p;
}

NilProfile nil_profile(const Matrix& u) {
  require(u.is_square(), ErrorCode::DimensionMismatch, "nil_profile needs a square matrix");
  const size_t n = u.rows();
  NilProfile prof;
  prof.ranks.push_back(n);
  Matrix pw = Matrix::identity(u.field(), n);
  while (prof.ranks.back() > 0) {
    if (prof.ranks.size() > n) fail(ErrorCode::NotNilpotent, "u^n != 0");
    pw = pw * u;
    size_t r = rank(pw);
    if (r == prof.ranks.back()) fail(ErrorCode::NotNilpotent, "rank sequence stalls at " + std::to_string(r));
    prof.ranks.push_back(r);
  }
  prof.nilindex = prof.ranks.size() - 1;
  prof.partition = partition_from_ranks(prof.ranks);
  return prof;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Vector> chain_of(const Matrix& u, const Vector& x, size_t q) {
  std::vector<Vector> up{x};
  for (size_t k = 1; k < q; ++k) up.push_back(u.apply(up.back()));
  std::reverse(up.begin(), up.end());
  return up;
}

// Smallest Jordan cell size of u restricted to the u-stable space w.
size_t min_cell(const Matrix& u, const Subspace& w) {
  std::vector<size_t> d{w.dim()};
  std::vector<Vector> cur = w.vectors();
  while (d.back() > 0) {
    for (auto& v : cur) v = u.apply(v);
    d.push_back(Subspace::span(u.field(), u.rows(), cur).dim());
  }
  JordanPartition p = partition_from_ranks(d);
  return p.parts.back();
}

}  // namespace

std::vector<JordanBlock> indecomposable_decompose(const BilinearForm& b, const Matrix& u) {
  require(b.kind() == FormKind::symmetric, ErrorCode::PreconditionViolated, "decomposition needs a symmetric form");
  require(b.is_nondegenerate(), ErrorCode::PreconditionViolated, "decomposition needs a non-degenerate form");
  auto rep = adaptedness_check(u, b);
  require(rep.alternating, ErrorCode::PreconditionViolated, "u is not b-alternating");
  require(rep.nilpotent, ErrorCode::PreconditionViolated, "u is not nilpotent");

  const FieldSpec& f = b.field();
  const size_t n = b.dim();
  std::vector<JordanBlock> blocks;
  Subspace w = Subspace::full(f, n);
  while (!w.is_zero()) {
    const size_t q = min_cell(u, w);
    const Matrix top = u.power(q - 1);
    Subspace ker = Subspace::kernel(u.power(q)).intersect(w);
    std::vector<Vector> ks = ker.vectors();
    JordanBlock blk;
    blk.cell_size = q;
    if (q % 2 == 1) {
      blk.shape = BlockShape::odd_cell;
      std::optional<Vector> x;
      auto good = [&](const Vector& v) { return !b(v, top.apply(v)).is_zero(); };
      for (size_t i = 0; i < ks.size() && !x; ++i)
        if (good(ks[i])) x = ks[i];
      for (size_t i = 0; i < ks.size() && !x; ++i)
        for (size_t j = i + 1; j < ks.size() && !x; ++j)
          if (good(ks[i] + ks[j])) x = ks[i] + ks[j];
      require(x.has_value(), ErrorCode::VerificationFailed, "no vector with b(x, u^{q-1} x) != 0");
      blk.chains.push_back(chain_of(u, *x, q));
    } else {
      blk.shape = BlockShape::double_even_cell;
      std::optional<std::pair<Vector, Vector>> xy;
      for (size_t i = 0; i < ks.size() && !xy; ++i)
        for (size_t j = 0; j < ks.size() && !xy; ++j)
          if (!b(ks[i], top.apply(ks[j])).is_zero()) xy = std::make_pair(ks[i], ks[j]);
      require(xy.has_value(), ErrorCode::VerificationFailed, "no pair with b(x, u^{q-1} y) != 0");
      blk.chains.push_back(chain_of(u, xy->first, q));
      blk.chains.push_back(chain_of(u, xy->second, q));
    }
    std::vector<Vector> all;
    for (const auto& c : blk.chains) all.insert(all.end(), c.begin(), c.end());
    blk.span = Subspace::span(f, n, all);
    require(blk.span.dim() == all.size(), ErrorCode::VerificationFailed, "block chains are dependent");
    require(b.restriction_radical(blk.span).is_zero(), ErrorCode::VerificationFailed, "block is not b-regular");
    w = w.intersect(b.orthogonal(blk.span));
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

// ---------------------------------------------------------------------------

namespace {

Flag singular_flag_rec(const BilinearForm& b, const Matrix& u) {
  const FieldSpec& f = b.field();
  Flag fl;
  fl.spaces.emplace_back(f, b.dim());
  std::optional<Vector> x;
  if (!u.is_zero()) {
    size_t ind = *nilindex(u);
    x = Subspace::image(u.power(ind - 1)).vector(0);
  } else {
    auto iso = find_isotropic(b);
    if (!iso.complete) fail(ErrorCode::PreconditionViolated, iso.warning);
    x = iso.vector;
  }
  if (!x) return fl;  // Witt index 0
  QuotientForm qf = quotient_form(b, *x);
  Flag sub = singular_flag_rec(qf.form, qf.quotient.induced(u));
  for (size_t i = 0; i < sub.spaces.size(); ++i) fl.spaces.push_back(qf.quotient.preimage(sub.spaces[i]));
  return fl;
}

}  // namespace

Flag stable_singular_flag(const BilinearForm& b, const Matrix& u) {
  require(b.is_nondegenerate(), ErrorCode::PreconditionViolated, "stable flag needs a non-degenerate form");
  auto rep = adaptedness_check(u, b);
  require(rep.symmetric || rep.alternating, ErrorCode::PreconditionViolated, "u is not b-adapted");
  require(rep.nilpotent, ErrorCode::PreconditionViolated, "u is not nilpotent");
  Flag fl = singular_flag_rec(b, u);
  require(fl.is_partially_complete(), ErrorCode::VerificationFailed, "flag is not partially complete");
  for (const auto& s : fl.spaces)
    for (size_t i = 0; i < s.dim(); ++i)
      require(s.contains(u.apply(s.vector(i))), ErrorCode::VerificationFailed, "flag is not u-stable");
  const Subspace& top = fl.spaces.back();
  require(b.is_totally_singular(top), ErrorCode::VerificationFailed, "top space is not totally singular");
  Subspace perp = b.orthogonal(top);
  for (size_t i = 0; i < perp.dim(); ++i)
    require(top.contains(u.apply(perp.vector(i))), ErrorCode::VerificationFailed, "u does not map F^perp into F");
  return fl;
}

}  // namespace structnil
