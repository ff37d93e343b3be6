#include "structnil/bilinear.hpp"

namespace structnil {

std::string to_string(FormKind k) { return k == FormKind::symmetric ? "symmetric" : "alternating"; }

FormKind parse_form_kind(std::string_view s) {
  if (s == "symmetric" || s == "sym") return FormKind::symmetric;
  if (s == "alternating" || s == "alt") return FormKind::alternating;
  fail(ErrorCode::ParseError, "form kind '" + std::string(s) + "'");
}

void require_char_not_two(const FieldSpec& f) {
  if (f.characteristic() == 2)
    fail(ErrorCode::CharTwoUnsupported, "bilinear forms need characteristic != 2, got " + f.to_string());
}

BilinearForm::BilinearForm(Matrix gram, FormKind kind) : gram_(std::move(gram)), kind_(kind) {
  require(gram_.is_square(), ErrorCode::DimensionMismatch, "Gram matrix must be square");
  require_char_not_two(gram_.field());
  if (kind_ == FormKind::symmetric && !gram_.is_symmetric())
    fail(ErrorCode::KindMismatch, "Gram matrix is not symmetric");
  if (kind_ == FormKind::alternating && !gram_.is_alternating())
    fail(ErrorCode::KindMismatch, "Gram matrix is not alternating");
  rank_ = structnil::rank(gram_);
}

BilinearForm form_validate(const Matrix& gram, FormKind kind) { return BilinearForm(gram, kind); }

Scalar BilinearForm::operator()(const Vector& x, const Vector& y) const {
  require(x.size() == dim() && y.size() == dim(), ErrorCode::DimensionMismatch, "form evaluation");
  if (dim() == 0) return field().zero();
  return dot(x, gram_.apply(y));
}

Vector BilinearForm::left_form(const Vector& x) const {
  require(x.size() == dim(), ErrorCode::DimensionMismatch, "left form");
  return gram_.transpose().apply(x);
}

Subspace BilinearForm::radical() const { return Subspace::kernel(gram_); }

Subspace BilinearForm::orthogonal(const Subspace& w) const {
  require(w.ambient_dim() == dim(), ErrorCode::DimensionMismatch, "orthogonal complement");
  // v in W^perp  <=>  (w_i^T G) v = 0 for every basis vector w_i
  return Subspace::kernel(w.basis() * gram_);
}

bool BilinearForm::is_totally_singular(const Subspace& w) const { return restricted_gram(w).is_zero(); }

Matrix BilinearForm::restricted_gram(const Subspace& w) const {
  require(w.ambient_dim() == dim(), ErrorCode::DimensionMismatch, "restriction");
  return w.basis() * gram_ * w.basis().transpose();
}

BilinearForm BilinearForm::restrict_to(const Subspace& w) const { return BilinearForm(restricted_gram(w), kind_); }

Subspace BilinearForm::restriction_radical(const Subspace& w) const {
  Matrix k = kernel_basis(restricted_gram(w));
  std::vector<Vector> vs;
  for (size_t i = 0; i < k.rows(); ++i) vs.push_back(w.combine(k.row(i)));
  return Subspace::span(field(), dim(), vs);
}

BilinearForm BilinearForm::in_basis(const Matrix& p) const {
  return BilinearForm(p.transpose() * gram_ * p, kind_);
}

bool is_b_singular(const BilinearForm& b, const Flag& flag) {
  return flag.spaces.empty() || b.is_totally_singular(flag.spaces.back());
}

// ---------------------------------------------------------------------------
// isotropic search

namespace {

// Visits coordinate vectors in little-endian counting order; digit d of the
// counter is mapped to a scalar by `value`.  A candidate is kept only when
// its first nonzero digit is the canonical "one" digit.  Returns the number
// of counter steps used.
template <class Value, class Test>
std::optional<std::vector<uint64_t>> scan_digits(size_t k, uint64_t base, uint64_t max_steps, uint64_t one_digit,
                                                 Test&& test, uint64_t& steps) {
  std::vector<uint64_t> d(k, 0);
  steps = 0;
  for (;;) {
    size_t i = 0;
    while (i < k && ++d[i] == base) d[i++] = 0;
    if (i == k) return std::nullopt;  // wrapped around: exhausted
    if (++steps > max_steps) return std::nullopt;
    size_t lead = 0;
    while (lead < k && d[lead] == 0) ++lead;
    if (d[lead] != one_digit) continue;
    if (test(d)) return d;
  }
}

uint64_t saturating_pow(uint64_t base, size_t k) {
  uint64_t r = 1;
  for (size_t i = 0; i < k; ++i) {
    if (r > (UINT64_MAX / base)) return UINT64_MAX;
    r *= base;
  }
  return r;
}

Scalar quad(const Matrix& g, const Vector& c) {
  Scalar s = g.field().zero();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) continue;
    for (size_t j = 0; j < c.size(); ++j)
      if (!c[j].is_zero() && !g(i, j).is_zero()) s += c[i] * g(i, j) * c[j];
  }
  return s;
}

// Sylvester's criterion over Q: all leading minors positive, or alternating in sign.
bool is_definite(const Matrix& g) {
  bool pos = true, neg = true;
  for (size_t k = 1; k <= g.rows(); ++k) {
    int s = sgn(determinant(g.block(0, 0, k, k)).rational());
    if (s == 0) return false;
    pos = pos && s > 0;
    neg = neg && s == (k % 2 ? -1 : 1);
  }
  return pos || neg;
}

std::optional<uint32_t> sqrt_mod(uint32_t a, uint32_t p) {
  for (uint32_t y = 0; y < p; ++y)
    if (modp::mul(y, y, p) == a % p) return y;
  return std::nullopt;
}

// Exact constructive search over a finite field: diagonalize, then solve a
// binary or ternary diagonal equation (ternary ones always have solutions).
std::optional<Vector> constructive_isotropic(const BilinearForm& b, std::vector<Vector> ws) {
  const uint32_t p = b.field().characteristic();
  const FieldSpec& f = b.field();
  std::vector<Vector> ortho;
  std::vector<uint32_t> diag;
  while (!ws.empty()) {
    for (const auto& w : ws)
      if (b(w, w).is_zero()) return w;
    Vector g = ws.front();
    Scalar gg = b(g, g);
    std::vector<Vector> rest;
    for (size_t i = 1; i < ws.size(); ++i) rest.push_back(ws[i] - (b(ws[i], g) / gg) * g);
    ortho.push_back(g);
    diag.push_back(gg.residue());
    ws = std::move(rest);
    if (ortho.size() == 3) break;
  }
  if (ortho.size() < 2) return std::nullopt;
  if (ortho.size() == 2) {
    uint32_t r = modp::mul(modp::neg(diag[1], p), modp::inv(diag[0], p), p);
    auto x = sqrt_mod(r, p);
    if (!x) return std::nullopt;
    return f.from_int(*x) * ortho[0] + ortho[1];
  }
  for (uint32_t x = 0; x < p; ++x) {
    uint32_t rhs = modp::sub(modp::neg(diag[2], p), modp::mul(diag[0], modp::mul(x, x, p), p), p);
    auto y = sqrt_mod(modp::mul(rhs, modp::inv(diag[1], p), p), p);
    if (y) return f.from_int(x) * ortho[0] + f.from_int(*y) * ortho[1] + ortho[2];
  }
  return std::nullopt;
}

}  // namespace

IsotropicResult find_isotropic(const BilinearForm& b, const std::optional<Subspace>& within,
                               const IsotropicSearchOptions& opts) {
  const FieldSpec& f = b.field();
  const Subspace w = within ? *within : Subspace::full(f, b.dim());
  require(w.ambient_dim() == b.dim(), ErrorCode::DimensionMismatch, "isotropic search subspace");
  IsotropicResult res;
  const size_t k = w.dim();
  if (k == 0) return res;
  if (b.kind() == FormKind::alternating) {
    res.vector = w.vector(0);
    return res;
  }
  const Matrix g = b.restricted_gram(w);
  uint64_t steps = 0;

  if (f.is_finite()) {
    const uint32_t p = f.characteristic();
    std::vector<uint32_t> gr(k * k);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) gr[i * k + j] = g(i, j).residue();
    auto test = [&](const std::vector<uint64_t>& d) {
      uint64_t s = 0;
      for (size_t i = 0; i < k; ++i) {
        if (!d[i]) continue;
        uint64_t row = 0;
        for (size_t j = 0; j < k; ++j) row += gr[i * k + j] * d[j];
        s = (s + (row % p) * d[i]) % p;
      }
      return s == 0;
    };
    auto hit = scan_digits<void>(k, p, opts.max_vectors, 1, test, steps);
    if (hit) {
      Vector c;
      for (uint64_t x : *hit) c.push_back(f.from_int(static_cast<long long>(x)));
      res.vector = w.combine(c);
      return res;
    }
    if (saturating_pow(p, k) - 1 <= opts.max_vectors) return res;  // exhausted: anisotropic
    res.vector = constructive_isotropic(b, w.vectors());
    return res;
  }

  auto radical_fallback = [&]() -> bool {
    Subspace rad = b.restriction_radical(w);
    if (rad.is_zero()) return false;
    res.vector = rad.vector(0);
    return true;
  };

  if (f.kind() == FieldSpec::Kind::rationals) {
    if (is_definite(g)) return res;  // anisotropic, provably
    const int h = std::max(1, opts.rational_height);
    // digit 0 -> 0, 2m-1 -> m, 2m -> -m
    auto value = [&](uint64_t d) -> long long {
      if (d == 0) return 0;
      long long m = static_cast<long long>((d + 1) / 2);
      return d % 2 ? m : -m;
    };
    std::vector<Scalar> vals;
    for (uint64_t d = 0; d < static_cast<uint64_t>(2 * h + 1); ++d) vals.push_back(f.from_int(value(d)));
    auto to_coords = [&](const std::vector<uint64_t>& d) {
      Vector c;
      for (uint64_t x : d) c.push_back(vals[x]);
      return c;
    };
    // keep first nonzero coordinate positive: accept any odd lead digit
    for (uint64_t lead = 1; lead < vals.size(); lead += 2) {
      auto test = [&](const std::vector<uint64_t>& d) { return quad(g, to_coords(d)).is_zero(); };
      auto hit = scan_digits<void>(k, vals.size(), opts.max_vectors, lead, test, steps);
      if (hit) {
        res.vector = w.combine(to_coords(*hit));
        return res;
      }
    }
    if (radical_fallback()) return res;
    res.complete = false;
    res.warning = "no isotropic vector with coordinates of height <= " + std::to_string(h) +
                  " over Q; the search is inconclusive";
    return res;
  }

  // F_p(t): coordinates are polynomials of bounded degree, constants first.
  const uint32_t p = f.characteristic();
  for (int deg = 0; deg <= std::max(0, opts.polynomial_degree); ++deg) {
    const uint64_t base = saturating_pow(p, static_cast<size_t>(deg + 1));
    auto digit_value = [&](uint64_t d) {
      std::vector<uint32_t> cs;
      for (int i = 0; i <= deg; ++i) {
        cs.push_back(static_cast<uint32_t>(d % p));
        d /= p;
      }
      return Scalar(RatFunc(Poly(p, std::move(cs))));
    };
    auto to_coords = [&](const std::vector<uint64_t>& d) {
      Vector c;
      for (uint64_t x : d) c.push_back(digit_value(x));
      return c;
    };
    auto test = [&](const std::vector<uint64_t>& d) { return quad(g, to_coords(d)).is_zero(); };
    auto hit = scan_digits<void>(k, base, opts.max_vectors, 1, test, steps);
    if (hit) {
      res.vector = w.combine(to_coords(*hit));
      return res;
    }
  }
  if (radical_fallback()) return res;
  res.complete = false;
  res.warning = "no isotropic vector with polynomial coordinates of degree <= " +
                std::to_string(opts.polynomial_degree) + " over " + f.to_string() + "; the search is inconclusive";
  return res;
}

// ---------------------------------------------------------------------------
// Witt decomposition

Matrix WittDecomposition::change_of_basis(const FieldSpec& f, size_t n) const {
  std::vector<Vector> cols;
  for (const auto& pr : hyperbolic_pairs) cols.push_back(pr.first);
  for (const auto& g : anisotropic_basis) cols.push_back(g);
  for (const auto& pr : hyperbolic_pairs) cols.push_back(pr.second);
  return Matrix::from_columns(f, n, cols);
}

WittDecomposition witt_decompose(const BilinearForm& b, const IsotropicSearchOptions& opts) {
  require(b.is_nondegenerate(), ErrorCode::DegenerateForm, "Witt decomposition needs a non-degenerate form");
  const FieldSpec& f = b.field();
  WittDecomposition wd;
  Subspace rest = Subspace::full(f, b.dim());
  while (!rest.is_zero()) {
    auto iso = find_isotropic(b, rest, opts);
    if (!iso.vector) {
      if (!iso.complete) {
        wd.complete = false;
        wd.warning = iso.warning;
      }
      break;
    }
    Vector fv = *iso.vector;
    Vector h;
    for (size_t i = 0; i < rest.dim(); ++i) {
      Vector w = rest.vector(i);
      Scalar c = b(fv, w);
      if (!c.is_zero()) {
        h = c.inv() * w;
        break;
      }
    }
    require(!h.empty(), ErrorCode::DegenerateForm, "isotropic vector in the radical of a restriction");
    if (b.kind() == FormKind::symmetric) {
      Scalar half = f.from_int(2).inv();
      h = h - (half * b(h, h)) * fv;
    }
    Subspace pair = Subspace::span(f, b.dim(), {fv, h});
    rest = rest.intersect(b.orthogonal(pair));
    wd.hyperbolic_pairs.emplace_back(std::move(fv), std::move(h));
  }
  // orthogonal basis of the anisotropic remainder
  std::vector<Vector> ws = rest.vectors();
  while (!ws.empty()) {
    Vector g = ws.front();
    Scalar gg = b(g, g);
    require(!gg.is_zero(), ErrorCode::VerificationFailed, "anisotropic remainder contains an isotropic vector");
    std::vector<Vector> next;
    for (size_t i = 1; i < ws.size(); ++i) next.push_back(ws[i] - (b(ws[i], g) / gg) * g);
    wd.anisotropic_basis.push_back(std::move(g));
    ws = std::move(next);
  }
  wd.witt_index = wd.hyperbolic_pairs.size();
  return wd;
}

size_t witt_index(const BilinearForm& b) { return witt_decompose(b).witt_index; }

QuotientForm quotient_form(const BilinearForm& b, const Vector& x) {
  require(x.size() == b.dim(), ErrorCode::DimensionMismatch, "quotient vector");
  require(!is_zero(x), ErrorCode::ZeroVector, "quotient by the zero vector");
  require(b.is_nondegenerate(), ErrorCode::DegenerateForm, "quotient form needs a non-degenerate form");
  require(b(x, x).is_zero(), ErrorCode::NonIsotropicVector, "b(x, x) = " + b(x, x).to_string());
  Subspace perp = b.orthogonal(Subspace::span(b.field(), b.dim(), {x}));
  LineQuotient q(perp, x);
  Matrix g(b.field(), q.dim(), q.dim());
  for (size_t i = 0; i < q.dim(); ++i)
    for (size_t j = 0; j < q.dim(); ++j) g(i, j) = b(q.section()[i], q.section()[j]);
  return QuotientForm{BilinearForm(std::move(g), b.kind()), std::move(q)};
}

}  // namespace structnil
