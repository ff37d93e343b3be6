#include "structnil/nilspace.hpp"

#include <algorithm>
#include <array>

#include "structnil/json_io.hpp"

namespace structnil {

// ---------------------------------------------------------------------------
// random elements

Scalar random_scalar(const FieldSpec& f, Rng& rng) {
  switch (f.kind()) {
    case FieldSpec::Kind::prime:
      return f.from_int(static_cast<long long>(rng() % f.characteristic()));
    case FieldSpec::Kind::rationals:
      return f.from_int(static_cast<long long>(rng() % 9) - 4);
    default: {
      const uint32_t p = f.characteristic();
      std::vector<uint32_t> num(1 + rng() % 3), den{static_cast<uint32_t>(rng() % p), 1};
      for (auto& c : num) c = static_cast<uint32_t>(rng() % p);
      if (rng() % 2) den = {1};
      return Scalar(RatFunc(Poly(p, num), Poly(p, den)));
    }
  }
}

Vector random_vector(const FieldSpec& f, size_t n, Rng& rng) {
  Vector v;
  for (size_t i = 0; i < n; ++i) v.push_back(random_scalar(f, rng));
  return v;
}

uint64_t element_count(const FieldSpec& f, size_t k) {
  if (!f.is_finite()) return UINT64_MAX;
  uint64_t r = 1;
  for (size_t i = 0; i < k; ++i) {
    if (r > UINT64_MAX / f.characteristic()) return UINT64_MAX;
    r *= f.characteristic();
  }
  return r;
}

// ---------------------------------------------------------------------------
// OperatorSpace

OperatorSpace::OperatorSpace(FieldSpec f, size_t n, const std::vector<Matrix>& generators,
                             std::optional<BilinearForm> form, std::optional<Adaptation> adaptation)
    : field_(std::move(f)), n_(n), form_(std::move(form)), adaptation_(adaptation) {
  if (adaptation_ && !form_) fail(ErrorCode::PreconditionViolated, "an adaptation class needs a form");
  if (adaptation_ == Adaptation::neither) fail(ErrorCode::PreconditionViolated, "adaptation must be S_b or A_b");
  if (form_) {
    require(form_->dim() == n_, ErrorCode::DimensionMismatch, "form size differs from the space");
    require(form_->field() == field_, ErrorCode::FieldMismatch, "form field differs from the space");
  }
  std::vector<Vector> flats;
  for (const auto& g : generators) {
    require(g.rows() == n_ && g.cols() == n_, ErrorCode::DimensionMismatch, "generator size");
    require(g.field() == field_, ErrorCode::FieldMismatch, "generator field");
    if (adaptation_ && form_ && !is_adapted(g, *form_, *adaptation_))
      fail(ErrorCode::KindMismatch, "generator is not " + to_string(*adaptation_));
    flats.push_back(g.flatten());
  }
  flat_ = Subspace::span(field_, n_ * n_, flats);
  for (size_t i = 0; i < flat_.dim(); ++i) basis_.push_back(Matrix::unflatten(field_, n_, flat_.vector(i)));
}

Matrix OperatorSpace::element(const Vector& coeffs) const { return Matrix::unflatten(field_, n_, flat_.combine(coeffs)); }

std::optional<Vector> OperatorSpace::coordinates(const Matrix& u) const {
  require(u.rows() == n_ && u.cols() == n_, ErrorCode::DimensionMismatch, "operator size");
  return flat_.coordinates(u.flatten());
}

bool OperatorSpace::contains(const Matrix& u) const { return coordinates(u).has_value(); }

Subspace OperatorSpace::common_kernel() const {
  Matrix stack(field_, 0, n_);
  for (const auto& u : basis_) stack = stack.vstack(u);
  return Subspace::kernel(stack);
}

Subspace OperatorSpace::apply_to(const Vector& x) const {
  std::vector<Vector> img;
  for (const auto& u : basis_) img.push_back(u.apply(x));
  return Subspace::span(field_, n_, img);
}

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::NF: return "NF";
    case SpaceKind::WS: return "WS";
    default: return "WA";
  }
}

SpaceKind parse_space_kind(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), ::tolower);
  if (t == "nf") return SpaceKind::NF;
  if (t == "ws") return SpaceKind::WS;
  if (t == "wa") return SpaceKind::WA;
  fail(ErrorCode::ParseError, "space kind '" + std::string(s) + "' (expected nf, ws or wa)");
}

// ---------------------------------------------------------------------------
// flags

Flag standard_flag(const FieldSpec& f, size_t n, size_t length) {
  require(length <= n, ErrorCode::DimensionMismatch, "flag longer than the space");
  std::vector<Vector> vs;
  for (size_t i = 0; i < length; ++i) vs.push_back(unit_vector(f, n, i));
  return Flag::from_vectors(f, n, vs);
}

Flag random_complete_flag(const FieldSpec& f, size_t n, Rng& rng) {
  Flag fl;
  fl.spaces.emplace_back(f, n);
  while (fl.spaces.back().dim() < n) {
    Vector v = random_vector(f, n, rng);
    if (!fl.spaces.back().contains(v)) fl.spaces.push_back(fl.spaces.back().with(v));
  }
  return fl;
}

Flag random_singular_flag(const BilinearForm& b, Rng& rng) {
  require(b.field().is_finite(), ErrorCode::PreconditionViolated, "random singular flags need a finite field");
  const size_t nu = witt_index(b);
  const FieldSpec& f = b.field();
  Flag fl;
  fl.spaces.emplace_back(f, b.dim());
  while (fl.length() < nu) {
    const Subspace& cur = fl.spaces.back();
    Subspace perp = b.orthogonal(cur);
    bool added = false;
    for (int attempt = 0; attempt < 100000 && !added; ++attempt) {
      Vector x = perp.combine(random_vector(f, perp.dim(), rng));
      if (b(x, x).is_zero() && !cur.contains(x)) {
        fl.spaces.push_back(cur.with(x));
        added = true;
      }
    }
    require(added, ErrorCode::VerificationFailed, "random isotropic vector not found");
  }
  return fl;
}

size_t expected_dimension(SpaceKind kind, size_t n, size_t nu) {
  switch (kind) {
    case SpaceKind::NF: return n * (n - (n ? 1 : 0)) / 2;
    case SpaceKind::WS: return nu * (n - nu);
    default: return nu == 0 ? 0 : nu * (n - nu - 1);
  }
}

// ---------------------------------------------------------------------------
// builders

namespace {

// Rows phi_k v_l expressing phi(U v) = 0 for every annihilating form phi of
// `target` and every basis vector v of `source`.
void push_map_constraints(std::vector<Vector>& rows, const Subspace& source, const Subspace& target) {
  const FieldSpec& f = source.field();
  const size_t n = source.ambient_dim();
  Matrix ann = target.annihilator();
  for (size_t a = 0; a < ann.rows(); ++a)
    for (size_t s = 0; s < source.dim(); ++s) {
      Vector v = source.vector(s);
      Vector row = zero_vector(f, n * n);
      for (size_t k = 0; k < n; ++k) {
        if (ann(a, k).is_zero()) continue;
        for (size_t l = 0; l < n; ++l)
          if (!v[l].is_zero()) row[k * n + l] = ann(a, k) * v[l];
      }
      rows.push_back(std::move(row));
    }
}

// (G U)_{ij} -/+ (G U)_{ji} = 0
void push_adaptation_constraints(std::vector<Vector>& rows, const BilinearForm& b, Adaptation a) {
  const FieldSpec& f = b.field();
  const size_t n = b.dim();
  const Matrix& g = b.gram();
  const bool alt = a == Adaptation::b_alternating;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = alt ? i : i + 1; j < n; ++j) {
      Vector row = zero_vector(f, n * n);
      for (size_t k = 0; k < n; ++k) {
        row[k * n + j] += g(i, k);
        if (alt) row[k * n + i] += g(j, k);
        else row[k * n + i] -= g(j, k);
      }
      rows.push_back(std::move(row));
    }
}

void audit_nilpotency(const OperatorSpace& v, const BuildOptions& opts) {
  SweepOptions so;
  so.budget = opts.audit_exhaustive_limit;
  so.samples = opts.audit_samples;
  so.seed = opts.seed;
  const size_t cap = nilindex_cap(v);
  for_each_element(v, so, [&](const Matrix& u, const Vector&) {
    auto ind = nilindex(u);
    if (!ind || *ind > cap)
      fail(ErrorCode::VerificationFailed, "built space contains an element of nilindex above the cap");
    return true;
  });
}

}  // namespace

OperatorSpace build_canonical_space(SpaceKind kind, const std::optional<BilinearForm>& b, const Flag& flag,
                                    const BuildOptions& opts) {
  require(!flag.spaces.empty(), ErrorCode::FlagNotMaximal, "empty flag");
  const FieldSpec f = flag.spaces.front().field();
  const size_t n = flag.ambient_dim();
  if (!flag.is_partially_complete()) fail(ErrorCode::FlagNotMaximal, "flag is not partially complete");
  std::vector<Vector> rows;
  size_t nu = 0;
  std::optional<Adaptation> adaptation;
  if (kind == SpaceKind::NF) {
    require(!b.has_value(), ErrorCode::PreconditionViolated, "NF takes no form");
    if (!flag.is_complete()) fail(ErrorCode::FlagNotMaximal, "NF needs a complete flag");
  } else {
    require(b.has_value(), ErrorCode::PreconditionViolated, to_string(kind) + " needs a form");
    require(b->dim() == n, ErrorCode::DimensionMismatch, "form and flag sizes differ");
    require(b->is_nondegenerate(), ErrorCode::DegenerateForm, to_string(kind) + " needs a non-degenerate form");
    if (!is_b_singular(*b, flag)) fail(ErrorCode::FlagNotSingular, "top space of the flag is not totally singular");
    nu = witt_index(*b);
    if (flag.length() != nu)
      fail(ErrorCode::FlagNotMaximal,
           "flag length " + std::to_string(flag.length()) + " differs from the Witt index " + std::to_string(nu));
    adaptation = kind == SpaceKind::WS ? Adaptation::b_symmetric : Adaptation::b_alternating;
    push_adaptation_constraints(rows, *b, *adaptation);
  }
  for (size_t i = 1; i < flag.spaces.size(); ++i) push_map_constraints(rows, flag.spaces[i], flag.spaces[i - 1]);
  if (kind != SpaceKind::NF) push_map_constraints(rows, b->orthogonal(flag.spaces.back()), flag.spaces.back());

  Subspace sol = Subspace::kernel(Matrix::from_rows(f, n * n, rows));
  std::vector<Matrix> gens;
  for (size_t i = 0; i < sol.dim(); ++i) gens.push_back(Matrix::unflatten(f, n, sol.vector(i)));
  OperatorSpace v(f, n, gens, b, adaptation);
  const size_t want = expected_dimension(kind, n, nu);
  if (v.dim() != want)
    fail(ErrorCode::DimensionMismatch,
         to_string(kind) + " has dimension " + std::to_string(v.dim()) + ", expected " + std::to_string(want));
  audit_nilpotency(v, opts);
  return v;
}

// ---------------------------------------------------------------------------
// caps

size_t space_witt_index(const OperatorSpace& v) { return v.form() ? witt_index(*v.form()) : 0; }

namespace {

bool alt_over_hyperbolic(const OperatorSpace& v, size_t nu) {
  return v.form() && v.adaptation() == Adaptation::b_alternating && v.form()->kind() == FormKind::symmetric &&
         v.n() == 2 * nu;
}

}  // namespace

size_t nilindex_cap(const OperatorSpace& v) {
  const size_t n = v.n();
  if (!v.adaptation()) return n;
  const size_t nu = space_witt_index(v);
  if (alt_over_hyperbolic(v, nu)) return n == 0 ? 0 : n - 1;
  return std::min(n, 2 * nu + 1);
}

size_t rank_cap(const OperatorSpace& v) {
  const size_t n = v.n();
  if (n == 0) return 0;
  if (!v.adaptation()) return n - 1;
  const size_t nu = space_witt_index(v);
  if (alt_over_hyperbolic(v, nu)) return n >= 2 ? n - 2 : 0;
  return std::min(2 * nu, n - 1);
}

bool has_maximal_dimension(const OperatorSpace& v) {
  if (!v.adaptation()) return v.dim() == expected_dimension(SpaceKind::NF, v.n(), 0);
  const size_t nu = space_witt_index(v);
  SpaceKind k = *v.adaptation() == Adaptation::b_symmetric ? SpaceKind::WS : SpaceKind::WA;
  return v.dim() == expected_dimension(k, v.n(), nu);
}

// ---------------------------------------------------------------------------
// element sweeps

bool for_each_element(const OperatorSpace& v, const SweepOptions& opts,
                      const std::function<bool(const Matrix&, const Vector&)>& visit) {
  const FieldSpec& f = v.field();
  const size_t k = v.dim();
  if (exhaustive_within(f, k, opts.budget)) {
    const uint32_t p = f.characteristic();
    const uint64_t total = element_count(f, k);
    std::vector<uint32_t> d(k, 0);
    Matrix a(f, v.n(), v.n());
    for (size_t i = 0; i < a.rows(); ++i)
      for (size_t j = 0; j < a.cols(); ++j) a(i, j) = f.zero();
    for (uint64_t idx = 0; idx < total; ++idx) {
      Vector c;
      for (uint32_t x : d) c.push_back(f.from_int(x));
      if (!visit(a, c)) return true;
      for (size_t i = k; i-- > 0;) {
        a = a + v.basis()[i];
        if (++d[i] < p) break;
        d[i] = 0;
      }
    }
    return true;
  }
  Rng rng(opts.seed);
  for (size_t s = 0; s < opts.samples; ++s) {
    Vector c = random_vector(f, k, rng);
    if (!visit(v.element(c), c)) break;
  }
  return false;
}

// ---------------------------------------------------------------------------
// generic profile

namespace {

// Echelon basis over F_p built incrementally; rows are reduced against the
// earlier rows in insertion order.
struct FpBasis {
  uint32_t p = 2;
  size_t n = 0;
  std::vector<std::vector<uint32_t>> rows;
  std::vector<size_t> pivots;

  bool add(std::vector<uint32_t> v) {
    for (size_t r = 0; r < rows.size(); ++r) {
      uint32_t c = v[pivots[r]];
      if (!c) continue;
      for (size_t j = 0; j < n; ++j) v[j] = modp::sub(v[j], modp::mul(c, rows[r][j], p), p);
    }
    size_t lead = 0;
    while (lead < n && v[lead] == 0) ++lead;
    if (lead == n) return false;
    uint32_t inv = modp::inv(v[lead], p);
    for (auto& x : v) x = modp::mul(x, inv, p);
    rows.push_back(std::move(v));
    pivots.push_back(lead);
    return true;
  }
};

constexpr size_t kPoolSize = 256;

struct FpAcc {
  size_t best = 0;
  bool seen = false;
  uint64_t inspected = 0;
  uint64_t top = 0;
  bool pure = true;
  FpBasis K;
  std::vector<std::vector<uint32_t>> top_images;
  std::vector<std::vector<uint32_t>> pool;
  fp::Mat witness;
  std::optional<std::pair<uint64_t, fp::Mat>> bad;
};

// Nilindex by iterating u on each standard basis vector; the last nonzero
// iterates of the longest chains span im u^{ind-1}.
void fp_visit(const fp::Mat& a, FpAcc& acc, uint64_t idx) {
  const size_t n = a.n;
  const uint32_t p = a.p;
  ++acc.inspected;
  size_t ind = 0;
  std::vector<std::vector<uint32_t>> tops;
  std::vector<uint32_t> v(n), w(n);
  for (size_t j = 0; j < n; ++j) {
    std::fill(v.begin(), v.end(), 0);
    v[j] = 1;
    size_t s = 0;
    std::vector<uint32_t> last;
    while (std::any_of(v.begin(), v.end(), [](uint32_t x) { return x != 0; })) {
      if (s == n) {
        if (!acc.bad) acc.bad = std::make_pair(idx, a);
        return;
      }
      last = v;
      fp::apply_into(a, v, w);
      std::swap(v, w);
      ++s;
    }
    if (s > ind) {
      ind = s;
      tops.clear();
    }
    if (s == ind && s > 0) tops.push_back(std::move(last));
  }
  if (!acc.seen || ind > acc.best) {
    acc.seen = true;
    acc.best = ind;
    acc.top = 0;
    acc.pure = true;
    acc.K = FpBasis{p, n, {}, {}};
    acc.top_images.clear();
    acc.pool.clear();
    acc.witness = a;
  }
  if (ind < acc.best) return;
  ++acc.top;
  FpBasis local{p, n, {}, {}};
  for (const auto& t : tops) local.add(t);
  if (local.rows.size() > 1) acc.pure = false;
  for (const auto& t : tops)
    if (acc.K.add(t)) acc.top_images.push_back(t);
  if (acc.pool.size() < kPoolSize && !tops.empty()) acc.pool.push_back(tops.front());
  // im u^{p-1} is more than its columns; the column sum adds a mixed vector
  if (acc.pool.size() < kPoolSize && tops.size() > 1) {
    std::vector<uint32_t> sum(n, 0);
    for (const auto& t : tops)
      for (size_t i = 0; i < n; ++i) sum[i] = (sum[i] + t[i]) % p;
    if (std::any_of(sum.begin(), sum.end(), [](uint32_t x) { return x != 0; })) acc.pool.push_back(std::move(sum));
  }
}

Vector lift_fp(const FieldSpec& f, const std::vector<uint32_t>& v) {
  Vector r;
  for (uint32_t x : v) r.push_back(f.from_int(x));
  return r;
}

std::string describe(const fp::Mat& m) { return to_json(fp::to_matrix(m)).dump(); }

GenericProfile fp_profile(const OperatorSpace& v, const SweepOptions& opts, bool exhaustive) {
  const FieldSpec& f = v.field();
  const uint32_t p = f.characteristic();
  const size_t n = v.n(), k = v.dim();
  std::vector<fp::Mat> basis;
  for (const auto& u : v.basis()) basis.push_back(fp::from_matrix(u));

  std::vector<std::vector<uint32_t>> samples;
  uint64_t total = 0;
  if (exhaustive) {
    total = element_count(f, k);
  } else {
    Rng rng(opts.seed);
    for (size_t s = 0; s < opts.samples; ++s) {
      std::vector<uint32_t> d(k);
      for (auto& x : d) x = static_cast<uint32_t>(rng() % p);
      samples.push_back(std::move(d));
    }
    total = samples.size();
  }
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<FpAcc> accs(std::min<uint64_t>(threads, std::max<uint64_t>(total, 1)));
  run_chunks(total, threads, [&](size_t c, uint64_t begin, uint64_t end) {
    FpAcc& acc = accs[c];
    if (exhaustive) {
      fp_enumerate(basis, p, n, begin, end, [&](const fp::Mat& a, const std::vector<uint32_t>&, uint64_t idx) {
        fp_visit(a, acc, idx);
        return !acc.bad;
      });
    } else {
      for (uint64_t s = begin; s < end && !acc.bad; ++s) {
        fp::Mat a(p, n);
        for (size_t i = 0; i < k; ++i) a.add_scaled(basis[i], samples[s][i]);
        fp_visit(a, acc, s);
      }
    }
  });

  // deterministic merge in chunk order
  for (const auto& acc : accs)
    if (acc.bad) fail(ErrorCode::NotNilpotent, "element " + describe(acc.bad->second) + " is not nilpotent");
  GenericProfile prof;
  prof.exhaustive = exhaustive;
  prof.cap = nilindex_cap(v);
  for (const auto& acc : accs) prof.p = std::max(prof.p, acc.best);
  FpBasis K{p, n, {}, {}};
  bool have_witness = false;
  for (const auto& acc : accs) {
    prof.inspected += acc.inspected;
    if (!acc.seen || acc.best != prof.p) continue;
    prof.top_count += acc.top;
    prof.pure = prof.pure && acc.pure;
    if (!have_witness) {
      prof.witness = fp::to_matrix(acc.witness);
      have_witness = true;
    }
    for (const auto& t : acc.top_images)
      if (K.add(t)) prof.top_images.push_back(lift_fp(f, t));
    for (const auto& t : acc.pool)
      if (prof.bullet_pool.size() < kPoolSize) prof.bullet_pool.push_back(lift_fp(f, t));
  }
  prof.K = Subspace::span(f, n, prof.top_images);
  if (!have_witness) prof.witness = Matrix(f, n, n);
  return prof;
}

GenericProfile generic_sampled_profile(const OperatorSpace& v, const SweepOptions& opts) {
  const FieldSpec& f = v.field();
  const size_t n = v.n();
  GenericProfile prof;
  prof.cap = nilindex_cap(v);
  prof.K = Subspace(f, n);
  bool seen = false;
  Rng rng(opts.seed);
  for (size_t s = 0; s < opts.samples; ++s) {
    Matrix u = v.element(random_vector(f, v.dim(), rng));
    auto ind = nilindex(u);
    if (!ind) fail(ErrorCode::NotNilpotent, "element " + to_json(u).dump() + " is not nilpotent");
    ++prof.inspected;
    if (!seen || *ind > prof.p) {
      seen = true;
      prof.p = *ind;
      prof.top_count = 0;
      prof.pure = true;
      prof.K = Subspace(f, n);
      prof.top_images.clear();
      prof.bullet_pool.clear();
      prof.witness = u;
    }
    if (*ind < prof.p || *ind == 0) continue;
    ++prof.top_count;
    Matrix img = image_basis(u.power(*ind - 1));
    if (img.rows() > 1) prof.pure = false;
    for (size_t i = 0; i < img.rows(); ++i) {
      Vector t = img.row(i);
      if (!prof.K.contains(t)) {
        prof.K = prof.K.with(t);
        prof.top_images.push_back(t);
      }
      if (prof.bullet_pool.size() < kPoolSize) prof.bullet_pool.push_back(t);
    }
    if (img.rows() > 1 && prof.bullet_pool.size() < kPoolSize) {
      Vector sum = img.row(0);
      for (size_t i = 1; i < img.rows(); ++i) sum = sum + img.row(i);
      prof.bullet_pool.push_back(sum);
    }
  }
  if (!seen) prof.witness = Matrix(f, n, n);
  return prof;
}

}  // namespace

std::string to_string(ProfileStatus s) { return s == ProfileStatus::exact ? "exact" : "lower_bound"; }

GenericProfile generic_profile(const OperatorSpace& v, const SweepOptions& opts) {
  const FieldSpec& f = v.field();
  GenericProfile prof;
  if (f.is_finite()) prof = fp_profile(v, opts, exhaustive_within(f, v.dim(), opts.budget));
  else prof = generic_sampled_profile(v, opts);
  prof.status = prof.exhaustive || prof.p == prof.cap ? ProfileStatus::exact : ProfileStatus::lower_bound;
  return prof;
}

std::optional<std::vector<Vector>> linear_density_basis(const GenericProfile& prof, const std::vector<Subspace>& avoid,
                                                        Rng& rng) {
  for (const auto& s : avoid)
    require(prof.K.contains(s) && s.dim() < prof.K.dim(), ErrorCode::PreconditionViolated,
            "avoided spaces must be proper subspaces of K(V)");
  std::vector<Vector> cand = prof.top_images;
  cand.insert(cand.end(), prof.bullet_pool.begin(), prof.bullet_pool.end());
  std::shuffle(cand.begin(), cand.end(), rng);
  std::vector<Vector> chosen;
  Subspace span(prof.K.field(), prof.K.ambient_dim());
  for (const auto& c : cand) {
    if (span.dim() == prof.K.dim()) break;
    bool bad = span.contains(c);
    for (const auto& s : avoid) bad = bad || s.contains(c);
    if (bad) continue;
    span = span.with(c);
    chosen.push_back(c);
  }
  if (span.dim() != prof.K.dim()) return std::nullopt;
  return chosen;
}

// ---------------------------------------------------------------------------
// reduction data

namespace {

// y -> vec(T(y)) as an n^2 x n matrix, then the y with T(y) in V.
Subspace preimage_in_space(const OperatorSpace& v, const std::function<Matrix(const Vector&)>& t) {
  const FieldSpec& f = v.field();
  const size_t n = v.n();
  std::vector<Vector> cols;
  for (size_t j = 0; j < n; ++j) cols.push_back(t(unit_vector(f, n, j)).flatten());
  Matrix m = Matrix::from_columns(f, n * n, cols);
  return Subspace::kernel(v.flat().annihilator() * m);
}

}  // namespace

ReductionData reduction_data(const OperatorSpace& v, const Vector& x) {
  const FieldSpec& f = v.field();
  const size_t n = v.n();
  require(x.size() == n, ErrorCode::DimensionMismatch, "reduction vector length");
  require(!is_zero(x), ErrorCode::ZeroVector, "reduction at the zero vector");
  ReductionData rd;
  rd.x = x;
  rd.Vx = v.apply_to(x);

  // U_{V,x}: coefficient vectors c with sum c_i u_i(x) = 0
  std::vector<Vector> ux;
  for (const auto& u : v.basis()) ux.push_back(u.apply(x));
  std::vector<Matrix> ugens;
  if (!v.basis().empty()) {
    Matrix k = kernel_basis(Matrix::from_columns(f, n, ux));
    for (size_t i = 0; i < k.rows(); ++i) ugens.push_back(v.element(k.row(i)));
  }
  rd.U = OperatorSpace(f, n, ugens, v.form(), v.adaptation());

  if (v.adaptation()) {
    const BilinearForm& b = *v.form();
    require(b(x, x).is_zero(), ErrorCode::NonIsotropicVector, "b(x, x) = " + b(x, x).to_string());
    TensorKind tk = *v.adaptation() == Adaptation::b_symmetric ? TensorKind::sym : TensorKind::alt;
    rd.L = preimage_in_space(v, [&](const Vector& y) { return b_tensor(b, x, y, tk); });
    rd.Vdual_x = Subspace(f, n);
    QuotientForm qf = quotient_form(b, x);
    std::vector<Matrix> qgens;
    for (const auto& u : ugens) qgens.push_back(qf.quotient.induced(u));
    rd.quotient = OperatorSpace(f, qf.quotient.dim(), qgens, qf.form, v.adaptation());
    const size_t lhs = v.dim();
    const size_t rhs = rd.Vx.dim() + rd.L.dim() + rd.quotient.dim();
    rd.bookkeeping_holds = tk == TensorKind::sym ? lhs == rhs : lhs + 1 == rhs;
  } else {
    rd.L = Subspace(f, n);
    rd.Vdual_x = preimage_in_space(v, [&](const Vector& fv) { return Matrix::outer(f, x, fv); });
    LineQuotient q(Subspace::full(f, n), x);
    std::vector<Matrix> qgens;
    for (const auto& u : ugens) qgens.push_back(q.induced(u));
    rd.quotient = OperatorSpace(f, q.dim(), qgens);
    rd.bookkeeping_holds = v.dim() == rd.Vx.dim() + rd.Vdual_x.dim() + rd.quotient.dim();
  }
  return rd;
}

// ---------------------------------------------------------------------------
// theorem checks

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::trace: return "trace";
    case CheckKind::cubes: return "cubes";
    case CheckKind::jordan_product_triple: return "jordan_product_triple";
    case CheckKind::strong_orthogonality: return "strong_orthogonality";
    case CheckKind::tangent_inclusion: return "tangent_inclusion";
    case CheckKind::reducibility: return "reducibility";
    default: return "tensor_orthogonality";
  }
}

CheckKind parse_check_kind(std::string_view s) {
  for (CheckKind k : {CheckKind::trace, CheckKind::cubes, CheckKind::jordan_product_triple,
                      CheckKind::strong_orthogonality, CheckKind::tangent_inclusion, CheckKind::reducibility,
                      CheckKind::tensor_orthogonality})
    if (to_string(k) == s) return k;
  if (s == "triple") return CheckKind::jordan_product_triple;
  if (s == "tangent") return CheckKind::tangent_inclusion;
  fail(ErrorCode::ParseError, "unknown check '" + std::string(s) + "'");
}

std::optional<Matrix> polarized_cube_failure(const OperatorSpace& v, const std::function<bool(const Matrix&)>& accept) {
  const auto& b = v.basis();
  for (size_t i = 0; i < b.size(); ++i)
    for (size_t j = i; j < b.size(); ++j)
      for (size_t k = j; k < b.size(); ++k) {
        std::array<size_t, 3> idx{i, j, k};
        Matrix s = b[i] - b[i];
        do {
          s = s + b[idx[0]] * b[idx[1]] * b[idx[2]];
        } while (std::next_permutation(idx.begin(), idx.end()));
        if (!accept(s)) return s;
      }
  return std::nullopt;
}

std::optional<Matrix> polarized_triple_failure(const OperatorSpace& v) {
  const auto& b = v.basis();
  for (const auto& w : b)
    for (size_t i = 0; i < b.size(); ++i)
      for (size_t j = i; j < b.size(); ++j) {
        auto term = [&](const Matrix& x, const Matrix& y) { return x * y * w + x * w * y + w * x * y; };
        Matrix s = term(b[i], b[j]);
        if (i != j) s = s + term(b[j], b[i]);
        if (!v.contains(s)) return s;
      }
  return std::nullopt;
}

namespace {

Verdict unmet(Verdict v, std::string why) {
  v.status = VerdictStatus::hypothesis_unmet;
  v.note = std::move(why);
  return v;
}

std::string field_size(const FieldSpec& f) {
  auto o = f.order();
  return o ? std::to_string(*o) : "infinite";
}

std::optional<Vector> default_isotropic(const OperatorSpace& v) {
  if (!v.form()) return std::nullopt;
  return find_isotropic(*v.form()).vector;
}

Verdict check_trace(const OperatorSpace& v, const CheckRequest& req, const SweepOptions& opts, Verdict out) {
  for (size_t k : req.ks)
    if (!v.field().has_at_least(k + 1))
      return unmet(out, "k = " + std::to_string(k) + " needs |F| > k, |F| = " + field_size(v.field()));
  uint64_t elements = 0, pairs = 0;
  out.counters["exhaustive"] = for_each_element(v, opts, [&](const Matrix& u, const Vector&) {
    ++elements;
    for (size_t k : req.ks) {
      Matrix uk = u.power(k);
      for (const auto& b : v.basis()) {
        ++pairs;
        Scalar tr = (uk * b).trace();
        if (!tr.is_zero()) {
          out.status = VerdictStatus::fail;
          out.witness = {{"u", to_json(u)}, {"v", to_json(b)}, {"k", k}, {"trace", tr.to_string()}};
          return false;
        }
      }
    }
    return true;
  });
  out.counters["elements"] = elements;
  out.counters["pairs"] = pairs;
  return out;
}

Verdict check_cubes(const OperatorSpace& v, bool triple, const SweepOptions& opts, Verdict out) {
  if (!v.field().has_at_least(4)) return unmet(out, "needs |F| > 3, |F| = " + field_size(v.field()));
  out.counters["maximal_dimension"] = has_maximal_dimension(v);
  uint64_t elements = 0;
  out.counters["exhaustive"] = for_each_element(v, opts, [&](const Matrix& u, const Vector&) {
    ++elements;
    Matrix u2 = u * u;
    if (!triple) {
      Matrix c = u2 * u;
      if (!v.contains(c)) {
        out.status = VerdictStatus::fail;
        out.witness = {{"u", to_json(u)}, {"u3", to_json(c)}};
        return false;
      }
      return true;
    }
    for (const auto& b : v.basis()) {
      Matrix t = u2 * b + u * b * u + b * u2;
      if (!v.contains(t)) {
        out.status = VerdictStatus::fail;
        out.witness = {{"u", to_json(u)}, {"v", to_json(b)}, {"triple", to_json(t)}};
        return false;
      }
    }
    return true;
  });
  out.counters["elements"] = elements;
  if (out.status == VerdictStatus::pass) {
    auto bad = triple ? polarized_triple_failure(v)
                      : polarized_cube_failure(v, [&](const Matrix& m) { return v.contains(m); });
    out.counters["polarized_certificate"] = !bad.has_value();
    if (bad) {
      out.status = VerdictStatus::fail;
      out.witness = {{"polarized_product", to_json(*bad)}};
    }
  }
  return out;
}

Verdict check_strong_orthogonality(const OperatorSpace& v, const CheckRequest& req, Verdict out) {
  if (!v.adaptation()) return unmet(out, "needs a form-adapted space");
  if (!has_maximal_dimension(v)) return unmet(out, "needs a space of maximal dimension");
  const BilinearForm& b = *v.form();
  std::optional<Vector> x = req.x ? req.x : default_isotropic(v);
  if (!x || is_zero(*x)) return unmet(out, "no nonzero isotropic vector");
  if (!b(*x, *x).is_zero()) return unmet(out, "x is not isotropic");
  ReductionData rd = reduction_data(v, *x);
  Subspace fxvx = rd.Vx.with(*x);
  Subspace lperp = b.orthogonal(rd.L);
  const size_t nu = space_witt_index(v);
  SpaceKind k = *v.adaptation() == Adaptation::b_symmetric ? SpaceKind::WS : SpaceKind::WA;
  const bool quotient_max = rd.quotient.dim() == expected_dimension(k, v.n() - 2, nu - 1);
  const bool ok = fxvx == lperp && fxvx.dim() + rd.L.dim() == v.n() && rd.bookkeeping_holds && quotient_max;
  out.counters = {{"dim_Fx_plus_Vx", fxvx.dim()}, {"dim_L", rd.L.dim()}, {"dim_quotient", rd.quotient.dim()},
                  {"dim_V", v.dim()},           {"n", v.n()},            {"bookkeeping", rd.bookkeeping_holds}};
  if (!ok) {
    out.status = VerdictStatus::fail;
    out.witness = {{"x", to_json(*x)}, {"Fx_plus_Vx", to_json(fxvx)}, {"L_perp", to_json(lperp)}};
  }
  return out;
}

Verdict check_tangent(const OperatorSpace& v, const SweepOptions& opts, Verdict out) {
  GenericProfile prof = generic_profile(v, opts);
  if (!v.field().has_at_least(prof.p)) return unmet(out, "needs |F| >= p = " + std::to_string(prof.p));
  uint64_t tops = 0;
  out.counters["p"] = prof.p;
  out.counters["exhaustive"] = for_each_element(v, opts, [&](const Matrix& u, const Vector&) {
    auto ind = nilindex(u);
    if (!ind || *ind != prof.p || prof.p == 0) return true;
    ++tops;
    Matrix img = image_basis(u.power(prof.p - 1));
    std::vector<Vector> uk;
    for (size_t i = 0; i < prof.K.dim(); ++i) uk.push_back(u.apply(prof.K.vector(i)));
    Subspace uK = Subspace::span(v.field(), v.n(), uk);
    for (size_t i = 0; i < img.rows(); ++i)
      for (const auto& b : v.basis()) {
        Vector bx = b.apply(img.row(i));
        if (!uK.contains(bx)) {
          out.status = VerdictStatus::fail;
          out.witness = {{"u", to_json(u)}, {"v", to_json(b)}, {"x", to_json(img.row(i))}};
          return false;
        }
      }
    return true;
  });
  out.counters["top_elements"] = tops;
  return out;
}

Verdict check_reducibility(const OperatorSpace& v, const CheckRequest& req, const SweepOptions& opts, Verdict out) {
  GenericProfile prof = generic_profile(v, opts);
  if (!v.field().has_at_least(prof.p)) return unmet(out, "needs |F| >= p = " + std::to_string(prof.p));
  std::optional<Vector> x = req.x;
  if (!x && !prof.top_images.empty()) x = prof.top_images.front();
  if (!x || is_zero(*x)) return unmet(out, "no nonzero vector of V^* available");
  bool in_bullet = false;
  for_each_element(v, opts, [&](const Matrix& u, const Vector&) {
    auto ind = nilindex(u);
    if (ind && *ind == prof.p && prof.p > 0 && Subspace::image(u.power(prof.p - 1)).contains(*x)) in_bullet = true;
    return !in_bullet;
  });
  if (!in_bullet) return unmet(out, "x was not found in V^* by the sweep");
  Subspace vx = v.apply_to(*x);
  Subspace c = vx.with(*x);
  out.counters = {{"p", prof.p}, {"dim_K", prof.K.dim()}, {"dim_Vx", vx.dim()}};
  if (!c.contains(prof.K)) return unmet(out, "K(V) is not inside Fx + Vx");
  if (!vx.is_zero()) {
    out.status = VerdictStatus::fail;
    out.witness = {{"x", to_json(*x)}, {"Vx", to_json(vx)}};
  }
  return out;
}

Verdict check_tensor_orthogonality(const OperatorSpace& v, const CheckRequest& req, const SweepOptions& opts,
                                   Verdict out) {
  if (!v.adaptation()) return unmet(out, "needs a form-adapted space");
  const BilinearForm& b = *v.form();
  std::optional<Vector> x = req.x ? req.x : default_isotropic(v);
  if (!x || is_zero(*x)) return unmet(out, "no nonzero isotropic vector");
  if (!b(*x, *x).is_zero()) return unmet(out, "x is not isotropic");
  TensorKind tk = *v.adaptation() == Adaptation::b_symmetric ? TensorKind::sym : TensorKind::alt;
  Subspace L = preimage_in_space(v, [&](const Vector& y) { return b_tensor(b, *x, y, tk); });
  std::vector<size_t> ks;
  for (size_t k = 1; k < v.n() && v.field().has_at_least(k + 1); k += 2) ks.push_back(k);
  uint64_t elements = 0;
  out.counters["dim_L"] = L.dim();
  out.counters["exponents"] = ks;
  out.counters["exhaustive"] = for_each_element(v, opts, [&](const Matrix& u, const Vector&) {
    ++elements;
    Vector ukx = *x;
    size_t done = 0;
    for (size_t k : ks) {
      while (done < k) {
        ukx = u.apply(ukx);
        ++done;
      }
      for (size_t i = 0; i < L.dim(); ++i)
        if (!b(L.vector(i), ukx).is_zero()) {
          out.status = VerdictStatus::fail;
          out.witness = {{"v", to_json(u)}, {"y", to_json(L.vector(i))}, {"k", k}, {"x", to_json(*x)}};
          return false;
        }
    }
    return true;
  });
  out.counters["elements"] = elements;
  return out;
}

}  // namespace

Verdict theorem_check(const OperatorSpace& v, const CheckRequest& req, const SweepOptions& opts) {
  Verdict out;
  out.check = to_string(req.which);
  if (req.x) require(req.x->size() == v.n(), ErrorCode::DimensionMismatch, "check vector length");
  switch (req.which) {
    case CheckKind::trace: return check_trace(v, req, opts, out);
    case CheckKind::cubes: return check_cubes(v, false, opts, out);
    case CheckKind::jordan_product_triple: return check_cubes(v, true, opts, out);
    case CheckKind::strong_orthogonality: return check_strong_orthogonality(v, req, out);
    case CheckKind::tangent_inclusion: return check_tangent(v, opts, out);
    case CheckKind::reducibility: return check_reducibility(v, req, opts, out);
    default: return check_tensor_orthogonality(v, req, opts, out);
  }
}

// ---------------------------------------------------------------------------
// extension of scalars

Matrix embed_matrix(const Matrix& m, const FieldSpec& target) {
  if (m.field() == target) return m;
  require(target.kind() == FieldSpec::Kind::rational_functions && m.field().is_finite() &&
              m.field().characteristic() == target.characteristic(),
          ErrorCode::UnsupportedExtension, m.field().to_string() + " -> " + target.to_string());
  Matrix r(target, m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r(i, j) = target.from_int(m(i, j).residue());
  return r;
}

ExtensionReport extend_scalars(const OperatorSpace& v, const FieldSpec& target, size_t checks, uint64_t seed) {
  const FieldSpec& base = v.field();
  const size_t n = v.n();
  ExtensionReport rep;
  std::optional<BilinearForm> form;
  if (v.form()) form = BilinearForm(embed_matrix(v.form()->gram(), target), v.form()->kind());
  std::vector<Matrix> gens;
  for (const auto& u : v.basis()) gens.push_back(embed_matrix(u, target));
  if (base == target) {
    rep.extended = v;
  } else {
    rep.extended = OperatorSpace(target, n, gens, form, v.adaptation());
    require(rep.extended.dim() == v.dim(), ErrorCode::VerificationFailed, "extension lost dimension");
  }

  // cardinality needed for nilpotency to survive: |F| >= d, d the generic
  // nilindex of the ambient class
  size_t d = n;
  if (v.adaptation()) {
    const size_t nu = space_witt_index(v);
    const bool sym_form = v.form()->kind() == FormKind::symmetric;
    if (sym_form && *v.adaptation() == Adaptation::b_alternating) d = n == 2 * nu ? (n ? n - 1 : 0) : 2 * nu + 1;
    else if (!sym_form && *v.adaptation() == Adaptation::b_symmetric) d = n;
    else d = std::min(n, 2 * nu + 1);
  }
  rep.hypothesis = "|F| >= " + std::to_string(d);
  rep.hypotheses_met = base.has_at_least(d);

  const FieldSpec& tf = target;
  auto audit = [&](const Matrix& u) {
    auto ind = nilindex(u);
    ++rep.checks_run;
    if (!ind) {
      rep.all_nilpotent = false;
      if (!rep.failure) rep.failure = u;
      return size_t{0};
    }
    rep.max_nilindex = std::max(rep.max_nilindex, *ind);
    return *ind;
  };
  // sum t^{i-1} u_i
  Matrix dist(tf, n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) dist(i, j) = tf.zero();
  Scalar tp = tf.one();
  const Scalar t = tf.kind() == FieldSpec::Kind::rational_functions ? Scalar(RatFunc(Poly::variable(tf.characteristic())))
                                                                    : tf.one();
  for (const auto& u : rep.extended.basis()) {
    dist = dist + u.scaled(tp);
    tp = tp * t;
  }
  rep.distinguished = dist;
  rep.distinguished_nilindex = audit(dist);
  Rng rng(seed);
  for (size_t c = 0; c < checks; ++c) audit(rep.extended.element(random_vector(tf, rep.extended.dim(), rng)));
  return rep;
}

}  // namespace structnil
