#include "structnil/oracle.hpp"

#include <algorithm>

#include "structnil/json_io.hpp"

namespace structnil {

std::string to_string(OracleProperty p) {
  switch (p) {
    case OracleProperty::all_nilpotent: return "all_nilpotent";
    case OracleProperty::rank_bound: return "rank_bound";
    case OracleProperty::nilindex_cap: return "nilindex_cap";
    case OracleProperty::purity: return "purity";
    case OracleProperty::isotropic_top_images: return "isotropic_top_images";
    case OracleProperty::tangent_inclusion: return "tangent_inclusion";
    default: return "reducibility_contrapositive";
  }
}

OracleProperty parse_oracle_property(std::string_view s) {
  for (auto p : {OracleProperty::all_nilpotent, OracleProperty::rank_bound, OracleProperty::nilindex_cap,
                 OracleProperty::purity, OracleProperty::isotropic_top_images, OracleProperty::tangent_inclusion,
                 OracleProperty::reducibility_contrapositive})
    if (s == to_string(p)) return p;
  if (s == "tangent") return OracleProperty::tangent_inclusion;
  if (s == "reducibility") return OracleProperty::reducibility_contrapositive;
  fail(ErrorCode::ParseError, "unknown oracle property '" + std::string(s) + "'");
}

namespace {

using Col = std::vector<uint32_t>;

/// Echelon basis over F_p grown one vector at a time.
struct FpSpan {
  uint32_t p = 2;
  std::vector<Col> rows;
  std::vector<size_t> piv;

  bool insert(Col v) {
    for (size_t r = 0; r < rows.size(); ++r) {
      uint32_t c = v[piv[r]];
      if (!c) continue;
      for (size_t j = 0; j < v.size(); ++j) v[j] = modp::sub(v[j], modp::mul(c, rows[r][j], p), p);
    }
    size_t lead = 0;
    while (lead < v.size() && v[lead] == 0) ++lead;
    if (lead == v.size()) return false;
    uint32_t inv = modp::inv(v[lead], p);
    for (auto& x : v) x = modp::mul(x, inv, p);
    for (auto& row : rows) {
      uint32_t c = row[lead];
      if (!c) continue;
      for (size_t j = 0; j < v.size(); ++j) row[j] = modp::sub(row[j], modp::mul(c, v[j], p), p);
    }
    rows.push_back(std::move(v));
    piv.push_back(lead);
    return true;
  }
};

Vector lift(const FieldSpec& f, const Col& c) {
  Vector v;
  for (uint32_t x : c) v.push_back(f.from_int(x));
  return v;
}

/// One element as seen by the property evaluators.
struct Elem {
  uint64_t idx = 0;
  size_t ind = 0;  // 0 when u^n != 0
  size_t rank = 0;
  size_t top_rank = 0;
  /// Columns of u^{ind-1} (a spanning set of the top image).
  std::vector<Vector> top;
  std::vector<Col> top_fp;
  std::function<Matrix()> matrix;
};

struct Needs {
  bool rank = false;
  bool top_rank = false;
  bool top = false;
  bool top_fp = false;
};

struct Acc {
  // configuration
  const OperatorSpace* v = nullptr;
  OracleProperty prop = OracleProperty::all_nilpotent;
  size_t bound = 0;
  size_t p = 0;        // second pass: generic nilindex
  Subspace K;          // second pass: K(V)
  std::optional<Matrix> gram;

  // results
  uint64_t elements = 0;
  size_t max_ind = 0;
  size_t max_rank = 0;
  uint64_t at_max = 0;
  bool impure_at_max = false;
  json impure_witness;
  std::optional<uint64_t> fail_idx;
  json witness;
  FpSpan kfp;
  std::vector<Vector> kgen;
  uint64_t tops = 0;
  uint64_t condition_c = 0;
  uint64_t vectors_tested = 0;

  void fail_with(const Elem& e, json w) {
    if (fail_idx) return;
    fail_idx = e.idx;
    w["index"] = e.idx;
    if (!w.contains("u")) w["u"] = to_json(e.matrix());
    witness = std::move(w);
  }

  void add_vector(const Vector& x) {
    if (v->field().is_finite()) {
      Col c;
      for (const auto& z : x) c.push_back(z.residue());
      if (kfp.insert(std::move(c))) kgen.push_back(x);
    } else if (!Subspace::span(v->field(), v->n(), kgen).contains(x)) {
      kgen.push_back(x);
    }
  }

  void add_top(const Elem& e) {
    for (const auto& c : e.top_fp)
      if (kfp.insert(c)) kgen.push_back(lift(v->field(), c));
    for (const auto& c : e.top) add_vector(c);
  }

  void track_max(const Elem& e) {
    if (e.ind > max_ind) {
      max_ind = e.ind;
      at_max = 0;
      impure_at_max = false;
      impure_witness = nullptr;
      kfp = FpSpan{kfp.p, {}, {}};
      kgen.clear();
    }
    if (e.ind == max_ind) {
      ++at_max;
      if (e.top_rank > 1 && !impure_at_max) {
        impure_at_max = true;
        impure_witness = {{"u", to_json(e.matrix())}, {"index", e.idx}, {"rank_top", e.top_rank}};
      }
      if (!e.top.empty() || !e.top_fp.empty()) add_top(e);
    }
  }

  bool visit(const Elem& e) {
    ++elements;
    max_rank = std::max(max_rank, e.rank);
    if (e.ind == 0) {
      fail_with(e, {{"reason", "not nilpotent"}});
      return false;
    }
    switch (prop) {
      case OracleProperty::all_nilpotent:
      case OracleProperty::purity: track_max(e); break;
      case OracleProperty::rank_bound:
        if (e.rank > bound) {
          fail_with(e, {{"rank", e.rank}, {"bound", bound}});
          return false;
        }
        break;
      case OracleProperty::nilindex_cap:
        max_ind = std::max(max_ind, e.ind);
        if (e.ind > bound) {
          fail_with(e, {{"nilindex", e.ind}, {"cap", bound}});
          return false;
        }
        break;
      case OracleProperty::isotropic_top_images:
        max_ind = std::max(max_ind, e.ind);
        if (e.ind >= 2) {
          ++tops;
          Matrix t = Matrix::from_columns(v->field(), v->n(), e.top);
          if (!(t.transpose() * *gram * t).is_zero()) {
            fail_with(e, {{"top_image", to_json(image_basis(t))}});
            return false;
          }
        }
        break;
      case OracleProperty::tangent_inclusion: return visit_tangent(e);
      case OracleProperty::reducibility_contrapositive: return visit_reducibility(e);
    }
    return true;
  }

  bool visit_tangent(const Elem& e) {
    if (e.ind != p) return true;
    ++tops;
    Matrix u = e.matrix();
    std::vector<Vector> uk;
    for (size_t i = 0; i < K.dim(); ++i) uk.push_back(u.apply(K.vector(i)));
    Subspace uK = Subspace::span(v->field(), v->n(), uk);
    for (const auto& x : e.top)
      for (const auto& b : v->basis())
        if (!uK.contains(b.apply(x))) {
          fail_with(e, {{"u", to_json(u)}, {"v", to_json(b)}, {"x", to_json(x)}});
          return false;
        }
    return true;
  }

  bool visit_reducibility(const Elem& e) {
    if (e.ind != p) return true;
    ++tops;
    Subspace img = Subspace::span(v->field(), v->n(), e.top);
    for (size_t i = 0; i < img.dim(); ++i) {
      const Vector& x = img.vector(i);
      ++vectors_tested;
      Subspace vx = v->apply_to(x);
      if (!vx.with(x).contains(K)) continue;
      ++condition_c;
      if (!vx.is_zero()) {
        fail_with(e, {{"x", to_json(x)}, {"Vx", to_json(vx)}});
        return false;
      }
    }
    return true;
  }

  void merge(Acc& o) {
    elements += o.elements;
    max_rank = std::max(max_rank, o.max_rank);
    tops += o.tops;
    condition_c += o.condition_c;
    vectors_tested += o.vectors_tested;
    if (!fail_idx && o.fail_idx) {
      fail_idx = o.fail_idx;
      witness = o.witness;
    }
    if (o.max_ind > max_ind) {
      max_ind = o.max_ind;
      at_max = o.at_max;
      impure_at_max = o.impure_at_max;
      impure_witness = o.impure_witness;
      kfp = o.kfp;
      kgen = o.kgen;
    } else if (o.max_ind == max_ind) {
      at_max += o.at_max;
      if (!impure_at_max && o.impure_at_max) {
        impure_at_max = true;
        impure_witness = o.impure_witness;
      }
      for (const auto& x : o.kgen) add_vector(x);
    }
  }
};

Elem fp_element(const fp::Mat& a, const Needs& needs, uint64_t idx, fp::Mat& cur, fp::Mat& next, fp::Mat& prev) {
  Elem e;
  e.idx = idx;
  const size_t n = a.n;
  if (needs.rank) e.rank = fp::rank(a);
  // cur = u^k; stop at the first vanishing power
  prev = fp::Mat(a.p, n);
  for (size_t i = 0; i < n; ++i) prev(i, i) = 1;
  cur = a;
  size_t k = 1;
  while (!cur.is_zero() && k <= n) {
    fp::mul_into(cur, a, next);
    std::swap(prev, cur);
    std::swap(cur, next);
    ++k;
  }
  if (!cur.is_zero()) return e;
  e.ind = k;
  // prev = u^{ind-1}
  if (needs.top_rank) e.top_rank = fp::rank(prev);
  if (needs.top_fp || needs.top) {
    for (size_t j = 0; j < n; ++j) {
      Col c(n);
      bool nz = false;
      for (size_t i = 0; i < n; ++i) nz = (c[i] = prev(i, j)) || nz;
      if (!nz) continue;
      if (needs.top_fp) e.top_fp.push_back(c);
      if (needs.top) {
        FieldSpec f = FieldSpec::gf(a.p);
        e.top.push_back(lift(f, c));
      }
    }
  }
  return e;
}

Elem generic_element(const Matrix& u, const Needs& needs, uint64_t idx) {
  Elem e;
  e.idx = idx;
  const size_t n = u.rows();
  if (needs.rank) e.rank = rank(u);
  Matrix prev = Matrix::identity(u.field(), n), cur = u;
  size_t k = 1;
  while (!cur.is_zero() && k <= n) {
    prev = cur;
    cur = cur * u;
    ++k;
  }
  if (!cur.is_zero()) {
    e.matrix = [u] { return u; };
    return e;
  }
  e.ind = k;
  if (needs.top_rank) e.top_rank = rank(prev);
  if (needs.top || needs.top_fp)
    for (size_t j = 0; j < n; ++j)
      if (!is_zero(prev.col(j))) e.top.push_back(prev.col(j));
  e.matrix = [u] { return u; };
  return e;
}

/// Runs the accumulator over every element (or the seeded samples).
Acc sweep(const OperatorSpace& v, const Acc& proto, const Needs& needs, const OracleOptions& opts, bool& exhaustive) {
  const FieldSpec& f = v.field();
  exhaustive = exhaustive_within(f, v.dim(), opts.budget);
  if (!exhaustive && opts.demand_exhaustive)
    fail(ErrorCode::BudgetExceeded, "|F|^dim V exceeds the budget of " + std::to_string(opts.budget));
  if (exhaustive) {
    const uint32_t p = f.characteristic();
    std::vector<fp::Mat> basis;
    for (const auto& b : v.basis()) basis.push_back(fp::from_matrix(b));
    const uint64_t total = element_count(f, v.dim());
    unsigned threads = opts.threads;
    if (v.dim() == 0) threads = 1;
    std::vector<Acc> parts(std::max(1u, threads), proto);
    for (auto& a : parts) a.kfp.p = p;
    bool want_fp = needs.top_fp && !needs.top;
    Needs nd = needs;
    nd.top_fp = want_fp;
    run_chunks(total, threads, [&](size_t chunk, uint64_t begin, uint64_t end) {
      Acc& acc = parts[chunk];
      fp::Mat cur, next, prev;
      if (v.dim() == 0) {
        fp::Mat zero(p, v.n());
        Elem e = fp_element(zero, nd, 0, cur, next, prev);
        e.matrix = [&] { return fp::to_matrix(zero); };
        acc.visit(e);
        return;
      }
      fp_enumerate(basis, p, v.n(), begin, end, [&](const fp::Mat& a, const std::vector<uint32_t>&, uint64_t idx) {
        Elem e = fp_element(a, nd, idx, cur, next, prev);
        e.matrix = [&a] { return fp::to_matrix(a); };
        return acc.visit(e);
      });
    });
    for (size_t i = 1; i < parts.size(); ++i) parts[0].merge(parts[i]);
    return parts[0];
  }
  Acc acc = proto;
  Rng rng(opts.seed);
  uint64_t idx = 0;
  for (size_t s = 0; s < opts.samples; ++s, ++idx) {
    Vector c = random_vector(f, v.dim(), rng);
    if (!acc.visit(generic_element(v.element(c), needs, idx))) break;
  }
  return acc;
}

const char* kSampled = "sampled: the verdict covers the inspected elements only";

Verdict finish(Verdict out, const Acc& acc, bool exhaustive) {
  out.counters["elements"] = acc.elements;
  out.counters["exhaustive"] = exhaustive;
  if (acc.fail_idx) {
    out.status = VerdictStatus::fail;
    out.witness = acc.witness;
  }
  if (!exhaustive) out.note = kSampled;
  return out;
}

}  // namespace

OracleSummary oracle_summary(const OperatorSpace& v, const OracleOptions& opts) {
  Acc proto;
  proto.v = &v;
  proto.prop = OracleProperty::purity;
  Needs needs{true, true, !v.field().is_finite(), true};
  bool exhaustive = false;
  Acc acc = sweep(v, proto, needs, opts, exhaustive);
  if (acc.fail_idx) fail(ErrorCode::NotNilpotent, "element " + acc.witness.dump() + " is not nilpotent");
  OracleSummary s;
  s.exhaustive = exhaustive;
  s.elements = acc.elements;
  s.max_nilindex = acc.max_ind;
  s.count_at_max = acc.at_max;
  s.max_rank = acc.max_rank;
  s.dim_K = acc.kgen.size();
  s.pure = !acc.impure_at_max;
  return s;
}

Verdict exhaustive_verify(const OperatorSpace& v, OracleProperty prop, const OracleOptions& opts) {
  Verdict out;
  out.check = to_string(prop);
  Acc proto;
  proto.v = &v;
  proto.prop = prop;
  Needs needs;
  bool exhaustive = false;
  switch (prop) {
    case OracleProperty::all_nilpotent: {
      Acc acc = sweep(v, proto, needs, opts, exhaustive);
      out.counters["max_nilindex"] = acc.max_ind;
      return finish(out, acc, exhaustive);
    }
    case OracleProperty::rank_bound: {
      proto.bound = rank_cap(v);
      needs.rank = true;
      Acc acc = sweep(v, proto, needs, opts, exhaustive);
      out.counters["max_rank"] = acc.max_rank;
      out.counters["bound"] = proto.bound;
      return finish(out, acc, exhaustive);
    }
    case OracleProperty::nilindex_cap: {
      proto.bound = nilindex_cap(v);
      Acc acc = sweep(v, proto, needs, opts, exhaustive);
      out.counters["max_nilindex"] = acc.max_ind;
      out.counters["cap"] = proto.bound;
      return finish(out, acc, exhaustive);
    }
    case OracleProperty::purity: {
      needs.top_rank = true;
      Acc acc = sweep(v, proto, needs, opts, exhaustive);
      out.counters["max_nilindex"] = acc.max_ind;
      out.counters["count_at_max"] = acc.at_max;
      out = finish(out, acc, exhaustive);
      if (out.status == VerdictStatus::pass && acc.impure_at_max) {
        out.status = VerdictStatus::fail;
        out.witness = acc.impure_witness;
      }
      return out;
    }
    case OracleProperty::isotropic_top_images: {
      if (!v.form()) {
        out.status = VerdictStatus::hypothesis_unmet;
        out.note = "needs a form";
        return out;
      }
      proto.gram = v.form()->gram();
      needs.top = true;
      Acc acc = sweep(v, proto, needs, opts, exhaustive);
      out.counters["top_elements"] = acc.tops;
      out.counters["max_nilindex"] = acc.max_ind;
      return finish(out, acc, exhaustive);
    }
    default: break;
  }
  // two passes: the generic nilindex and K(V) first, then the property
  Acc first = proto;
  first.prop = OracleProperty::purity;
  Needs n1{false, false, !v.field().is_finite(), v.field().is_finite()};
  Acc a1 = sweep(v, first, n1, opts, exhaustive);
  if (a1.fail_idx) return finish(out, a1, exhaustive);
  out.counters["p"] = a1.max_ind;
  out.counters["dim_K"] = a1.kgen.size();
  if (!v.field().has_at_least(a1.max_ind)) {
    out.status = VerdictStatus::hypothesis_unmet;
    out.note = "needs |F| >= p = " + std::to_string(a1.max_ind);
    return out;
  }
  proto.p = a1.max_ind;
  proto.K = Subspace::span(v.field(), v.n(), a1.kgen);
  needs.top = true;
  Acc acc = sweep(v, proto, needs, opts, exhaustive);
  out.counters["top_elements"] = acc.tops;
  if (prop == OracleProperty::reducibility_contrapositive) {
    out.counters["vectors_tested"] = acc.vectors_tested;
    out.counters["condition_C_met"] = acc.condition_c;
  }
  return finish(out, acc, exhaustive);
}

// ---------------------------------------------------------------------------
// maximality probe

namespace {

/// Basis of S_b, A_b or End(F^n) as flattened rows.
Subspace ambient_space(const OperatorSpace& v) {
  const FieldSpec& f = v.field();
  const size_t n = v.n();
  if (!v.adaptation()) return Subspace::full(f, n * n);
  const Matrix& g = v.form()->gram();
  const bool sym = *v.adaptation() == Adaptation::b_symmetric;
  std::vector<Vector> rows;
  // (G U)_{rc} = sum_k G_{rk} U_{kc}, unknown U_{kc} at index k n + c
  for (size_t r = 0; r < n; ++r)
    for (size_t c = r; c < n; ++c) {
      if (sym && r == c) continue;
      Vector row(n * n, f.zero());
      for (size_t k = 0; k < n; ++k) {
        row[k * n + c] = row[k * n + c] + g(r, k);
        if (r == c) continue;
        row[k * n + r] = sym ? row[k * n + r] - g(c, k) : row[k * n + r] + g(c, k);
      }
      rows.push_back(row);
    }
  if (rows.empty()) return Subspace::full(f, n * n);
  return Subspace::row_space(kernel_basis(Matrix::from_rows(f, n * n, rows)));
}

bool fp_nilpotent(const fp::Mat& a, fp::Mat& cur, fp::Mat& next) {
  cur = a;
  for (size_t k = 1; k < a.n && !cur.is_zero(); ++k) {
    fp::mul_into(cur, a, next);
    std::swap(cur, next);
  }
  return cur.is_zero();
}

}  // namespace

Verdict maximality_probe(const OperatorSpace& v, const OracleOptions& opts) {
  Verdict out;
  out.check = "maximality";
  const FieldSpec& f = v.field();
  const size_t n = v.n();
  Subspace amb = ambient_space(v);
  Subspace cur = v.flat();
  std::vector<Matrix> comp;
  for (size_t i = 0; i < amb.dim(); ++i)
    if (!cur.contains(amb.vector(i))) {
      cur = cur.with(amb.vector(i));
      comp.push_back(Matrix::unflatten(f, n, amb.vector(i)));
    }
  const size_t m = comp.size();
  out.counters["complement_dim"] = m;
  out.counters["dim_V"] = v.dim();
  if (m == 0) {
    out.counters["coverage"] = 1.0;
    out.counters["lines_tested"] = 0;
    out.note = "V fills its ambient space";
    return out;
  }
  const uint64_t cosets = element_count(f, v.dim());
  uint64_t lines_total = 0;
  bool exhaustive = false;
  if (f.is_finite()) {
    const uint64_t q = *f.order();
    const uint64_t all = element_count(f, m);
    if (all != UINT64_MAX) {
      lines_total = (all - 1) / (q - 1);
      exhaustive = cosets != UINT64_MAX && lines_total <= opts.budget / std::max<uint64_t>(cosets, 1);
    }
  }
  if (!exhaustive && opts.demand_exhaustive)
    fail(ErrorCode::BudgetExceeded, "line count times |V| exceeds the budget of " + std::to_string(opts.budget));

  uint64_t tested = 0, undecided = 0, searched = 0;
  if (exhaustive) {
    const uint32_t p = f.characteristic();
    std::vector<fp::Mat> vb, cb;
    for (const auto& b : v.basis()) vb.push_back(fp::from_matrix(b));
    for (const auto& c : comp) cb.push_back(fp::from_matrix(c));
    fp::Mat x, y;
    bool failed = false;
    fp_enumerate(cb, p, n, 0, element_count(f, m), [&](const fp::Mat& a, const std::vector<uint32_t>& d, uint64_t) {
      auto lead = std::find_if(d.begin(), d.end(), [](uint32_t z) { return z != 0; });
      if (lead == d.end() || *lead != 1) return true;
      ++tested;
      bool found = false;
      if (v.dim() == 0) {
        found = !fp_nilpotent(a, x, y);
        ++searched;
      } else {
        fp_enumerate(vb, p, n, 0, cosets, [&](const fp::Mat& w, const std::vector<uint32_t>&, uint64_t) {
          fp::Mat s = w;
          s.add_assign(a);
          ++searched;
          found = !fp_nilpotent(s, x, y);
          return !found;
        });
      }
      if (!found) {
        failed = true;
        out.status = VerdictStatus::fail;
        out.witness = {{"enlargement", to_json(fp::to_matrix(a))}, {"coefficients", d}};
        return false;
      }
      return true;
    });
    (void)failed;
  } else {
    Rng rng(opts.seed);
    for (size_t s = 0; s < opts.samples; ++s) {
      Vector c = random_vector(f, m, rng);
      if (is_zero(c)) continue;
      Matrix a(f, n, n);
      for (size_t j = 0; j < m; ++j) a = a + comp[j].scaled(c[j]);
      ++tested;
      bool found = !nilindex(a).has_value();
      ++searched;
      for (size_t t = 0; t < opts.samples && !found; ++t) {
        ++searched;
        found = !nilindex(a + v.element(random_vector(f, v.dim(), rng))).has_value();
      }
      if (!found) ++undecided;
    }
  }
  out.counters["lines_tested"] = tested;
  out.counters["elements_searched"] = searched;
  out.counters["exhaustive"] = exhaustive;
  out.counters["undecided"] = undecided;
  out.counters["coverage"] = lines_total ? static_cast<double>(tested) / static_cast<double>(lines_total) : 0.0;
  if (!exhaustive) out.note = "sampled probe: evidence only";
  return out;
}

}  // namespace structnil
