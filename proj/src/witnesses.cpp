#include "structnil/witnesses.hpp"

#include "structnil/json_io.hpp"

namespace structnil {

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::n3_counterexample: return "n3_counterexample";
    case WitnessKind::six_dim_counterexample: return "six_dim_counterexample";
    case WitnessKind::wa_max: return "wa_max";
    default: return "ws_max";
  }
}

WitnessKind parse_witness_kind(std::string_view s) {
  if (s == "n3" || s == "n3_counterexample") return WitnessKind::n3_counterexample;
  if (s == "six_dim" || s == "six_dim_counterexample") return WitnessKind::six_dim_counterexample;
  if (s == "wa_max") return WitnessKind::wa_max;
  if (s == "ws_max") return WitnessKind::ws_max;
  fail(ErrorCode::ParseError, "unknown witness '" + std::string(s) + "'");
}

Matrix n3_matrix(const Scalar& x, const Scalar& y) {
  FieldSpec f = x.field();
  Matrix m(f, 3, 3);
  m(0, 2) = x;
  m(1, 2) = y;
  m(2, 0) = -y;
  m(2, 1) = x;
  return m;
}

namespace {

void certify(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::CertificateFailed, what);
}

/// Basis of the symmetric or alternating n x n matrices.
std::vector<Matrix> gram_basis(const FieldSpec& f, size_t n, FormKind kind) {
  std::vector<Matrix> out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      if (kind == FormKind::alternating && i == j) continue;
      Matrix e(f, n, n);
      e(i, j) = f.one();
      e(j, i) = kind == FormKind::symmetric ? f.one() : -f.one();
      out.push_back(e);
    }
  return out;
}

/// Linear conditions on the coefficients of G (in `gb`) for G*u to be
/// symmetric or alternating, stacked over all u.
Matrix adaptation_system(const std::vector<Matrix>& gb, const std::vector<Matrix>& us, Adaptation a) {
  const FieldSpec& f = gb.front().field();
  const size_t n = us.front().rows();
  std::vector<Vector> rows;
  for (const auto& u : us)
    for (size_t r = 0; r < n; ++r)
      for (size_t c = r; c < n; ++c) {
        if (a == Adaptation::b_symmetric && r == c) continue;
        Vector row(gb.size(), f.zero());
        for (size_t k = 0; k < gb.size(); ++k) {
          Matrix gu = gb[k] * u;
          row[k] = a == Adaptation::b_symmetric ? gu(r, c) - gu(c, r) : (r == c ? gu(r, r) : gu(r, c) + gu(c, r));
        }
        rows.push_back(row);
      }
  return Matrix::from_rows(f, gb.size(), rows);
}

/// Every G in the span of `sols` is singular.  Exhaustive over small finite
/// fields; otherwise det, a cubic in the coefficients, is tested on the grid
/// {0,..,3}^d, which decides its vanishing when 0..3 are distinct in F.
std::pair<bool, std::string> all_degenerate(const std::vector<Matrix>& sols, const FieldSpec& f) {
  const size_t d = sols.size();
  if (d == 0) return {true, "only the zero form"};
  uint64_t deg_bound = sols.front().rows();
  bool exhaustive = f.is_finite() && element_count(f, d) <= 1'000'000;
  uint64_t base = exhaustive ? *f.order() : deg_bound + 1;
  if (!exhaustive && f.is_finite() && *f.order() <= deg_bound)
    fail(ErrorCode::CertificateFailed, "field too small for the grid test and too large to enumerate");
  uint64_t total = 1;
  for (size_t i = 0; i < d; ++i) total *= base;
  for (uint64_t idx = 0; idx < total; ++idx) {
    uint64_t t = idx;
    Matrix g = sols.front().scaled(f.zero());
    for (size_t i = 0; i < d; ++i) {
      g = g + sols[i].scaled(f.element(t % base));
      t /= base;
    }
    if (!determinant(g).is_zero()) return {false, "non-degenerate solution found"};
  }
  return {true, exhaustive ? "exhaustive" : "polynomial grid"};
}

bool polarized_cube_zero(const OperatorSpace& v) {
  return !polarized_cube_failure(v, [](const Matrix& m) { return m.is_zero(); }).has_value();
}

Witness build_n3(const WitnessRequest& req) {
  const FieldSpec& f = req.field;
  Witness w;
  w.which = req.which;
  std::vector<Matrix> gens{n3_matrix(f.one(), f.zero()), n3_matrix(f.zero(), f.one())};
  w.space = OperatorSpace(f, 3, gens);
  json& c = w.certificate;
  c["dim"] = w.space.dim();
  bool cube_zero = polarized_cube_zero(w.space);
  uint64_t checked = 0;
  for_each_element(w.space, SweepOptions{}, [&](const Matrix& u, const Vector&) {
    ++checked;
    cube_zero = cube_zero && u.power(3).is_zero();
    return true;
  });
  c["cube_zero"] = cube_zero;
  c["elements_checked"] = checked;
  c["common_kernel_dim"] = w.space.common_kernel().dim();
  json forms = json::array();
  bool none = true;
  for (FormKind fk : {FormKind::symmetric, FormKind::alternating})
    for (Adaptation a : {Adaptation::b_symmetric, Adaptation::b_alternating}) {
      auto gb = gram_basis(f, 3, fk);
      Matrix ker = kernel_basis(adaptation_system(gb, gens, a));
      std::vector<Matrix> sols;
      for (size_t r = 0; r < ker.rows(); ++r) {
        Matrix g = gb.front().scaled(f.zero());
        for (size_t k = 0; k < gb.size(); ++k) g = g + gb[k].scaled(ker(r, k));
        sols.push_back(g);
      }
      auto [degenerate, how] = all_degenerate(sols, f);
      none = none && degenerate;
      forms.push_back({{"form", to_string(fk)}, {"adaptation", to_string(a)}, {"solution_dim", sols.size()},
                       {"all_degenerate", degenerate}, {"method", how}});
    }
  c["no_adapting_form"] = none;
  c["adapting_form_search"] = forms;
  certify(w.space.dim() == 2, "n3 space is not 2-dimensional");
  certify(cube_zero, "n3 element with nonzero cube");
  certify(w.space.common_kernel().dim() == 0, "n3 common kernel is nonzero");
  certify(none, "n3 admits a non-degenerate adapting form");
  return w;
}

Witness build_six_dim(const WitnessRequest& req) {
  const FieldSpec& f = req.field;
  require_char_not_two(f);
  require(req.epsilon == 1 || req.epsilon == -1, ErrorCode::BadParameters, "epsilon must be 1 or -1");
  const Scalar eps = f.from_int(req.epsilon);
  const bool sym = req.kind == TensorKind::sym;
  const Scalar eps2 = sym ? eps : -eps;
  const Adaptation adapt = sym ? Adaptation::b_symmetric : Adaptation::b_alternating;

  Matrix gram(f, 6, 6);
  gram.set_block(0, 3, Matrix::identity(f, 3));
  gram.set_block(3, 0, Matrix::identity(f, 3).scaled(eps));
  BilinearForm b(gram, req.epsilon == 1 ? FormKind::symmetric : FormKind::alternating);

  std::vector<Matrix> gens;
  for (const auto& nm : {n3_matrix(f.one(), f.zero()), n3_matrix(f.zero(), f.one())}) {
    Matrix u(f, 6, 6);
    u.set_block(0, 0, nm);
    u.set_block(3, 3, nm.transpose().scaled(eps2));
    gens.push_back(u);
  }
  auto top_right = gram_basis(f, 3, sym ? FormKind::symmetric : FormKind::alternating);
  for (const auto& m : top_right) {
    Matrix u(f, 6, 6);
    u.set_block(0, 3, m);
    gens.push_back(u);
  }

  Witness w;
  w.which = req.which;
  w.form = b;
  w.space = OperatorSpace(f, 6, gens, b, adapt);  // throws KindMismatch if not adapted
  json& c = w.certificate;
  const size_t nu = 3;
  size_t expected = sym ? nu * (6 - nu) - 1 : nu * (6 - nu - 1) - 1;
  c["dim"] = w.space.dim();
  c["expected_dim"] = expected;
  c["witt_index"] = witt_index(b);
  c["adapted"] = true;

  // Block upper triangular with diagonal blocks from the cube-zero n3 span
  // and its transpose, so every element satisfies u^6 = 0.
  OperatorSpace diag(f, 3, {n3_matrix(f.one(), f.zero()), n3_matrix(f.zero(), f.one())});
  bool triangular = true;
  for (const auto& u : w.space.basis()) {
    triangular = triangular && u.block(3, 0, 3, 3).is_zero() && diag.contains(u.block(0, 0, 3, 3)) &&
                 diag.contains(u.block(3, 3, 3, 3).transpose());
  }
  bool nilpotent = triangular && polarized_cube_zero(diag);
  uint64_t checked = 0;
  SweepOptions so;
  so.budget = 4096;
  so.samples = 256;
  for_each_element(w.space, so, [&](const Matrix& u, const Vector&) {
    ++checked;
    nilpotent = nilpotent && u.power(6).is_zero();
    return true;
  });
  c["nilpotent"] = nilpotent;
  c["elements_checked"] = checked;
  bool cubes = !polarized_cube_failure(w.space, [&](const Matrix& m) { return w.space.contains(m); }).has_value();
  c["cube_stable"] = cubes;
  c["common_kernel_dim"] = w.space.common_kernel().dim();

  certify(w.space.dim() == expected, "six_dim dimension is not one below the bound");
  certify(witt_index(b) == nu, "six_dim form has the wrong Witt index");
  certify(nilpotent, "six_dim space is not nilpotent");
  certify(cubes, "six_dim space is not stable under cubes");
  certify(w.space.common_kernel().dim() == 0, "six_dim common kernel is nonzero");
  return w;
}

/// The nu x nu cell J with J e_j = e_{j-1}.
Matrix shift_cell(const FieldSpec& f, size_t nu) {
  Matrix j(f, nu, nu);
  for (size_t i = 0; i + 1 < nu; ++i) j(i, i + 1) = f.one();
  return j;
}

/// Anisotropic Gram on the middle block, with b(g_p, g_p) != 0.
Matrix anisotropic_block(const FieldSpec& f, size_t p) {
  Matrix m(f, p, p);
  if (p == 0) return m;
  if (f.kind() == FieldSpec::Kind::rationals || p == 1) return Matrix::identity(f, p);
  if (p == 2) {
    m(0, 0) = f.one();
    m(1, 1) = -f.from_int(modp::least_nonsquare(f.characteristic()));
    return m;
  }
  fail(ErrorCode::BadParameters, "no anisotropic form of dimension " + std::to_string(p) + " over " + f.to_string());
}

void attach_endo(Witness& w, SpaceKind kind, const Matrix& u, size_t expected_ind, const Scalar& expected_coeff,
                 size_t power, size_t start) {
  const BilinearForm& b = *w.form;
  const FieldSpec& f = b.field();
  const size_t n = b.dim();
  const size_t nu = witt_index(b);
  w.flag = standard_flag(f, n, nu);
  w.space = build_canonical_space(kind, b, *w.flag);
  w.endo = u;
  w.change_of_basis = Matrix::identity(f, n);
  json& c = w.certificate;
  auto ind = nilindex(u);
  Vector image = u.power(power).apply(unit_vector(f, n, start));
  Vector expected_image = expected_coeff * unit_vector(f, n, 0);
  c["n"] = n;
  c["nu"] = nu;
  c["nilindex"] = ind ? json(*ind) : json(nullptr);
  c["expected_nilindex"] = expected_ind;
  c["in_canonical_space"] = w.space.contains(u);
  c["power"] = power;
  c["power_image"] = to_json(image);
  c["power_identity"] = image == expected_image;
  c["space_dim"] = w.space.dim();
  certify(ind && *ind == expected_ind, "witness nilindex differs from the expected value");
  certify(w.space.contains(u), "witness is not in the canonical space");
  certify(image == expected_image, "power identity on the first h-vector fails");
}

Witness build_wa_max(const WitnessRequest& req) {
  const FieldSpec& f = req.field;
  require_char_not_two(f);
  const size_t n = req.n, nu = req.nu;
  require(nu > 0 && 2 * nu <= n, ErrorCode::BadParameters, "wa_max needs 0 < 2 nu <= n");
  const size_t p = n - 2 * nu;
  Matrix P = anisotropic_block(f, p);
  Matrix gram(f, n, n);
  gram.set_block(0, nu + p, Matrix::identity(f, nu));
  gram.set_block(nu + p, 0, Matrix::identity(f, nu));
  if (p) gram.set_block(nu, nu, P);
  Witness w;
  w.which = req.which;
  w.form = BilinearForm(gram, FormKind::symmetric);
  require(witt_index(*w.form) == nu, ErrorCode::CertificateFailed, "wa_max form has the wrong Witt index");

  const Matrix J = shift_cell(f, nu);
  Matrix u(f, n, n);
  const size_t h = nu + p;  // offset of the h-block
  if (p == 0) {
    if (nu >= 2) {
      Matrix K(f, nu, nu);
      K(nu - 1, nu - 2) = f.one();
      K(nu - 2, nu - 1) = -f.one();
      u.set_block(0, 0, J);
      u.set_block(0, nu, K);
      u.set_block(nu, nu, -J.transpose());
    }
    // nu = 1: W is {0} and u = 0 has nilindex 1 = n - 1
    Scalar coeff = nu == 1 ? f.zero() : f.from_int(nu % 2 ? -2 : 2);
    attach_endo(w, SpaceKind::WA, u, n - 1, coeff, nu >= 2 ? 2 * nu - 2 : 1, h);
    return w;
  }
  Matrix C(f, p, nu);
  C(p - 1, nu - 1) = f.one();
  u.set_block(0, 0, J);
  u.set_block(0, nu, -(P * C).transpose());
  u.set_block(nu, h, C);
  u.set_block(h, h, -J.transpose());
  Scalar coeff = P(p - 1, p - 1);
  if (nu % 2) coeff = -coeff;
  attach_endo(w, SpaceKind::WA, u, 2 * nu + 1, coeff, 2 * nu, h);
  return w;
}

Witness build_ws_max(const WitnessRequest& req) {
  const FieldSpec& f = req.field;
  require_char_not_two(f);
  const size_t n = req.n;
  require(n >= 2 && n % 2 == 0, ErrorCode::BadParameters, "ws_max needs an even n >= 2");
  const size_t nu = n / 2;
  Matrix gram(f, n, n);
  gram.set_block(0, nu, Matrix::identity(f, nu));
  gram.set_block(nu, 0, -Matrix::identity(f, nu));
  Witness w;
  w.which = req.which;
  w.form = BilinearForm(gram, FormKind::alternating);
  const Matrix J = shift_cell(f, nu);
  Matrix D(f, nu, nu);
  D(nu - 1, nu - 1) = f.one();
  Matrix u(f, n, n);
  u.set_block(0, 0, J);
  u.set_block(0, nu, D);
  u.set_block(nu, nu, -J.transpose());
  Scalar coeff = nu % 2 ? f.one() : -f.one();
  attach_endo(w, SpaceKind::WS, u, n, coeff, 2 * nu - 1, nu);
  return w;
}

}  // namespace

Witness build_witness(const WitnessRequest& req) {
  switch (req.which) {
    case WitnessKind::n3_counterexample: return build_n3(req);
    case WitnessKind::six_dim_counterexample: return build_six_dim(req);
    case WitnessKind::wa_max: return build_wa_max(req);
    default: return build_ws_max(req);
  }
}

}  // namespace structnil
