#include <doctest.h>

#include "structnil/bilinear.hpp"
#include "structnil/error.hpp"
#include "test_util.hpp"

using namespace structnil;
using namespace testutil;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ParseError;
}

BilinearForm diag(const FieldSpec& f, std::initializer_list<long long> d) {
  Matrix g(f, d.size(), d.size());
  size_t i = 0;
  for (long long x : d) {
    g(i, i) = f.from_int(x);
    ++i;
  }
  return BilinearForm(g, FormKind::symmetric);
}

long long iform(const IMat& g, const std::vector<long long>& x, const std::vector<long long>& y, long long p) {
  long long s = 0;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j) s = (s + x[i] * g[i][j] % p * y[j]) % p;
  return s;
}

/// Largest k with k pairwise orthogonal independent isotropic vectors, found
/// by depth-first search over all isotropic vectors (odd p).
size_t brute_witt_index(const BilinearForm& b) {
  const long long p = b.field().characteristic();
  IMat g = to_imat(b.gram());
  const size_t n = b.dim();
  std::vector<std::vector<long long>> iso;
  for_all_coeffs(n, p, [&](const std::vector<long long>& c) {
    bool nz = false;
    for (auto x : c) nz = nz || x;
    if (nz && iform(g, c, c, p) == 0) iso.push_back(c);
  });
  size_t best = 0;
  std::function<void(std::vector<std::vector<long long>>&, size_t)> dfs = [&](auto& chosen, size_t from) {
    best = std::max(best, chosen.size());
    for (size_t i = from; i < iso.size(); ++i) {
      bool ok = true;
      for (const auto& c : chosen) ok = ok && iform(g, c, iso[i], p) == 0;
      if (!ok) continue;
      auto rows = chosen;
      rows.push_back(iso[i]);
      if (irank(rows, p) != rows.size()) continue;
      chosen.push_back(iso[i]);
      dfs(chosen, i + 1);
      chosen.pop_back();
      if (best * 2 >= n) return;
    }
  };
  std::vector<std::vector<long long>> chosen;
  dfs(chosen, 0);
  return best;
}

}  // namespace

TEST_CASE("form validation") {
  FieldSpec f5 = gf(5);
  BilinearForm h = form_validate(M(f5, {{0, 1}, {1, 0}}), FormKind::symmetric);
  CHECK(h(unit_vector(f5, 2, 0), unit_vector(f5, 2, 0)).is_zero());
  CHECK_NOTHROW(form_validate(M(f5, {{0, 1}, {-1, 0}}), FormKind::alternating));
  CHECK(code_of([&] { form_validate(M(f5, {{0, 1}, {1, 0}}), FormKind::alternating); }) == ErrorCode::KindMismatch);
  // degenerate forms are valid; callers that need non-degeneracy check it
  CHECK_FALSE(form_validate(M(f5, {{1, 0}, {0, 0}}), FormKind::symmetric).is_nondegenerate());
  CHECK(code_of([&] { form_validate(M(gf(2), {{0, 1}, {1, 0}}), FormKind::symmetric); }) ==
        ErrorCode::CharTwoUnsupported);
}

TEST_CASE("radicals and orthogonal complements") {
  FieldSpec f5 = gf(5);
  CHECK(diag(f5, {1, 0}).radical() == Subspace::span(f5, 2, {V(f5, {0, 1})}));
  BilinearForm h(M(f5, {{0, 1}, {1, 0}}), FormKind::symmetric);
  Subspace w = Subspace::span(f5, 2, {V(f5, {1, 0})});
  CHECK(h.orthogonal(w) == w);
  CHECK(diag(f5, {1, 1, 1}).orthogonal(Subspace::span(f5, 3, {V(f5, {1, 0, 0})})) ==
        Subspace::span(f5, 3, {V(f5, {0, 1, 0}), V(f5, {0, 0, 1})}));
}

TEST_CASE("isotropic search follows the enumeration order") {
  FieldSpec f5 = gf(5), f3 = gf(3);
  auto r = find_isotropic(diag(f5, {1, 1}));
  REQUIRE(r.vector);
  CHECK(*r.vector == V(f5, {1, 2}));
  CHECK(r.complete);
  // squares mod 3 are {0, 1}, so x^2 + y^2 has no nontrivial zero
  auto none = find_isotropic(diag(f3, {1, 1}));
  CHECK_FALSE(none.vector.has_value());
  CHECK(none.complete);
  auto hy = find_isotropic(BilinearForm(M(f5, {{0, 1}, {1, 0}}), FormKind::symmetric));
  REQUIRE(hy.vector);
  CHECK(*hy.vector == V(f5, {1, 0}));
}

TEST_CASE("isotropic vectors agree with brute force") {
  // the first isotropic vector in little-endian order with leading digit 1
  for (uint32_t p : {3u, 5u, 7u}) {
    FieldSpec f = gf(p);
    Rng rng(p);
    for (int trial = 0; trial < 15; ++trial) {
      std::vector<long long> d{1 + static_cast<long long>(rng() % (p - 1)), 1 + static_cast<long long>(rng() % (p - 1))};
      BilinearForm b = diag(f, {d[0], d[1]});
      std::optional<std::vector<long long>> expect;
      for (uint32_t idx = 1; idx < p * p && !expect; ++idx) {
        std::vector<long long> c{idx % p, idx / p};
        long long lead = c[0] ? c[0] : c[1];
        if (lead != 1) continue;
        if ((d[0] * c[0] * c[0] + d[1] * c[1] * c[1]) % p == 0) expect = c;
      }
      auto r = find_isotropic(b);
      REQUIRE(r.vector.has_value() == expect.has_value());
      if (expect) CHECK(*r.vector == V(f, {(*expect)[0], (*expect)[1]}));
    }
  }
}

TEST_CASE("isotropic search over the rationals") {
  FieldSpec q = FieldSpec::rationals();
  auto r = find_isotropic(diag(q, {1, -1}));
  REQUIRE(r.vector);
  CHECK(diag(q, {1, -1})(*r.vector, *r.vector).is_zero());
  // positive definite: provably anisotropic
  auto none = find_isotropic(diag(q, {1, 1, 1}));
  CHECK_FALSE(none.vector.has_value());
  CHECK(none.complete);
  auto hard = find_isotropic(diag(q, {1, 1, -7}));
  // x^2 + y^2 = 7 z^2 has no rational solution; heights are bounded so the
  // search cannot prove it
  CHECK_FALSE(hard.vector.has_value());
  CHECK_FALSE(hard.complete);
}

TEST_CASE("Witt decompositions") {
  FieldSpec f5 = gf(5), f3 = gf(3);
  auto wd = witt_decompose(BilinearForm(M(f5, {{0, 1}, {1, 0}}), FormKind::symmetric));
  CHECK(wd.witt_index == 1);
  REQUIRE(wd.hyperbolic_pairs.size() == 1);
  CHECK(wd.hyperbolic_pairs[0].first == V(f5, {1, 0}));
  CHECK(wd.hyperbolic_pairs[0].second == V(f5, {0, 1}));
  CHECK(wd.anisotropic_basis.empty());

  auto w3 = witt_decompose(diag(f3, {1, 1, 1}));
  CHECK(w3.witt_index == 1);
  CHECK(w3.anisotropic_basis.size() == 1);
  CHECK(witt_index(diag(f5, {1, 4})) == 1);
  CHECK(*find_isotropic(diag(f5, {1, 4})).vector == V(f5, {1, 1}));
}

TEST_CASE("property: the Witt change of basis is hyperbolic plus anisotropic") {
  Rng rng(21);
  for (uint32_t p : {3u, 5u, 7u}) {
    FieldSpec f = gf(p);
    for (int trial = 0; trial < 10; ++trial) {
      size_t n = 2 + rng() % 4;
      BilinearForm b = random_congruent(hyperbolic(f, n / 2, n % 2 ? std::vector<long long>{1} : std::vector<long long>{}), rng);
      auto wd = witt_decompose(b);
      Matrix c = wd.change_of_basis(f, n);
      CHECK(rank(c) == n);
      BilinearForm t = b.in_basis(c);
      const size_t nu = wd.witt_index;
      for (size_t i = 0; i < nu; ++i)
        for (size_t j = 0; j < nu; ++j) {
          CHECK(t.gram()(i, j).is_zero());
          CHECK(t.gram()(i, n - nu + j) == (i == j ? f.one() : f.zero()));
        }
    }
  }
}

TEST_CASE("property: Witt index matches exhaustive totally singular search") {
  Rng rng(3);
  for (uint32_t p : {3u, 5u}) {
    FieldSpec f = gf(p);
    for (int trial = 0; trial < 12; ++trial) {
      size_t n = 2 + rng() % (p == 3 ? 4 : 3);
      Matrix g(f, n, n);
      for (size_t i = 0; i < n; ++i) g(i, i) = f.from_int(1 + rng() % (p - 1));
      BilinearForm b = random_congruent(BilinearForm(g, FormKind::symmetric), rng);
      size_t nu = witt_index(b);
      CHECK(nu == brute_witt_index(b));
      // independent of the presentation
      CHECK(witt_index(random_congruent(b, rng)) == nu);
    }
  }
}

TEST_CASE("property: dimensions of orthogonal complements") {
  Rng rng(4);
  FieldSpec f = gf(7);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n = 2 + rng() % 5;
    BilinearForm b = trial % 2 ? random_congruent(symplectic(f, n / 2 + 1), rng) : random_congruent(hyperbolic(f, n / 2, {3}), rng);
    n = b.dim();
    std::vector<Vector> gens;
    for (size_t i = 0; i < 1 + rng() % n; ++i) gens.push_back(random_vector(f, n, rng));
    Subspace w = Subspace::span(f, n, gens);
    Subspace wp = b.orthogonal(w);
    CHECK(w.dim() + wp.dim() == n);
    CHECK(b.orthogonal(wp) == w);
  }
}

TEST_CASE("quotient forms") {
  FieldSpec f5 = gf(5);
  Matrix g(f5, 4, 4);
  g(0, 2) = g(2, 0) = g(1, 3) = g(3, 1) = f5.one();
  BilinearForm b(g, FormKind::symmetric);
  QuotientForm qf = quotient_form(b, unit_vector(f5, 4, 0));
  CHECK(qf.form.dim() == 2);
  CHECK(qf.form.gram() == M(f5, {{0, 1}, {1, 0}}));
  CHECK(qf.quotient.section() == std::vector<Vector>{V(f5, {0, 1, 0, 0}), V(f5, {0, 0, 0, 1})});
  CHECK(code_of([&] { quotient_form(b, V(f5, {1, 0, 1, 0})); }) == ErrorCode::NonIsotropicVector);
  CHECK(code_of([&] { quotient_form(b, zero_vector(f5, 4)); }) == ErrorCode::ZeroVector);
}

TEST_CASE("property: quotient forms lower the Witt index by one") {
  Rng rng(8);
  for (uint32_t p : {3u, 5u, 7u}) {
    FieldSpec f = gf(p);
    for (int trial = 0; trial < 10; ++trial) {
      BilinearForm b = trial % 3 == 0 ? random_congruent(symplectic(f, 1 + trial % 3), rng)
                                      : random_congruent(hyperbolic(f, 1 + trial % 2, {1}), rng);
      auto x = find_isotropic(b).vector;
      REQUIRE(x);
      QuotientForm qf = quotient_form(b, *x);
      CHECK(qf.form.is_nondegenerate());
      CHECK(witt_index(qf.form) + 1 == witt_index(b));
    }
  }
}
