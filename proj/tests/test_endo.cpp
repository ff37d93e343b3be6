#include <doctest.h>

#include "structnil/endo.hpp"
#include "structnil/error.hpp"
#include "structnil/witnesses.hpp"
#include "test_util.hpp"

using namespace structnil;
using namespace testutil;

namespace {

std::vector<size_t> partition_multiset(const std::vector<JordanBlock>& blocks) {
  std::vector<size_t> parts;
  for (const auto& b : blocks)
    for (size_t i = 0; i < b.chains.size(); ++i) parts.push_back(b.cell_size);
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

/// Blocks are b-regular, pairwise orthogonal, fill the space, and each chain
/// is a Jordan chain of u.
void check_blocks(const BilinearForm& b, const Matrix& u, const std::vector<JordanBlock>& blocks) {
  const FieldSpec& f = b.field();
  Subspace total(f, b.dim());
  for (size_t i = 0; i < blocks.size(); ++i) {
    const auto& bl = blocks[i];
    CHECK(b.restriction_radical(bl.span).is_zero());
    CHECK(bl.chains.size() == (bl.shape == BlockShape::odd_cell ? 1u : 2u));
    if (bl.shape == BlockShape::odd_cell) CHECK(bl.cell_size % 2 == 1);
    if (bl.shape == BlockShape::double_even_cell) CHECK(bl.cell_size % 2 == 0);
    for (const auto& ch : bl.chains) {
      REQUIRE(ch.size() == bl.cell_size);
      CHECK(is_zero(u.apply(ch[0])));
      for (size_t k = 0; k + 1 < ch.size(); ++k) CHECK(u.apply(ch[k + 1]) == ch[k]);
    }
    for (size_t j = i + 1; j < blocks.size(); ++j) CHECK(b.orthogonal(bl.span).contains(blocks[j].span));
    total = total.sum(bl.span);
  }
  CHECK(total == Subspace::full(f, b.dim()));
  CHECK(partition_multiset(blocks) == nil_profile(u).partition.parts);
}

}  // namespace

TEST_CASE("adaptedness") {
  FieldSpec f5 = gf(5);
  BilinearForm h(M(f5, {{0, 1}, {1, 0}}), FormKind::symmetric);
  auto r = adaptedness_check(M(f5, {{1, 0}, {0, -1}}), h);
  CHECK(r.adaptation == Adaptation::b_alternating);
  auto id = adaptedness_check(Matrix::identity(f5, 2), h);
  CHECK(id.adaptation == Adaptation::b_symmetric);
  CHECK_FALSE(id.nilpotent);
  auto low = adaptedness_check(M(f5, {{0, 0}, {1, 0}}), h);
  CHECK(low.adaptation == Adaptation::b_symmetric);
  CHECK(low.nilpotent);
}

TEST_CASE("b-tensors") {
  FieldSpec f5 = gf(5);
  BilinearForm id(Matrix::identity(f5, 2), FormKind::symmetric);
  Vector e1 = unit_vector(f5, 2, 0), e2 = unit_vector(f5, 2, 1);
  CHECK(b_tensor(id, e1, e2, TensorKind::sym) == M(f5, {{0, 1}, {1, 0}}));
  CHECK(b_tensor(id, e1, e2, TensorKind::alt) == M(f5, {{0, 1}, {-1, 0}}));
  CHECK(b_tensor(id, e1, e1, TensorKind::alt).is_zero());
}

TEST_CASE("property: b-tensors are adapted and act by the defining formula") {
  Rng rng(2);
  FieldSpec f = gf(7);
  for (int trial = 0; trial < 30; ++trial) {
    BilinearForm b = trial % 2 ? random_congruent(symplectic(f, 2), rng) : random_congruent(hyperbolic(f, 2, {1}), rng);
    const size_t n = b.dim();
    Vector x = random_vector(f, n, rng), y = random_vector(f, n, rng), z = random_vector(f, n, rng);
    Matrix s = b_tensor(b, x, y, TensorKind::sym), a = b_tensor(b, x, y, TensorKind::alt);
    CHECK(s.apply(z) == b(y, z) * x + b(x, z) * y);
    CHECK(a.apply(z) == b(y, z) * x - b(x, z) * y);
    // for either kind of form
    CHECK(is_adapted(s, b, Adaptation::b_symmetric));
    CHECK(is_adapted(a, b, Adaptation::b_alternating));
  }
}

TEST_CASE("nilpotent profiles") {
  FieldSpec f7 = gf(7);
  auto cell = nil_profile(M(f7, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
  CHECK(cell.nilindex == 3);
  CHECK(cell.partition.parts == std::vector<size_t>{3});
  auto n10 = nil_profile(n3_matrix(f7.one(), f7.zero()));
  CHECK(n10.nilindex == 3);
  CHECK(n10.partition.parts == std::vector<size_t>{3});
  auto z = nil_profile(Matrix(f7, 2, 2));
  CHECK(z.nilindex == 1);
  CHECK(z.partition.parts == std::vector<size_t>{1, 1});
  CHECK_THROWS_AS(nil_profile(Matrix::identity(f7, 2)), Error);
}

TEST_CASE("property: partitions from ranks match a direct cell count") {
  Rng rng(17);
  FieldSpec f = gf(5);
  for (int trial = 0; trial < 30; ++trial) {
    // conjugate a direct sum of random cells
    std::vector<size_t> parts;
    size_t n = 0;
    while (n < 6) {
      size_t s = 1 + rng() % 4;
      parts.push_back(s);
      n += s;
    }
    Matrix j(f, n, n);
    size_t at = 0;
    for (size_t s : parts) {
      for (size_t i = 0; i + 1 < s; ++i) j(at + i, at + i + 1) = f.one();
      at += s;
    }
    Matrix p = random_invertible(f, n, rng);
    Matrix u = *inverse(p) * j * p;
    std::sort(parts.rbegin(), parts.rend());
    CHECK(nil_profile(u).partition.parts == parts);
    CHECK(nil_profile(u).nilindex == parts.front());
  }
}

TEST_CASE("indecomposable decompositions") {
  FieldSpec f5 = gf(5);
  BilinearForm d(Matrix::identity(f5, 2), FormKind::symmetric);
  auto zero_blocks = indecomposable_decompose(d, Matrix(f5, 2, 2));
  REQUIRE(zero_blocks.size() == 2);
  for (const auto& b : zero_blocks) {
    CHECK(b.shape == BlockShape::odd_cell);
    CHECK(b.cell_size == 1);
  }

  Witness w = build_witness({WitnessKind::wa_max, f5, 1, TensorKind::sym, 5, 2});
  auto blocks = indecomposable_decompose(*w.form, *w.endo);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].shape == BlockShape::odd_cell);
  CHECK(blocks[0].cell_size == 5);
  check_blocks(*w.form, *w.endo, blocks);

  Matrix g(f5, 4, 4);
  g(0, 2) = g(2, 0) = g(1, 3) = g(3, 1) = f5.one();
  BilinearForm b(g, FormKind::symmetric);
  Matrix u = b_tensor(b, unit_vector(f5, 4, 0), unit_vector(f5, 4, 1), TensorKind::alt);
  // b(e3, u e4) = b(e3, e1) = 1
  CHECK(b(unit_vector(f5, 4, 2), u.apply(unit_vector(f5, 4, 3))) == f5.one());
  auto even = indecomposable_decompose(b, u);
  REQUIRE(even.size() == 1);
  CHECK(even[0].shape == BlockShape::double_even_cell);
  CHECK(even[0].cell_size == 2);
  CHECK(even[0].span == Subspace::full(f5, 4));
  check_blocks(b, u, even);
}

TEST_CASE("stable singular flags") {
  FieldSpec f5 = gf(5);
  Matrix g(f5, 4, 4);
  g(0, 2) = g(2, 0) = g(1, 3) = g(3, 1) = f5.one();
  BilinearForm b(g, FormKind::symmetric);
  Flag zf = stable_singular_flag(b, Matrix(f5, 4, 4));
  CHECK(zf.length() == 2);
  CHECK(b.is_totally_singular(zf.spaces.back()));
  CHECK(zf == stable_singular_flag(b, Matrix(f5, 4, 4)));

  Matrix u = b_tensor(b, unit_vector(f5, 4, 0), unit_vector(f5, 4, 1), TensorKind::alt);
  Flag uf = stable_singular_flag(b, u);
  Subspace e12 = Subspace::span(f5, 4, {unit_vector(f5, 4, 0), unit_vector(f5, 4, 1)});
  CHECK(e12 == Subspace::kernel(u).intersect(Subspace::image(u)));
  CHECK(e12.contains(uf.spaces.back()));

  Witness w = build_witness({WitnessKind::wa_max, f5, 1, TensorKind::sym, 5, 2});
  const Matrix& n = *w.endo;
  Flag wf = stable_singular_flag(*w.form, n);
  // the bottom two vectors of the single Jordan chain
  Subspace bottom = Subspace::image(n.power(3)).intersect(Subspace::kernel(n.power(2)));
  CHECK(bottom.dim() == 2);
  REQUIRE(wf.length() == 2);
  CHECK(wf.spaces[2] == bottom);
  CHECK(wf.spaces[1] == Subspace::image(n.power(4)));
}

TEST_CASE("property: adapted nilpotents on random W elements") {
  Rng rng(31);
  FieldSpec f = gf(5);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const size_t nu = 1 + trial % 3;
    const size_t extra = trial % 2;
    BilinearForm b = trial % 4 == 3 ? symplectic(f, nu) : hyperbolic(f, nu, extra ? std::vector<long long>{2} : std::vector<long long>{});
    SpaceKind kind = b.kind() == FormKind::alternating ? SpaceKind::WS : (trial % 3 ? SpaceKind::WA : SpaceKind::WS);
    OperatorSpace v = build_canonical_space(kind, b, standard_flag(f, b.dim(), nu));
    Matrix u = v.element(random_vector(f, v.dim(), rng));
    const size_t n = b.dim();
    // Ker u = (im u)^perp
    CHECK(Subspace::kernel(u) == b.orthogonal(Subspace::image(u)));
    size_t rk = rank(u);
    CHECK(rk <= std::min(2 * nu, n - 1));
    if (kind == SpaceKind::WA && n == 2 * nu) CHECK(rk + 2 <= n);
    const bool alt_over_sym = kind == SpaceKind::WA && b.kind() == FormKind::symmetric;
    auto blocks = alt_over_sym ? indecomposable_decompose(b, u) : std::vector<JordanBlock>{};
    if (alt_over_sym) check_blocks(b, u, blocks);
    // radical of b on the lower half of an odd cell
    for (const auto& bl : blocks) {
      if (bl.shape != BlockShape::odd_cell || bl.cell_size < 3) continue;
      const auto& ch = bl.chains[0];
      const size_t p = bl.cell_size / 2;
      std::vector<Vector> low(ch.begin(), ch.begin() + p + 1), rad(ch.begin(), ch.begin() + p);
      CHECK(b.restriction_radical(Subspace::span(f, n, low)) == Subspace::span(f, n, rad));
    }
    Flag fl = stable_singular_flag(b, u);
    CHECK(fl.is_partially_complete());
    CHECK(b.is_totally_singular(fl.spaces.back()));
    for (size_t i = 1; i < fl.spaces.size(); ++i)
      for (const auto& x : fl.spaces[i].vectors()) CHECK(fl.spaces[i - 1].contains(u.apply(x)));
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("anisotropic forms admit only the zero nilpotent") {
  FieldSpec f3 = gf(3);
  BilinearForm b(Matrix::identity(f3, 2), FormKind::symmetric);
  // brute force over all 3^4 matrices
  size_t nilpotent_adapted = 0;
  for_all_coeffs(4, 3, [&](const std::vector<long long>& c) {
    Matrix u = M(f3, {{c[0], c[1]}, {c[2], c[3]}});
    if (nilindex(u) && (is_adapted(u, b, Adaptation::b_symmetric) || is_adapted(u, b, Adaptation::b_alternating))) {
      ++nilpotent_adapted;
      CHECK(u.is_zero());
    }
  });
  CHECK(nilpotent_adapted == 1);
}
