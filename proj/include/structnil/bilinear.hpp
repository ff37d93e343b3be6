#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "structnil/subspace.hpp"

namespace structnil {

enum class FormKind { symmetric, alternating };

std::string to_string(FormKind k);
FormKind parse_form_kind(std::string_view s);

/// Symmetric or alternating bilinear form b(x, y) = x^T G y over a field of
/// characteristic != 2.  Degenerate forms are legal values (they arise as
/// restrictions); non-degeneracy is a query.
class BilinearForm {
 public:
  BilinearForm() = default;
  /// Validates squareness, the declared kind and the characteristic.
  BilinearForm(Matrix gram, FormKind kind);

  const Matrix& gram() const { return gram_; }
  FormKind kind() const { return kind_; }
  const FieldSpec& field() const { return gram_.field(); }
  size_t dim() const { return gram_.rows(); }

  Scalar operator()(const Vector& x, const Vector& y) const;
  /// Coefficients of the linear form z -> b(x, z), i.e. x^T G.
  Vector left_form(const Vector& x) const;

  bool is_nondegenerate() const { return rank_ == dim(); }
  Subspace radical() const;
  /// W^perp = { v : b(w, v) = 0 for all w in W }.
  Subspace orthogonal(const Subspace& w) const;
  bool is_totally_singular(const Subspace& w) const;
  /// Gram matrix of b restricted to W in the canonical basis of W.
  Matrix restricted_gram(const Subspace& w) const;
  BilinearForm restrict_to(const Subspace& w) const;
  /// Radical of b|_W, returned inside the ambient space.
  Subspace restriction_radical(const Subspace& w) const;

  /// Form with Gram P^T G P (the same form read in the basis given by the
  /// columns of P).
  BilinearForm in_basis(const Matrix& p) const;

  bool operator==(const BilinearForm& o) const { return kind_ == o.kind_ && gram_ == o.gram_; }

 private:
  Matrix gram_;
  FormKind kind_ = FormKind::symmetric;
  size_t rank_ = 0;
};

/// Throws CharTwoUnsupported for fields of characteristic 2.
void require_char_not_two(const FieldSpec& f);

/// Checks a Gram matrix against a declared kind; returns the validated form.
BilinearForm form_validate(const Matrix& gram, FormKind kind);

struct IsotropicSearchOptions {
  uint64_t max_vectors = 1'000'000;
  /// Integer coordinates of absolute value <= height are tried over Q.
  int rational_height = 3;
  /// Coordinate polynomials of degree <= this are tried over F_p(t).
  int polynomial_degree = 1;
};

struct IsotropicResult {
  std::optional<Vector> vector;
  /// False when the search space was not exhausted (infinite fields); a
  /// missing vector is then inconclusive.
  bool complete = true;
  std::string warning;
};

/// Nonzero x in `within` (default: everything) with b(x, x) = 0.  Candidates
/// are coordinate vectors over the canonical basis of `within`, visited in
/// little-endian counting order with first nonzero coordinate equal to one,
/// so the answer is deterministic.
IsotropicResult find_isotropic(const BilinearForm& b, const std::optional<Subspace>& within = std::nullopt,
                               const IsotropicSearchOptions& opts = {});

struct WittDecomposition {
  std::vector<std::pair<Vector, Vector>> hyperbolic_pairs;  // (f_i, h_i)
  std::vector<Vector> anisotropic_basis;                    // pairwise orthogonal g_k
  size_t witt_index = 0;
  bool complete = true;
  std::string warning;

  /// Columns f_1..f_nu, g_1..g_p, h_1..h_nu.  In this basis the Gram matrix
  /// is [0 0 I; 0 P 0; I 0 0] for symmetric b and [0 I; -I 0] for symplectic b.
  Matrix change_of_basis(const FieldSpec& f, size_t n) const;
};

/// Requires b non-degenerate (DegenerateForm otherwise).
WittDecomposition witt_decompose(const BilinearForm& b, const IsotropicSearchOptions& opts = {});
size_t witt_index(const BilinearForm& b);

/// The form induced on {x}^perp / F x by a nonzero isotropic x.
struct QuotientForm {
  BilinearForm form;
  LineQuotient quotient;
};

QuotientForm quotient_form(const BilinearForm& b, const Vector& x);

/// b-singular: the top space is totally singular.
bool is_b_singular(const BilinearForm& b, const Flag& flag);

}  // namespace structnil
