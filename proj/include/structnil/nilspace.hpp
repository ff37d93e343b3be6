#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structnil/endo.hpp"
#include "structnil/sweep.hpp"
#include "structnil/verdict.hpp"

namespace structnil {

/// A linear subspace of End(F^n), canonicalized through the row-major
/// flattening into F^{n^2}, with an optional form and adaptation class.
class OperatorSpace {
 public:
  OperatorSpace() = default;
  /// Throws KindMismatch if a generator is not in the declared class and
  /// PreconditionViolated if an adaptation is given without a form.
  OperatorSpace(FieldSpec f, size_t n, const std::vector<Matrix>& generators,
                std::optional<BilinearForm> form = std::nullopt, std::optional<Adaptation> adaptation = std::nullopt);

  const FieldSpec& field() const { return field_; }
  size_t n() const { return n_; }
  size_t dim() const { return flat_.dim(); }
  const Subspace& flat() const { return flat_; }
  /// Canonical basis (the reduced echelon rows of the flattening).
  const std::vector<Matrix>& basis() const { return basis_; }
  const std::optional<BilinearForm>& form() const { return form_; }
  const std::optional<Adaptation>& adaptation() const { return adaptation_; }

  Matrix element(const Vector& coeffs) const;
  std::optional<Vector> coordinates(const Matrix& u) const;
  bool contains(const Matrix& u) const;
  /// Intersection of the kernels of the basis elements.
  Subspace common_kernel() const;
  /// V x = { v(x) : v in V }.
  Subspace apply_to(const Vector& x) const;

  /// Set equality (field and ambient size included).
  bool operator==(const OperatorSpace& o) const { return field_ == o.field_ && n_ == o.n_ && flat_ == o.flat_; }

 private:
  FieldSpec field_;
  size_t n_ = 0;
  Subspace flat_;
  std::vector<Matrix> basis_;
  std::optional<BilinearForm> form_;
  std::optional<Adaptation> adaptation_;
};

enum class SpaceKind { NF, WS, WA };

std::string to_string(SpaceKind k);
SpaceKind parse_space_kind(std::string_view s);

/// F_i = span(e_1, ..., e_i) for i <= length.
Flag standard_flag(const FieldSpec& f, size_t n, size_t length);
Flag random_complete_flag(const FieldSpec& f, size_t n, Rng& rng);
/// Maximal partially complete b-singular flag built from random isotropic
/// vectors (finite fields only).
Flag random_singular_flag(const BilinearForm& b, Rng& rng);

/// Expected dimensions: C(n,2), nu(n-nu), nu(n-nu-1).
size_t expected_dimension(SpaceKind kind, size_t n, size_t nu);

struct BuildOptions {
  /// The post-build nilpotency audit is exhaustive up to this many elements.
  uint64_t audit_exhaustive_limit = 4096;
  size_t audit_samples = 64;
  uint64_t seed = 1;
};

/// NF needs a complete flag and no form.  WS/WA need a non-degenerate form
/// and a maximal partially complete b-singular flag.  The result is the
/// solution space of the linear constraints
///   G U symmetric (WS) or alternating (WA),  U F_i in F_{i-1},  U F_nu^perp in F_nu,
/// checked against the dimension formula and audited for nilpotency.
OperatorSpace build_canonical_space(SpaceKind kind, const std::optional<BilinearForm>& b, const Flag& flag,
                                    const BuildOptions& opts = {});

/// Upper bound for the nilindex of the elements of V: n without a form,
/// n - 1 for A_b over symmetric b with n = 2 nu, min(n, 2 nu + 1) otherwise.
size_t nilindex_cap(const OperatorSpace& v);
/// Bound on rk u for nilpotent adapted u: min(2 nu, n - 1), or n - 2 for
/// A_b over symmetric b with n = 2 nu.  n - 1 without a form.
size_t rank_cap(const OperatorSpace& v);
/// Witt index of the attached form (0 without a form).
size_t space_witt_index(const OperatorSpace& v);
/// dim V equals nu(n-nu), nu(n-nu-1) or C(n,2) as appropriate.
bool has_maximal_dimension(const OperatorSpace& v);

enum class ProfileStatus { exact, lower_bound };

std::string to_string(ProfileStatus s);

struct GenericProfile {
  size_t p = 0;
  ProfileStatus status = ProfileStatus::lower_bound;
  bool exhaustive = false;
  size_t cap = 0;
  /// Vectors of V^* (union of the top images) that span K.
  std::vector<Vector> top_images;
  Subspace K;
  /// Every inspected element of nilindex p has rk u^{p-1} = 1.
  bool pure = true;
  uint64_t inspected = 0;
  uint64_t top_count = 0;
  /// First element (in sweep order) attaining p.
  Matrix witness;
  /// Up to a few hundred further vectors of V^*, for the density check.
  std::vector<Vector> bullet_pool;
};

/// Throws NotNilpotent (the message names the element) if the sweep meets a
/// non-nilpotent element.
GenericProfile generic_profile(const OperatorSpace& v, const SweepOptions& opts = {});

/// Randomized check of the density statement: a basis of K(V) made of vectors
/// of V^* outside the given proper subspaces of K(V), drawn from the sweep's
/// pool.  nullopt if the pool does not contain one.
std::optional<std::vector<Vector>> linear_density_basis(const GenericProfile& prof, const std::vector<Subspace>& avoid,
                                                        Rng& rng);

struct ReductionData {
  Vector x;
  Subspace Vx;
  /// L_{V,x} = { y : x (x)_b y in V } (b-tensor of the matching kind); empty without a form.
  Subspace L;
  OperatorSpace U;
  /// Classical V^x = { f : f (x) x in V } as row vectors; form-free case only.
  Subspace Vdual_x;
  OperatorSpace quotient;
  /// Dimension identity for the reduction step.
  bool bookkeeping_holds = false;
};

/// For form-bearing V the quotient lives on {x}^perp / F x with the induced
/// form; otherwise on F^n / F x.
ReductionData reduction_data(const OperatorSpace& v, const Vector& x);

enum class CheckKind {
  trace,
  cubes,
  jordan_product_triple,
  strong_orthogonality,
  tangent_inclusion,
  reducibility,
  tensor_orthogonality
};

std::string to_string(CheckKind k);
CheckKind parse_check_kind(std::string_view s);

struct CheckRequest {
  CheckKind which = CheckKind::trace;
  /// Exponents for the trace check.
  std::vector<size_t> ks{1};
  /// Vector for strong_orthogonality, reducibility and tensor_orthogonality;
  /// a deterministic default is chosen when absent.
  std::optional<Vector> x;
};

Verdict theorem_check(const OperatorSpace& v, const CheckRequest& req, const SweepOptions& opts = {});

struct ExtensionReport {
  OperatorSpace extended;
  bool hypotheses_met = true;
  std::string hypothesis;
  size_t checks_run = 0;
  bool all_nilpotent = true;
  size_t max_nilindex = 0;
  size_t distinguished_nilindex = 0;
  Matrix distinguished;
  std::optional<Matrix> failure;
};

/// Reinterprets V over `target` (the same field, or F_p(t) over F_p) and
/// checks nilpotency of the combination sum t^{i-1} u_i plus `checks`
/// random combinations.
ExtensionReport extend_scalars(const OperatorSpace& v, const FieldSpec& target, size_t checks, uint64_t seed = 1);

/// Embeds a matrix over F_p into F_p(t) (or copies it over the same field).
Matrix embed_matrix(const Matrix& m, const FieldSpec& target);

/// Exact cube test: u^3 satisfies `accept` for all u in V whenever every
/// polarized product (sum over the distinct orderings of b_i b_j b_k) does.
/// Returns the first polarized product that is rejected.
std::optional<Matrix> polarized_cube_failure(const OperatorSpace& v, const std::function<bool(const Matrix&)>& accept);
/// Same for u^2 w + u w u + w u^2 with w running over the basis.
std::optional<Matrix> polarized_triple_failure(const OperatorSpace& v);

/// Iterates over the elements of V: all of them when exhaustive_within,
/// otherwise `samples` seeded random combinations.  The callback returns
/// false to stop.  Returns true when the sweep was exhaustive.
bool for_each_element(const OperatorSpace& v, const SweepOptions& opts,
                      const std::function<bool(const Matrix&, const Vector&)>& visit);

}  // namespace structnil
