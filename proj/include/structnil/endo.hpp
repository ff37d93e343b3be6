#pragma once

#include <string>
#include <vector>

#include "structnil/bilinear.hpp"

namespace structnil {

enum class Adaptation { b_symmetric, b_alternating, neither };

std::string to_string(Adaptation a);

struct AdaptednessReport {
  /// b_symmetric wins when both hold (only u = 0 is both).
  Adaptation adaptation = Adaptation::neither;
  bool symmetric = false;
  bool alternating = false;
  bool nilpotent = false;
};

/// u is b-symmetric (b-alternating) when G u is symmetric (alternating).
AdaptednessReport adaptedness_check(const Matrix& u, const BilinearForm& b);
bool is_adapted(const Matrix& u, const BilinearForm& b, Adaptation a);

enum class TensorKind { sym, alt };

/// z -> b(y, z) x + b(x, z) y  (sym)   or   z -> b(y, z) x - b(x, z) y  (alt).
Matrix b_tensor(const BilinearForm& b, const Vector& x, const Vector& y, TensorKind kind);

struct JordanPartition {
  std::vector<size_t> parts;  // weakly decreasing
  bool operator==(const JordanPartition& o) const { return parts == o.parts; }
};

std::string to_string(const JordanPartition& p);

struct NilProfile {
  size_t nilindex = 0;
  JordanPartition partition;
  std::vector<size_t> ranks;  // rk u^0, rk u^1, ..., ending with 0
};

/// Throws NotNilpotent when u^n != 0.
NilProfile nil_profile(const Matrix& u);

/// Partition from a rank sequence r_0 = n, r_1, ..., r_m = 0.
JordanPartition partition_from_ranks(const std::vector<size_t>& ranks);

enum class BlockShape { odd_cell, double_even_cell };

std::string to_string(BlockShape s);

struct JordanBlock {
  BlockShape shape = BlockShape::odd_cell;
  size_t cell_size = 0;
  /// One chain (u^{q-1} x, ..., u x, x) per Jordan cell, so chain[0] spans
  /// the kernel part and u maps chain[i+1] to chain[i].
  std::vector<std::vector<Vector>> chains;
  Subspace span;
};

/// Orthogonal splitting of V into u-stable b-regular indecomposable blocks
/// for symmetric non-degenerate b and nilpotent u in A_b.
std::vector<JordanBlock> indecomposable_decompose(const BilinearForm& b, const Matrix& u);

/// Maximal partially complete b-singular flag stable under the nilpotent
/// adapted u.  The result is checked (stability, singularity and
/// u(F^perp) inside F) before it is returned.
Flag stable_singular_flag(const BilinearForm& b, const Matrix& u);

}  // namespace structnil
