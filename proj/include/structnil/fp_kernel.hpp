#pragma once

// Flat uint32 matrices over F_p for the enumeration sweeps, where the
// variant-based Scalar would dominate the running time.

#include <cstdint>
#include <vector>

#include "structnil/matrix.hpp"

namespace structnil::fp {

struct Mat {
  uint32_t p = 2;
  size_t n = 0;
  std::vector<uint32_t> a;  // row-major n*n

  Mat() = default;
  Mat(uint32_t p_, size_t n_) : p(p_), n(n_), a(n_ * n_, 0) {}

  uint32_t& operator()(size_t i, size_t j) { return a[i * n + j]; }
  uint32_t operator()(size_t i, size_t j) const { return a[i * n + j]; }

  bool is_zero() const {
    for (uint32_t x : a)
      if (x) return false;
    return true;
  }

  void add_assign(const Mat& o) {
    for (size_t k = 0; k < a.size(); ++k) {
      uint32_t s = a[k] + o.a[k];
      a[k] = s >= p ? s - p : s;
    }
  }

  void add_scaled(const Mat& o, uint32_t c) {
    if (!c) return;
    for (size_t k = 0; k < a.size(); ++k)
      a[k] = static_cast<uint32_t>((a[k] + static_cast<uint64_t>(o.a[k]) * c) % p);
  }
};

inline Mat from_matrix(const Matrix& m) {
  Mat r(m.field().characteristic(), m.rows());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).residue();
  return r;
}

inline Matrix to_matrix(const Mat& m) {
  FieldSpec f = FieldSpec::gf(m.p);
  Matrix r(f, m.n, m.n);
  for (size_t i = 0; i < m.n; ++i)
    for (size_t j = 0; j < m.n; ++j) r(i, j) = f.from_int(m(i, j));
  return r;
}

inline void mul_into(const Mat& x, const Mat& y, Mat& out) {
  const size_t n = x.n;
  out.p = x.p;
  out.n = n;
  out.a.assign(n * n, 0);
  // n <= 12 and p < 2^16 keep the unreduced row sums inside 64 bits
  std::vector<uint64_t> acc(n);
  for (size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (size_t k = 0; k < n; ++k) {
      uint64_t xi = x.a[i * n + k];
      if (!xi) continue;
      const uint32_t* yr = &y.a[k * n];
      for (size_t j = 0; j < n; ++j) acc[j] += xi * yr[j];
    }
    for (size_t j = 0; j < n; ++j) out.a[i * n + j] = static_cast<uint32_t>(acc[j] % x.p);
  }
}

inline Mat mul(const Mat& x, const Mat& y) {
  Mat out;
  mul_into(x, y, out);
  return out;
}

/// y := m x
inline void apply_into(const Mat& m, const std::vector<uint32_t>& x, std::vector<uint32_t>& y) {
  const size_t n = m.n;
  y.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    uint64_t s = 0;
    const uint32_t* r = &m.a[i * n];
    for (size_t j = 0; j < n; ++j) s += static_cast<uint64_t>(r[j]) * x[j];
    y[i] = static_cast<uint32_t>(s % m.p);
  }
}

/// Rank of a rows x cols matrix given row-major; destroys its argument.
inline size_t rank_destructive(std::vector<uint32_t>& a, size_t rows, size_t cols, uint32_t p) {
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (size_t j = 0; j < cols; ++j) std::swap(a[r * cols + j], a[piv * cols + j]);
    uint32_t inv = modp::inv(a[r * cols + c], p);
    for (size_t j = c; j < cols; ++j) a[r * cols + j] = modp::mul(a[r * cols + j], inv, p);
    for (size_t i = r + 1; i < rows; ++i) {
      uint32_t f = a[i * cols + c];
      if (!f) continue;
      for (size_t j = c; j < cols; ++j)
        a[i * cols + j] = modp::sub(a[i * cols + j], modp::mul(f, a[r * cols + j], p), p);
    }
    ++r;
  }
  return r;
}

inline size_t rank(const Mat& m) {
  std::vector<uint32_t> a = m.a;
  return rank_destructive(a, m.n, m.n, m.p);
}

}  // namespace structnil::fp
