#pragma once

// Coefficient-space enumeration shared by the profiling, theorem and oracle
// sweeps.  Elements are visited in lexicographic order of their coefficient
// vectors (last coefficient fastest, field elements ordered 0, 1, ..., p-1),
// split into contiguous chunks that may run on separate threads.

#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

#include "structnil/fp_kernel.hpp"

namespace structnil {

struct SweepOptions {
  /// Exhaustive enumeration is used when |F|^dim <= budget.
  uint64_t budget = 2'000'000;
  /// Random elements drawn otherwise.
  size_t samples = 256;
  uint64_t seed = 1;
  unsigned threads = 1;
};

using Rng = std::mt19937_64;

/// Uniform over F_p; integers in [-4, 4] over Q; small rational functions
/// over F_p(t).
Scalar random_scalar(const FieldSpec& f, Rng& rng);
Vector random_vector(const FieldSpec& f, size_t n, Rng& rng);

/// |F|^k, saturated at UINT64_MAX; UINT64_MAX for infinite fields.
uint64_t element_count(const FieldSpec& f, size_t k);

inline bool exhaustive_within(const FieldSpec& f, size_t k, uint64_t budget) {
  return f.is_finite() && element_count(f, k) <= budget;
}

/// Calls work(chunk, begin, end) for `chunks` contiguous pieces of [0, total).
inline void run_chunks(uint64_t total, unsigned threads, const std::function<void(size_t, uint64_t, uint64_t)>& work) {
  const unsigned t = std::max(1u, threads);
  const uint64_t chunks = std::min<uint64_t>(t, std::max<uint64_t>(total, 1));
  auto bounds = [&](uint64_t c) { return total / chunks * c + std::min(c, total % chunks); };
  if (chunks == 1) {
    work(0, 0, total);
    return;
  }
  std::vector<std::thread> pool;
  for (uint64_t c = 0; c < chunks; ++c) pool.emplace_back(work, c, bounds(c), bounds(c + 1));
  for (auto& th : pool) th.join();
}

/// Digits of `index` in base p, most significant first (coefficient 0).
inline std::vector<uint32_t> index_digits(uint64_t index, uint32_t p, size_t k) {
  std::vector<uint32_t> d(k, 0);
  for (size_t i = k; i-- > 0;) {
    d[i] = static_cast<uint32_t>(index % p);
    index /= p;
  }
  return d;
}

/// Visits the elements with indices [begin, end) of the F_p-span of `basis`.
/// The element is updated incrementally: bumping a digit adds its basis
/// matrix once (a wrap from p-1 to 0 included).
template <class Visit>
void fp_enumerate(const std::vector<fp::Mat>& basis, uint32_t p, size_t n, uint64_t begin, uint64_t end,
                  Visit&& visit) {
  const size_t k = basis.size();
  std::vector<uint32_t> d = index_digits(begin, p, k);
  fp::Mat a(p, n);
  for (size_t i = 0; i < k; ++i) a.add_scaled(basis[i], d[i]);
  for (uint64_t idx = begin; idx < end; ++idx) {
    if (!visit(a, d, idx)) return;
    for (size_t i = k; i-- > 0;) {
      a.add_assign(basis[i]);
      if (++d[i] < p) break;
      d[i] = 0;
    }
  }
}

}  // namespace structnil
