#pragma once

// Brute-force verification.  Nilindices are found by powering each element
// until it vanishes; neither the builder's constraint system nor the
// profiler is consulted.

#include <string>

#include "structnil/nilspace.hpp"

namespace structnil {

enum class OracleProperty {
  all_nilpotent,
  rank_bound,
  nilindex_cap,
  purity,
  isotropic_top_images,
  tangent_inclusion,
  reducibility_contrapositive
};

std::string to_string(OracleProperty p);
OracleProperty parse_oracle_property(std::string_view s);

struct OracleOptions {
  uint64_t budget = 2'000'000;
  size_t samples = 256;
  uint64_t seed = 1;
  unsigned threads = 1;
  /// Throw BudgetExceeded instead of falling back to sampling.
  bool demand_exhaustive = false;
};

/// Numbers attained over the sweep, for comparison with generic_profile.
struct OracleSummary {
  bool exhaustive = false;
  uint64_t elements = 0;
  size_t max_nilindex = 0;
  uint64_t count_at_max = 0;
  size_t max_rank = 0;
  size_t dim_K = 0;
  bool pure = true;
};

OracleSummary oracle_summary(const OperatorSpace& v, const OracleOptions& opts = {});

Verdict exhaustive_verify(const OperatorSpace& v, OracleProperty prop, const OracleOptions& opts = {});

/// For every line of the complement of V inside S_b, A_b or End(F^n) (all of
/// them when the budget allows, otherwise seeded samples), searches the coset
/// A + V for a non-nilpotent element.  Fails when a whole coset is nilpotent,
/// i.e. V + F A is a nilpotent strict enlargement.
Verdict maximality_probe(const OperatorSpace& v, const OracleOptions& opts = {});

}  // namespace structnil
