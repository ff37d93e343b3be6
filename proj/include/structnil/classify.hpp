#pragma once

#include <string>

#include "structnil/nilspace.hpp"

namespace structnil {

struct ClassifyOptions {
  /// Skip the dimension check and run the recursion anyway; the failure
  /// modes of non-maximal inputs become observable this way.
  bool force = false;
};

struct Classification {
  Flag flag;
  SpaceKind kind = SpaceKind::NF;
  /// The rebuilt canonical space equals the input (always true on return).
  bool verified = false;
  /// Cardinality hypothesis of the matching theorem; when it fails the
  /// recursion is still attempted and the final verification decides.
  bool hypotheses_met = true;
  std::string hypothesis;
};

/// Complete flag F with V = N_F, for a form-free space of dimension C(n,2).
Classification classify_classical(const OperatorSpace& v, const ClassifyOptions& opts = {});

/// Maximal partially complete b-singular flag F with V = W^S_{b,F} or
/// W^A_{b,F}, for an adapted space of dimension nu(n-nu) or nu(n-nu-1).
Classification classify_structured(const OperatorSpace& v, const ClassifyOptions& opts = {});

/// Dispatches on whether V carries an adaptation class.
Classification classify(const OperatorSpace& v, const ClassifyOptions& opts = {});

}  // namespace structnil
