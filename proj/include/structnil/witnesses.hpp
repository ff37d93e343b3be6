#pragma once

// Explicit families: the two counterexamples one dimension below the bound
// and single endomorphisms attaining the generic nilindex of W spaces.  Each
// construction re-checks the properties it is supposed to have and throws
// CertificateFailed otherwise.

#include <optional>
#include <string>

#include "structnil/nilspace.hpp"

namespace structnil {

enum class WitnessKind { n3_counterexample, six_dim_counterexample, wa_max, ws_max };

std::string to_string(WitnessKind k);
/// Accepts the enum names and the short forms n3, six_dim.
WitnessKind parse_witness_kind(std::string_view s);

struct WitnessRequest {
  WitnessKind which = WitnessKind::n3_counterexample;
  FieldSpec field = FieldSpec::gf(7);
  /// six_dim: form sign (1 symmetric, -1 alternating) and block kind.
  int epsilon = 1;
  TensorKind kind = TensorKind::sym;
  size_t n = 0;
  size_t nu = 0;
};

struct Witness {
  WitnessKind which = WitnessKind::n3_counterexample;
  /// The counterexample space, or the enclosing W space of the endomorphism.
  OperatorSpace space;
  std::optional<Matrix> endo;
  std::optional<BilinearForm> form;
  /// Flag of the enclosing W space (wa_max / ws_max).
  std::optional<Flag> flag;
  /// Columns are the ordered basis e.., g.., h.. in standard coordinates.
  std::optional<Matrix> change_of_basis;
  json certificate = json::object();
};

/// N(x, y) = [[0,0,x],[0,0,y],[-y,x,0]].
Matrix n3_matrix(const Scalar& x, const Scalar& y);

/// Throws BadParameters for out-of-range parameters and CharTwoUnsupported
/// for form-bearing witnesses in characteristic 2.
Witness build_witness(const WitnessRequest& req);

}  // namespace structnil
