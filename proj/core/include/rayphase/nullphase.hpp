#pragma once

#include <cstdint>
#include <optional>
#include <tuple>

#include "rayphase/curve.hpp"
#include "rayphase/state.hpp"

namespace rayphase {

/// Outcome of a null-phase certificate. A curve passes when the separability
/// residual and the three-point trace statistics both sit inside tolerance.
struct NullPhaseReport {
  double mixed_partial_max = 0.0;        // max |d^2/ds ds' arg(psi(s),psi(s'))|
  double bargmann_triple_max_imag = 0.0;  // max |Im Tr(rho rho' rho'')|
  double bargmann_triple_min_real = 0.0;  // min Re Tr(rho rho' rho'')
  bool pass = false;
  std::optional<std::tuple<double, double, double>> witness;  // (s, s', s'')
  int excluded_rows = 0;  // grid rows dropped for being nearly orthogonal
};

/// Free geodesic between the rays of a and b: psi(s) = phi1 cos s + phi2 sin s
/// on [0, arccos |(a,b)|], after phase-aligning b so the overlap is real
/// positive. Coincident rays give a constant curve of zero length; orthogonal
/// rays have no such connector and throw.
SampledCurve free_geodesic(const StateVector& a, const StateVector& b,
                           int nodes = 1001);

/// Mixed-second-partial certificate (separability of the pairwise phase
/// matrix). tol <= 0 selects the default 1e-6 * max|arg| / h^2 with floor
/// 1e-8. Gauge-invariant; rows with weak overlaps are excluded and counted.
NullPhaseReport separability_test(const SampledCurve& c, double tol = -1.0);

struct TripleSampling {
  int exhaustive_limit = 40;   // all triples up to this many grid nodes
  int random_triples = 10000;  // beyond the limit, sampled reproducibly
  std::uint64_t seed = 42;
};

/// Three-point trace certificate: Tr(rho(s) rho(s') rho(s'')) must be real
/// nonnegative over sampled triples. tol <= 0 selects 1e-8 (relative to the
/// triple modulus).
NullPhaseReport bargmann_reality_test(const SampledCurve& c,
                                      const TripleSampling& sampling = {},
                                      double tol = -1.0);

/// Appends a null-phase return curve from the end ray back to the start ray;
/// the open-curve phase equals the closed-loop phase.
struct OpenClosedReduction {
  SampledCurve closed;
  double phi_open;
  double phi_closed;
};
OpenClosedReduction open_to_closed_reduction(
    const SampledCurve& c_open,
    const std::function<SampledCurve(const StateVector&, const StateVector&,
                                     int)>& connector,
    int connector_nodes = 1001);

/// Convenience: open_to_closed_reduction with the free-geodesic connector.
OpenClosedReduction open_to_closed_reduction(const SampledCurve& c_open,
                                             int connector_nodes = 1001);

}  // namespace rayphase
