#pragma once

#include <tuple>
#include <vector>

#include "rayphase/chart.hpp"
#include "rayphase/curve.hpp"
#include "rayphase/state.hpp"

namespace rayphase {

/// Local symplectic (Darboux) coordinates around a base ray: states in the
/// neighborhood Tr(rho_0 rho) > 0 are written
///   psi = e^{i alpha} [ chi + sqrt(1 - |chi|^2) psi_0 ],
///   chi = sum_r (beta_r - i gamma_r) e_r / sqrt(2),
/// with {psi_0, e_r} an orthonormal basis. In these coordinates the one-form
/// A = d alpha + 1/2 sum (gamma dbeta - beta dgamma) integrates to the
/// dynamical phase, and omega = dA is the constant canonical two-form.
class DarbouxChart {
 public:
  /// Completes the orthonormal basis automatically.
  explicit DarbouxChart(StateVector base);
  /// Columns of basis are the e_r; orthonormality against base is checked.
  DarbouxChart(StateVector base, CMatrix basis);

  struct Coords {
    double alpha = 0.0;
    RVector beta;
    RVector gamma;
  };

  int dim() const { return base_.dim(); }
  int pairs() const { return base_.dim() - 1; }
  const StateVector& base() const { return base_; }
  const CMatrix& basis() const { return basis_; }

  /// Throws when psi is orthogonal to the base ray (outside the chart).
  Coords to_coords(const StateVector& psi) const;
  StateVector from_coords(const Coords& c) const;

  /// d/dt of the state along a coordinate path, given the coordinate rates.
  CVector tangent_from_coords(const Coords& c, double alpha_rate,
                              const RVector& beta_rate,
                              const RVector& gamma_rate) const;

 private:
  StateVector base_;
  CMatrix basis_;  // dim x (dim-1)
};

/// A evaluated on a tangent: alpha_rate + 1/2 sum (gamma beta' - beta gamma').
double one_form_A(const DarbouxChart::Coords& point, double alpha_rate,
                  const RVector& beta_rate, const RVector& gamma_rate);

/// Sampled coordinate path; alpha defaults to zero when omitted.
struct CoordinatePath {
  std::vector<double> t;
  std::vector<DarbouxChart::Coords> points;
};

/// Line integral of A along the polyline (exact per linear segment).
double integral_A(const CoordinatePath& path);

/// Integral of omega over any surface bounded by the closed loop, reduced to
/// the boundary integral sum_r 1/2 oint (beta_r dgamma_r - gamma_r dbeta_r),
/// oriented so that it equals the geometric phase of the reconstructed state
/// loop. Throws if the loop fails to close in (beta, gamma).
double symplectic_area(const CoordinatePath& loop);

/// Metric matrix in Darboux coordinates at eta = (beta; gamma):
/// g = 1 + (1/2) eta eta^T / (1 - eta^T eta / 2) + (1/2) J eta eta^T J,
/// requires eta^T eta < 2. Eigenvalues: (1 - eta^T eta/2)^{-1} along eta,
/// (1 - eta^T eta/2) along J eta, unity elsewhere. Note g is twice the
/// induced Fubini-Study metric: arc length of a coordinate path is
/// integral sqrt(eta_dot^T g eta_dot / 2).
RMatrix local_metric_matrix(const RVector& eta);

/// The symplectic matrix J (beta; gamma) -> (gamma; -beta) for m pairs.
RMatrix symplectic_J(int m);

/// Im(u_mu, u_nu): the chart pullback of omega, antisymmetric.
RMatrix pullback_two_form(const Chart& chart, const RVector& xi);

struct IsotropyReport {
  bool isotropic = false;
  double max_entry = 0.0;
};

/// Isotropic iff the pulled-back two-form vanishes (max |entry| < 1e-10)
/// across the sample points.
IsotropyReport isotropy_report(const Chart& chart,
                               const std::vector<RVector>& samples);

/// Reconstructs the state-space curve of a coordinate path, with analytic
/// tangents from the rate functions.
SampledCurve realize_coordinate_curve(
    const DarbouxChart& dc,
    const std::function<DarbouxChart::Coords(double)>& coords,
    const std::function<std::tuple<double, RVector, RVector>(double)>& rates,
    double t0, double t1, int nodes);

}  // namespace rayphase
