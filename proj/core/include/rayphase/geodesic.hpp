#pragma once

#include <vector>

#include "rayphase/chart.hpp"

namespace rayphase {

/// Hermitian Gram matrix of the projected tangents, (u_perp_mu, u_perp_nu).
/// Its real part is the induced metric, its imaginary part the pulled-back
/// symplectic two-form.
CMatrix perp_tangent_gram(const Chart& chart, const RVector& xi);

struct MetricSample {
  RMatrix g;
  RVector xi;
  double min_eigenvalue = 0.0;
};

/// Induced metric via the chart tangents. Throws on rank deficiency
/// (reporting the minimum eigenvalue).
MetricSample induced_metric(const Chart& chart, const RVector& xi);

/// Induced metric from second differences of the analytic overlap; available
/// only for charts that provide one. Cross-check route, O(h^2) accurate.
MetricSample overlap_metric(const Chart& chart, const RVector& xi,
                            double step = 0.0);

/// Metric used by the geodesic machinery: the chart's closed form when
/// present, otherwise the tangent-Gram route.
RMatrix metric_of(const Chart& chart, const RVector& xi);

/// Christoffel symbols Gamma[mu](nu, lambda), symmetric in the lower pair,
/// from central differences of the metric. step <= 0 selects
/// cbrt(eps) * max(1, |xi_coord|) per coordinate.
std::vector<RMatrix> christoffel(const Chart& chart, const RVector& xi,
                                 double step = 0.0);

struct GeodesicSolution {
  std::vector<double> s;
  std::vector<RVector> xi;
  std::vector<RVector> xi_dot;
  std::vector<double> conserved_speed;  // g(xi) xi_dot . xi_dot per node
  bool exited_domain = false;
  double length = 0.0;

  /// max |cs - cs_0| / cs_0 over the run.
  double speed_drift() const;
};

/// Fixed-step classic fourth-order integration of
/// xi'' + Gamma(xi) xi' xi' = 0. Leaves a truncated, flagged solution if the
/// trajectory exits the chart's metric domain.
GeodesicSolution geodesic_shoot(const Chart& chart, const RVector& xi0,
                                const RVector& xi_dot0, double s_max,
                                int steps);

struct ShootingOptions {
  int steps = 512;
  int max_iterations = 64;
  double tolerance = 1e-10;  // terminal miss in parameter space
  double damping = 0.5;      // step shrink on residual increase
};

/// Two-point problem by single shooting with a damped Broyden update on the
/// initial velocity. Throws (with the best residual) on non-convergence.
GeodesicSolution geodesic_connect(const Chart& chart, const RVector& xi_a,
                                  const RVector& xi_b,
                                  const ShootingOptions& opts = {});

/// ||xi_dot^mu u_perp_mu|| per node; constant along affine geodesics and
/// equal to sqrt(conserved_speed).
std::vector<double> transverse_speed(const Chart& chart,
                                     const GeodesicSolution& sol);

/// The solution as a curve of states (analytic tangents from the chart).
SampledCurve geodesic_curve(const Chart& chart, const GeodesicSolution& sol);

}  // namespace rayphase
