#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "rayphase/curve.hpp"
#include "rayphase/state.hpp"

namespace rayphase {

struct ChartDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Parametric family of unit states xi -> psi(xi; 0) with analytic tangents
/// u_mu = d psi / d xi^mu and, where available, an analytic overlap
/// (psi(xi), psi(xi')). state_at returns the alpha = 0 representative of an
/// explicit (truncated or grid) vector realization; the analytic overlap is
/// dimension-free and exact.
class Chart {
 public:
  virtual ~Chart() = default;

  virtual std::string id() const = 0;
  virtual int n_params() const = 0;
  virtual bool in_domain(const RVector& xi) const = 0;

  /// Stricter predicate for metric/geodesic work; excludes coordinate
  /// degeneracies (e.g. sphere poles) where states are still fine.
  virtual bool metric_domain(const RVector& xi) const { return in_domain(xi); }

  virtual StateVector state_at(const RVector& xi) const = 0;
  virtual CVector tangent_at(const RVector& xi, int mu) const = 0;

  /// Analytic overlap (psi(xi), psi(xi')) when the chart has one.
  virtual std::optional<Complex> overlap(const RVector& xi,
                                         const RVector& xi2) const {
    (void)xi;
    (void)xi2;
    return std::nullopt;
  }

  /// Closed-form induced metric when known; the tangent-Gram route in
  /// geodesic.hpp works for every chart and cross-checks this one.
  virtual std::optional<RMatrix> metric_at(const RVector& xi) const {
    (void)xi;
    return std::nullopt;
  }

  void require_domain(const RVector& xi) const;
};

/// Single-mode coherent states |z>, z = (xi_1 + i xi_2)/sqrt(2), realized as
/// Fock vectors of the given truncation. Euclidean metric, straight-line
/// constrained geodesics.
class CoherentChart : public Chart {
 public:
  explicit CoherentChart(int truncation = 64, double z_max = 4.0);

  std::string id() const override { return "coherent"; }
  int n_params() const override { return 2; }
  bool in_domain(const RVector& xi) const override;
  StateVector state_at(const RVector& xi) const override;
  CVector tangent_at(const RVector& xi, int mu) const override;
  std::optional<Complex> overlap(const RVector& xi,
                                 const RVector& xi2) const override;
  std::optional<RMatrix> metric_at(const RVector& xi) const override;

  int truncation() const { return truncation_; }
  static Complex z_of(const RVector& xi);
  static RVector xi_of(Complex z);

 private:
  int truncation_;
  double z_max_;
};

/// Centered normalized Gaussian wavefunctions psi(xi; q) with xi_2 > 0,
/// realized on a uniform position grid so Euclidean inner products are the
/// trapezoid quadrature of the L2 integrals. Lobachevsky metric on the upper
/// half plane; Type I (vertical) and Type II (semicircle) geodesics.
class GaussianChart : public Chart {
 public:
  explicit GaussianChart(double q_extent = 14.0, int grid_points = 4096,
                         double xi2_min = 0.4, double xi2_max = 40.0,
                         double xi1_max = 4.0);

  std::string id() const override { return "gaussian"; }
  int n_params() const override { return 2; }
  bool in_domain(const RVector& xi) const override;
  StateVector state_at(const RVector& xi) const override;
  CVector tangent_at(const RVector& xi, int mu) const override;
  std::optional<Complex> overlap(const RVector& xi,
                                 const RVector& xi2) const override;
  std::optional<RMatrix> metric_at(const RVector& xi) const override;

  const std::vector<double>& grid() const { return q_; }
  double grid_weight() const { return dq_; }

 private:
  CVector raw_amplitudes(const RVector& xi) const;
  std::vector<double> q_;
  double dq_;
  double xi2_min_, xi2_max_, xi1_max_;
};

/// Two-mode coherent states restricted to z_1 = cos(theta),
/// z_2 = e^{i phi} sin(theta): an S^2 of states with the round metric
/// diag(1, sin^2 theta). Great circles are constrained geodesics; null phase
/// curves are the latitude arcs about axes in the 1-2 plane.
class TwoModeSphereChart : public Chart {
 public:
  explicit TwoModeSphereChart(int per_mode_truncation = 32);

  std::string id() const override { return "sphere2mode"; }
  int n_params() const override { return 2; }
  bool in_domain(const RVector& xi) const override;
  bool metric_domain(const RVector& xi) const override;
  StateVector state_at(const RVector& xi) const override;
  CVector tangent_at(const RVector& xi, int mu) const override;
  std::optional<Complex> overlap(const RVector& xi,
                                 const RVector& xi2) const override;
  std::optional<RMatrix> metric_at(const RVector& xi) const override;

  static Eigen::Vector3d unit_from_xi(const RVector& xi);
  static RVector xi_from_unit(const Eigen::Vector3d& n);

 private:
  int trunc_;
};

/// Real unit vectors in R^d in hyperspherical coordinates; every overlap is
/// real, so the pulled-back symplectic form vanishes: the isotropic
/// submanifold testbed.
class RealSphereChart : public Chart {
 public:
  explicit RealSphereChart(int ambient_dim = 3);

  std::string id() const override { return "realsphere"; }
  int n_params() const override { return ambient_ - 1; }
  bool in_domain(const RVector& xi) const override;
  bool metric_domain(const RVector& xi) const override;
  StateVector state_at(const RVector& xi) const override;
  CVector tangent_at(const RVector& xi, int mu) const override;
  std::optional<Complex> overlap(const RVector& xi,
                                 const RVector& xi2) const override;
  std::optional<RMatrix> metric_at(const RVector& xi) const override;

  int ambient_dim() const { return ambient_; }
  RVector embed(const RVector& xi) const;      // the real unit vector
  RVector angles_of(const RVector& psi) const;  // inverse chart map

 private:
  int ambient_;
};

/// Parametrized path in chart coordinates. dxi may be null; kind names the
/// construction for reports.
struct PathSpec {
  std::string kind;
  double s0 = 0.0;
  double s1 = 1.0;
  std::function<RVector(double)> xi;
  std::function<RVector(double)> dxi;
};

/// Samples state_at along the path; attaches the analytic tangent
/// sum_mu dxi^mu u_mu when the path carries derivatives. The chart must
/// outlive the returned curve. Domain violations name the offending s.
SampledCurve chart_curve(const Chart& chart, const PathSpec& path,
                         int nodes = 1001);

/// arg of the chart's analytic overlap; throws if the chart has none or the
/// modulus is below the orthogonality threshold.
double analytic_overlap_phase(const Chart& chart, const RVector& xi,
                              const RVector& xi2);

/// The chart's catalogued null-phase connector between two parameter points:
/// coherent -> straight segment, gaussian -> Type I ray / Type II semicircle,
/// sphere2mode -> latitude arc about an axis in the 1-2 plane, realsphere ->
/// great-circle arc (after sign alignment; orthogonal endpoints throw).
PathSpec null_phase_family(const Chart& chart, const RVector& xi_a,
                           const RVector& xi_b);

// Path factories (parameter ranges chosen so overlap-phase formulas take
// their natural arguments).
PathSpec line_path(const RVector& xi_a, const RVector& xi_b);
PathSpec gaussian_vertical_path(double xi1, double xi2_a, double xi2_b);
PathSpec gaussian_semicircle_path(double center, double radius, double s_a,
                                  double s_b);
PathSpec great_circle_path(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                           double s_a, double s_b);
PathSpec sphere_latitude_path(const Eigen::Vector3d& n_a,
                              const Eigen::Vector3d& n_b);

std::unique_ptr<Chart> make_chart(const std::string& id);

}  // namespace rayphase
