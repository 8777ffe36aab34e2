#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rayphase {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Overlaps with modulus at or below this have no usable relative phase.
inline constexpr double kOrthogonalityThreshold = 1e-10;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a phase is requested between (numerically) orthogonal states.
struct OrthogonalStatesError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Unit vector in a finite-dimensional complex Hilbert space.
/// Construction normalizes; dim >= 2 is enforced.
class StateVector {
 public:
  explicit StateVector(CVector amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](int i) const { return amps_(i); }

  /// Norm of the raw amplitudes handed to the constructor.
  double normalization_factor() const { return norm_in_; }

 private:
  CVector amps_;
  double norm_in_;
};

/// Rank-one projector; Hermitian, idempotent, unit trace.
class Ray {
 public:
  explicit Ray(CMatrix projector);
  static Ray from_state(const StateVector& psi);

  int dim() const { return static_cast<int>(proj_.rows()); }
  const CMatrix& projector() const { return proj_; }

 private:
  CMatrix proj_;
};

/// (a,b) = sum_i conj(a_i) b_i; conjugate-linear in the first argument.
Complex inner_product(const StateVector& a, const StateVector& b);

Ray project_to_ray(const StateVector& a);

/// Tr(rho_a rho_b) = |(a,b)|^2, the ray-space transition probability.
double ray_overlap(const StateVector& a, const StateVector& b);

/// arg(a,b) in (-pi, pi]. Throws OrthogonalStatesError when |(a,b)| is
/// below the orthogonality threshold.
double pancharatnam_phase(const StateVector& a, const StateVector& b);

/// True iff (a,b) is real positive within tol on the phase.
bool in_phase(const StateVector& a, const StateVector& b, double tol = 1e-9);

/// Wrap an angle to the principal branch (-pi, pi].
double wrap_angle(double x);

/// |wrap(a-b)|: distance between angles defined mod 2*pi.
double angle_distance(double a, double b);

}  // namespace rayphase
