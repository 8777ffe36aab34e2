#include "rayphase/state.hpp"

#include <cmath>
#include <numbers>

namespace rayphase {

namespace {
constexpr double kNormTol = 1e-12;
}

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) {
    throw DimensionError("StateVector: dim must be >= 2, got " +
                         std::to_string(amps_.size()));
  }
  norm_in_ = amps_.norm();
  if (!(norm_in_ > 1e-14)) {
    throw std::invalid_argument("StateVector: zero (or non-finite) norm");
  }
  if (std::abs(norm_in_ - 1.0) > kNormTol) {
    amps_ /= norm_in_;
  } else {
    // keep the exact bits of an already-unit input
  }
}

Ray::Ray(CMatrix projector) : proj_(std::move(projector)) {
  if (proj_.rows() != proj_.cols() || proj_.rows() < 2) {
    throw DimensionError("Ray: projector must be square with dim >= 2");
  }
  const double herm = (proj_ - proj_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    throw std::invalid_argument("Ray: projector not Hermitian, residual " +
                                std::to_string(herm));
  }
  const double idem = (proj_ * proj_ - proj_).cwiseAbs().maxCoeff();
  if (idem > 1e-10) {
    throw std::invalid_argument("Ray: projector not idempotent, residual " +
                                std::to_string(idem));
  }
  const double tr = std::abs(proj_.trace() - Complex(1.0, 0.0));
  if (tr > 1e-12) {
    throw std::invalid_argument("Ray: trace differs from 1 by " +
                                std::to_string(tr));
  }
}

Ray Ray::from_state(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return Ray(a * a.adjoint());
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("inner_product: dimension mismatch " +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
  return a.amplitudes().dot(b.amplitudes());
}

Ray project_to_ray(const StateVector& a) { return Ray::from_state(a); }

double ray_overlap(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

double pancharatnam_phase(const StateVector& a, const StateVector& b) {
  const Complex ip = inner_product(a, b);
  if (std::abs(ip) <= kOrthogonalityThreshold) {
    throw OrthogonalStatesError(
        "pancharatnam_phase: undefined relative phase, |(a,b)| = " +
        std::to_string(std::abs(ip)));
  }
  return std::arg(ip);
}

bool in_phase(const StateVector& a, const StateVector& b, double tol) {
  return std::abs(pancharatnam_phase(a, b)) < tol;
}

double wrap_angle(double x) {
  double w = std::remainder(x, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

double angle_distance(double a, double b) {
  return std::abs(wrap_angle(a - b));
}

}  // namespace rayphase
