#include "rayphase/chart.hpp"

#include <cmath>
#include <numbers>

namespace rayphase {

namespace {

// Tangent of a family kept exactly normalized: given raw amplitudes c and
// their parameter derivative dc, the unit family c/|c| has derivative
// dc/|c| - c Re(c,dc)/|c|^3.
CVector normalized_tangent(const CVector& c, const CVector& dc) {
  const double n2 = c.squaredNorm();
  const double n = std::sqrt(n2);
  const double r = c.dot(dc).real();
  return dc / n - c * (r / (n2 * n));
}

}  // namespace

void Chart::require_domain(const RVector& xi) const {
  if (xi.size() != n_params()) {
    throw DimensionError("chart '" + id() + "': expected " +
                         std::to_string(n_params()) + " parameters, got " +
                         std::to_string(xi.size()));
  }
  if (!in_domain(xi)) {
    throw ChartDomainError("chart '" + id() + "': parameter point outside domain");
  }
}

// ---------------------------------------------------------------------------
// CoherentChart

CoherentChart::CoherentChart(int truncation, double z_max)
    : truncation_(truncation), z_max_(z_max) {
  if (truncation_ < 4) {
    throw std::invalid_argument("CoherentChart: truncation too small");
  }
}

Complex CoherentChart::z_of(const RVector& xi) {
  return Complex(xi(0), xi(1)) / std::numbers::sqrt2;
}

RVector CoherentChart::xi_of(Complex z) {
  RVector xi(2);
  xi << std::numbers::sqrt2 * z.real(), std::numbers::sqrt2 * z.imag();
  return xi;
}

bool CoherentChart::in_domain(const RVector& xi) const {
  return xi.size() == 2 && std::abs(z_of(xi)) <= z_max_;
}

StateVector CoherentChart::state_at(const RVector& xi) const {
  require_domain(xi);
  const Complex z = z_of(xi);
  CVector c(truncation_);
  Complex e = std::exp(-0.5 * std::norm(z));  // z^n / sqrt(n!) prefactor chain
  c(0) = e;
  for (int n = 1; n < truncation_; ++n) {
    e *= z / std::sqrt(double(n));
    c(n) = e;
  }
  return StateVector(std::move(c));
}

CVector CoherentChart::tangent_at(const RVector& xi, int mu) const {
  require_domain(xi);
  if (mu < 0 || mu > 1) throw std::out_of_range("CoherentChart: mu");
  const Complex z = z_of(xi);
  const Complex dz = (mu == 0 ? Complex(1, 0) : Complex(0, 1)) /
                     std::numbers::sqrt2;
  // c_n = N e_n with N = exp(-|z|^2/2), e_n = z^n/sqrt(n!).
  CVector c(truncation_), dc(truncation_);
  const double N = std::exp(-0.5 * std::norm(z));
  const double dN_over_N = -(std::conj(z) * dz).real();
  Complex e(1, 0), de(0, 0);
  c(0) = N;
  dc(0) = N * dN_over_N;
  for (int n = 1; n < truncation_; ++n) {
    const double rs = 1.0 / std::sqrt(double(n));
    de = (de * z + e * dz) * rs;
    e *= z * rs;
    c(n) = N * e;
    dc(n) = N * (e * dN_over_N + de);
  }
  return normalized_tangent(c, dc);
}

std::optional<Complex> CoherentChart::overlap(const RVector& xi,
                                              const RVector& xi2) const {
  const Complex z = z_of(xi), w = z_of(xi2);
  return std::exp(-0.5 * std::norm(z) - 0.5 * std::norm(w) +
                  std::conj(z) * w);
}

std::optional<RMatrix> CoherentChart::metric_at(const RVector&) const {
  return RMatrix(0.5 * RMatrix::Identity(2, 2));
}

// ---------------------------------------------------------------------------
// GaussianChart

GaussianChart::GaussianChart(double q_extent, int grid_points, double xi2_min,
                             double xi2_max, double xi1_max)
    : xi2_min_(xi2_min), xi2_max_(xi2_max), xi1_max_(xi1_max) {
  if (grid_points < 16 || q_extent <= 0) {
    throw std::invalid_argument("GaussianChart: bad grid spec");
  }
  q_.resize(grid_points);
  dq_ = 2.0 * q_extent / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) q_[i] = -q_extent + i * dq_;
}

bool GaussianChart::in_domain(const RVector& xi) const {
  return xi.size() == 2 && xi(1) >= xi2_min_ && xi(1) <= xi2_max_ &&
         std::abs(xi(0)) <= xi1_max_;
}

CVector GaussianChart::raw_amplitudes(const RVector& xi) const {
  const double xi1 = xi(0), xi2 = xi(1);
  const double norm = std::pow(xi2 / std::numbers::pi, 0.25) *
                      std::sqrt(dq_);
  CVector c(q_.size());
  for (std::size_t i = 0; i < q_.size(); ++i) {
    const double q2 = q_[i] * q_[i];
    c(i) = norm * std::exp(-0.5 * xi2 * q2) *
           std::polar(1.0, 0.5 * xi1 * q2);
  }
  return c;
}

StateVector GaussianChart::state_at(const RVector& xi) const {
  require_domain(xi);
  return StateVector(raw_amplitudes(xi));
}

CVector GaussianChart::tangent_at(const RVector& xi, int mu) const {
  require_domain(xi);
  if (mu < 0 || mu > 1) throw std::out_of_range("GaussianChart: mu");
  const CVector c = raw_amplitudes(xi);
  CVector dc(c.size());
  if (mu == 0) {
    for (std::size_t i = 0; i < q_.size(); ++i) {
      dc(i) = Complex(0, 0.5 * q_[i] * q_[i]) * c(i);
    }
  } else {
    const double inv4 = 1.0 / (4.0 * xi(1));
    for (std::size_t i = 0; i < q_.size(); ++i) {
      dc(i) = (inv4 - 0.5 * q_[i] * q_[i]) * c(i);
    }
  }
  return normalized_tangent(c, dc);
}

std::optional<Complex> GaussianChart::overlap(const RVector& xi,
                                              const RVector& xi2) const {
  const double a1 = xi(0), a2 = xi(1), b1 = xi2(0), b2 = xi2(1);
  // (4 xi2 xi2')^{1/4} / sqrt((xi2 + xi2') - i (xi1' - xi1)), principal
  // branch; the radicand stays in the right half plane for xi2 > 0.
  const Complex rad(a2 + b2, -(b1 - a1));
  return std::pow(4.0 * a2 * b2, 0.25) / std::sqrt(rad);
}

std::optional<RMatrix> GaussianChart::metric_at(const RVector& xi) const {
  const double f = 1.0 / (8.0 * xi(1) * xi(1));
  return RMatrix(f * RMatrix::Identity(2, 2));
}

// ---------------------------------------------------------------------------
// TwoModeSphereChart

TwoModeSphereChart::TwoModeSphereChart(int per_mode_truncation)
    : trunc_(per_mode_truncation) {
  if (trunc_ < 4) {
    throw std::invalid_argument("TwoModeSphereChart: truncation too small");
  }
}

Eigen::Vector3d TwoModeSphereChart::unit_from_xi(const RVector& xi) {
  const double th = xi(0), ph = xi(1);
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
          std::cos(th)};
}

RVector TwoModeSphereChart::xi_from_unit(const Eigen::Vector3d& n) {
  RVector xi(2);
  xi << std::acos(std::clamp(n(2), -1.0, 1.0)), std::atan2(n(1), n(0));
  return xi;
}

bool TwoModeSphereChart::in_domain(const RVector& xi) const {
  return xi.size() == 2 && xi(0) >= 0.0 && xi(0) <= std::numbers::pi;
}

bool TwoModeSphereChart::metric_domain(const RVector& xi) const {
  return in_domain(xi) && std::abs(std::sin(xi(0))) > 1e-8;
}

StateVector TwoModeSphereChart::state_at(const RVector& xi) const {
  require_domain(xi);
  const Complex z1(std::cos(xi(0)), 0.0);
  const Complex z2 = std::polar(std::sin(xi(0)), xi(1));
  const double N = std::exp(-0.5);  // |z1|^2 + |z2|^2 = 1
  CVector a(trunc_), b(trunc_);
  a(0) = b(0) = Complex(1, 0);
  for (int n = 1; n < trunc_; ++n) {
    const double rs = 1.0 / std::sqrt(double(n));
    a(n) = a(n - 1) * z1 * rs;
    b(n) = b(n - 1) * z2 * rs;
  }
  CVector c(trunc_ * trunc_);
  for (int m = 0; m < trunc_; ++m) {
    for (int n = 0; n < trunc_; ++n) c(m * trunc_ + n) = N * a(m) * b(n);
  }
  return StateVector(std::move(c));
}

CVector TwoModeSphereChart::tangent_at(const RVector& xi, int mu) const {
  require_domain(xi);
  if (mu < 0 || mu > 1) throw std::out_of_range("TwoModeSphereChart: mu");
  const double th = xi(0), ph = xi(1);
  const Complex z1(std::cos(th), 0.0);
  const Complex z2 = std::polar(std::sin(th), ph);
  Complex dz1, dz2;
  if (mu == 0) {
    dz1 = Complex(-std::sin(th), 0.0);
    dz2 = std::polar(std::cos(th), ph);
  } else {
    dz1 = Complex(0, 0);
    dz2 = Complex(0, 1) * z2;
  }
  const double N = std::exp(-0.5);
  CVector a(trunc_), b(trunc_), da(trunc_), db(trunc_);
  a(0) = b(0) = Complex(1, 0);
  da(0) = db(0) = Complex(0, 0);
  for (int n = 1; n < trunc_; ++n) {
    const double rs = 1.0 / std::sqrt(double(n));
    da(n) = (da(n - 1) * z1 + a(n - 1) * dz1) * rs;
    db(n) = (db(n - 1) * z2 + b(n - 1) * dz2) * rs;
    a(n) = a(n - 1) * z1 * rs;
    b(n) = b(n - 1) * z2 * rs;
  }
  CVector c(trunc_ * trunc_), dc(trunc_ * trunc_);
  for (int m = 0; m < trunc_; ++m) {
    for (int n = 0; n < trunc_; ++n) {
      c(m * trunc_ + n) = N * a(m) * b(n);
      dc(m * trunc_ + n) = N * (da(m) * b(n) + a(m) * db(n));
    }
  }
  return normalized_tangent(c, dc);
}

std::optional<Complex> TwoModeSphereChart::overlap(const RVector& xi,
                                                   const RVector& xi2) const {
  const Complex z1(std::cos(xi(0)), 0.0);
  const Complex z2 = std::polar(std::sin(xi(0)), xi(1));
  const Complex w1(std::cos(xi2(0)), 0.0);
  const Complex w2 = std::polar(std::sin(xi2(0)), xi2(1));
  return std::exp(std::conj(z1) * w1 + std::conj(z2) * w2 - 1.0);
}

std::optional<RMatrix> TwoModeSphereChart::metric_at(const RVector& xi) const {
  RMatrix g = RMatrix::Zero(2, 2);
  const double s = std::sin(xi(0));
  g(0, 0) = 1.0;
  g(1, 1) = s * s;
  return g;
}

// ---------------------------------------------------------------------------
// RealSphereChart

RealSphereChart::RealSphereChart(int ambient_dim) : ambient_(ambient_dim) {
  if (ambient_ < 3) {
    throw std::invalid_argument("RealSphereChart: ambient dim must be >= 3");
  }
}

bool RealSphereChart::in_domain(const RVector& xi) const {
  if (xi.size() != ambient_ - 1) return false;
  for (int i = 0; i + 1 < ambient_ - 1; ++i) {
    if (!(xi(i) > 0.0 && xi(i) < std::numbers::pi)) return false;
  }
  return true;
}

bool RealSphereChart::metric_domain(const RVector& xi) const {
  if (!in_domain(xi)) return false;
  for (int i = 0; i + 1 < ambient_ - 1; ++i) {
    if (std::abs(std::sin(xi(i))) < 1e-6) return false;
  }
  return true;
}

RVector RealSphereChart::embed(const RVector& xi) const {
  RVector psi(ambient_);
  double prod = 1.0;
  for (int k = 0; k < ambient_ - 1; ++k) {
    psi(k) = prod * std::cos(xi(k));
    prod *= std::sin(xi(k));
  }
  psi(ambient_ - 1) = prod;
  return psi;
}

RVector RealSphereChart::angles_of(const RVector& psi) const {
  if (psi.size() != ambient_) {
    throw DimensionError("RealSphereChart::angles_of: wrong dimension");
  }
  RVector xi(ambient_ - 1);
  for (int k = 0; k < ambient_ - 1; ++k) {
    const double tail = psi.tail(ambient_ - 1 - k).norm();
    if (k + 1 < ambient_ - 1) {
      xi(k) = std::atan2(tail, psi(k));
    } else {
      xi(k) = std::atan2(psi(ambient_ - 1), psi(k));
    }
  }
  return xi;
}

StateVector RealSphereChart::state_at(const RVector& xi) const {
  require_domain(xi);
  return StateVector(embed(xi).cast<Complex>());
}

CVector RealSphereChart::tangent_at(const RVector& xi, int mu) const {
  require_domain(xi);
  if (mu < 0 || mu >= ambient_ - 1) {
    throw std::out_of_range("RealSphereChart: mu");
  }
  // Component k is prod_{i<k} sin(xi_i) * cos(xi_k) (last component: all
  // sines); differentiating flips exactly one factor.
  RVector dpsi = RVector::Zero(ambient_);
  for (int k = mu; k < ambient_; ++k) {
    const bool last = (k == ambient_ - 1);
    double v = 1.0;
    const int sin_count = last ? ambient_ - 1 : k;
    for (int i = 0; i < sin_count; ++i) {
      v *= (i == mu) ? std::cos(xi(i)) : std::sin(xi(i));
    }
    if (!last) {
      v *= (k == mu) ? -std::sin(xi(k)) : std::cos(xi(k));
    }
    dpsi(k) = v;
  }
  return dpsi.cast<Complex>();
}

std::optional<Complex> RealSphereChart::overlap(const RVector& xi,
                                                const RVector& xi2) const {
  return Complex(embed(xi).dot(embed(xi2)), 0.0);
}

std::optional<RMatrix> RealSphereChart::metric_at(const RVector& xi) const {
  const int n = ambient_ - 1;
  RMatrix g = RMatrix::Zero(n, n);
  double prod = 1.0;
  for (int k = 0; k < n; ++k) {
    g(k, k) = prod;
    const double s = std::sin(xi(k));
    prod *= s * s;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Paths

SampledCurve chart_curve(const Chart& chart, const PathSpec& path, int nodes) {
  if (nodes < 2) throw std::invalid_argument("chart_curve: nodes < 2");
  if (!(path.s1 > path.s0)) {
    throw std::invalid_argument("chart_curve: need s1 > s0");
  }
  std::vector<double> params(nodes);
  std::vector<StateVector> states;
  states.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double s = path.s0 + (path.s1 - path.s0) * i / (nodes - 1);
    params[i] = s;
    const RVector xi = path.xi(s);
    if (!chart.in_domain(xi)) {
      throw ChartDomainError("chart_curve: path leaves domain of '" +
                             chart.id() + "' at s = " + std::to_string(s));
    }
    states.push_back(chart.state_at(xi));
  }
  TangentFn tangent = nullptr;
  if (path.dxi) {
    const Chart* ch = &chart;
    const int dim = states.front().dim();
    auto xi_fn = path.xi;
    auto dxi_fn = path.dxi;
    tangent = [ch, dim, xi_fn, dxi_fn](double s) {
      const RVector xi = xi_fn(s);
      const RVector v = dxi_fn(s);
      CVector t = CVector::Zero(dim);
      for (int mu = 0; mu < ch->n_params(); ++mu) {
        if (v(mu) != 0.0) t += v(mu) * ch->tangent_at(xi, mu);
      }
      return t;
    };
  }
  return SampledCurve(std::move(params), std::move(states),
                      std::move(tangent));
}

double analytic_overlap_phase(const Chart& chart, const RVector& xi,
                              const RVector& xi2) {
  const auto ov = chart.overlap(xi, xi2);
  if (!ov) {
    throw std::runtime_error("analytic overlap unsupported for chart '" +
                             chart.id() + "'");
  }
  if (std::abs(*ov) <= kOrthogonalityThreshold) {
    throw OrthogonalStatesError(
        "analytic_overlap_phase: overlap modulus below threshold");
  }
  return std::arg(*ov);
}

PathSpec line_path(const RVector& xi_a, const RVector& xi_b) {
  PathSpec p;
  p.kind = "line";
  p.xi = [xi_a, xi_b](double t) { return RVector(xi_a + t * (xi_b - xi_a)); };
  p.dxi = [xi_a, xi_b](double) { return RVector(xi_b - xi_a); };
  return p;
}

PathSpec gaussian_vertical_path(double xi1, double xi2_a, double xi2_b) {
  PathSpec p;
  p.kind = "gaussian-type1";
  p.xi = [=](double t) {
    RVector xi(2);
    xi << xi1, xi2_a + t * (xi2_b - xi2_a);
    return xi;
  };
  p.dxi = [=](double) {
    RVector v(2);
    v << 0.0, xi2_b - xi2_a;
    return v;
  };
  return p;
}

PathSpec gaussian_semicircle_path(double center, double radius, double s_a,
                                  double s_b) {
  // runs from angle s_a to angle s_b; the curve parameter is arc angle
  const double dir = s_b >= s_a ? 1.0 : -1.0;
  PathSpec p;
  p.kind = "gaussian-type2";
  p.s0 = 0.0;
  p.s1 = std::max(std::abs(s_b - s_a), 1e-12);
  p.xi = [=](double s) {
    const double ang = s_a + dir * s;
    RVector xi(2);
    xi << center + radius * std::cos(ang), radius * std::sin(ang);
    return xi;
  };
  p.dxi = [=](double s) {
    const double ang = s_a + dir * s;
    RVector v(2);
    v << -dir * radius * std::sin(ang), dir * radius * std::cos(ang);
    return v;
  };
  return p;
}

namespace {

PathSpec sphere_path_from_unit_fn(
    std::string kind, std::function<Eigen::Vector3d(double)> n,
    std::function<Eigen::Vector3d(double)> dn, double s0, double s1) {
  PathSpec p;
  p.kind = std::move(kind);
  p.s0 = s0;
  p.s1 = s1;
  p.xi = [n](double s) { return TwoModeSphereChart::xi_from_unit(n(s)); };
  // theta' = -n3' / sqrt(1 - n3^2); phi' = (n1 n2' - n2 n1')/(n1^2 + n2^2).
  p.dxi = [n, dn](double s) {
    const Eigen::Vector3d v = n(s), w = dn(s);
    const double planar2 = v(0) * v(0) + v(1) * v(1);
    RVector out(2);
    out << (planar2 > 0 ? -w(2) / std::sqrt(planar2) : 0.0),
        (planar2 > 0 ? (v(0) * w(1) - v(1) * w(0)) / planar2 : 0.0);
    return out;
  };
  return p;
}

}  // namespace

PathSpec great_circle_path(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                           double s_a, double s_b) {
  if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10 ||
      std::abs(a.dot(b)) > 1e-10) {
    throw std::invalid_argument(
        "great_circle_path: need orthonormal axis pair");
  }
  auto n = [a, b](double s) {
    return Eigen::Vector3d(a * std::cos(s) + b * std::sin(s));
  };
  auto dn = [a, b](double s) {
    return Eigen::Vector3d(-a * std::sin(s) + b * std::cos(s));
  };
  return sphere_path_from_unit_fn("greatcircle-arc", n, dn, s_a, s_b);
}

PathSpec sphere_latitude_path(const Eigen::Vector3d& n_a,
                              const Eigen::Vector3d& n_b) {
  if (std::abs(n_a.norm() - 1.0) > 1e-10 ||
      std::abs(n_b.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("sphere_latitude_path: endpoints not unit");
  }
  if ((n_a - n_b).norm() < 1e-14) {
    auto n = [n_a](double) { return n_a; };
    auto dn = [](double) { return Eigen::Vector3d::Zero().eval(); };
    return sphere_path_from_unit_fn("latitude-arc", n, dn, 0.0, 1.0);
  }
  // The circle is the intersection of S^2 with a plane perpendicular to the
  // 1-2 plane: its normal m lies in that plane and m.(n_a - n_b) = 0.
  const double d1 = n_a(0) - n_b(0), d2 = n_a(1) - n_b(1);
  Eigen::Vector3d m(-d2, d1, 0.0);
  if (m.norm() < 1e-14) {
    // endpoints share their 1-2 projection; any meridian plane through it
    m = Eigen::Vector3d(-n_a(1), n_a(0), 0.0);
    if (m.norm() < 1e-14) m = Eigen::Vector3d(0.0, 1.0, 0.0);
  }
  m.normalize();
  const double d = m.dot(n_a);
  const double r2 = 1.0 - d * d;
  if (r2 < 1e-28) {
    throw std::invalid_argument(
        "sphere_latitude_path: degenerate circle (tangency point)");
  }
  const double r = std::sqrt(r2);
  const Eigen::Vector3d u = Eigen::Vector3d(0, 0, 1).cross(m).normalized();
  const Eigen::Vector3d v(0.0, 0.0, 1.0);
  const Eigen::Vector3d c = d * m;
  auto angle = [&](const Eigen::Vector3d& n) {
    return std::atan2((n - c).dot(v), (n - c).dot(u));
  };
  const double ta = angle(n_a);
  const double delta = wrap_angle(angle(n_b) - ta);  // shorter arc, signed
  const double dir = delta >= 0 ? 1.0 : -1.0;
  const double span = std::max(std::abs(delta), 1e-12);
  auto n = [c, r, u, v, ta, dir](double t) {
    const double ang = ta + dir * t;
    return Eigen::Vector3d(c + r * (std::cos(ang) * u + std::sin(ang) * v));
  };
  auto dn = [r, u, v, ta, dir](double t) {
    const double ang = ta + dir * t;
    return Eigen::Vector3d(dir * r *
                           (-std::sin(ang) * u + std::cos(ang) * v));
  };
  return sphere_path_from_unit_fn("latitude-arc", n, dn, 0.0, span);
}

PathSpec null_phase_family(const Chart& chart, const RVector& xi_a,
                           const RVector& xi_b) {
  chart.require_domain(xi_a);
  chart.require_domain(xi_b);
  const std::string id = chart.id();
  if (id == "coherent") return line_path(xi_a, xi_b);
  if (id == "gaussian") {
    if (std::abs(xi_a(0) - xi_b(0)) < 1e-12) {
      return gaussian_vertical_path(xi_a(0), xi_a(1), xi_b(1));
    }
    // Semicircle centered on the xi_1 axis through both points.
    const double c = (xi_a.squaredNorm() - xi_b.squaredNorm()) /
                     (2.0 * (xi_a(0) - xi_b(0)));
    const double R = std::hypot(xi_a(0) - c, xi_a(1));
    const double sa = std::atan2(xi_a(1), xi_a(0) - c);
    const double sb = std::atan2(xi_b(1), xi_b(0) - c);
    return gaussian_semicircle_path(c, R, sa, sb);
  }
  if (id == "sphere2mode") {
    return sphere_latitude_path(TwoModeSphereChart::unit_from_xi(xi_a),
                                TwoModeSphereChart::unit_from_xi(xi_b));
  }
  if (id == "realsphere") {
    const auto& rs = dynamic_cast<const RealSphereChart&>(chart);
    RVector a = rs.embed(xi_a);
    RVector b = rs.embed(xi_b);
    double ip = a.dot(b);
    if (std::abs(ip) <= kOrthogonalityThreshold) {
      throw OrthogonalStatesError(
          "null_phase_family: orthogonal realsphere endpoints");
    }
    if (ip < 0) b = -b, ip = -ip;  // -b projects to the same ray
    if (1.0 - ip < 1e-14) {
      const RVector xa = xi_a;
      PathSpec p;
      p.kind = "greatcircle-arc";
      p.xi = [xa](double) { return xa; };
      p.dxi = [n = xa.size()](double) { return RVector(RVector::Zero(n)); };
      return p;
    }
    const RVector e2 = ((b - ip * a) / std::sqrt(1.0 - ip * ip)).eval();
    const double smax = std::acos(ip);
    PathSpec p;
    p.kind = "greatcircle-arc";
    p.s0 = 0.0;
    p.s1 = smax;
    const RealSphereChart* rsp = &rs;
    p.xi = [rsp, a, e2](double s) {
      return rsp->angles_of(RVector(std::cos(s) * a + std::sin(s) * e2));
    };
    p.dxi = nullptr;  // angle derivatives via differences when needed
    return p;
  }
  throw std::invalid_argument("null_phase_family: no catalogue for chart '" +
                              id + "'");
}

std::unique_ptr<Chart> make_chart(const std::string& id) {
  if (id == "coherent") return std::make_unique<CoherentChart>();
  if (id == "gaussian") return std::make_unique<GaussianChart>();
  if (id == "sphere2mode") return std::make_unique<TwoModeSphereChart>();
  if (id == "realsphere") return std::make_unique<RealSphereChart>();
  throw std::invalid_argument(
      "unknown chart id '" + id +
      "' (expected coherent|gaussian|sphere2mode|realsphere)");
}

}  // namespace rayphase
