#include "rayphase/darboux.hpp"

#include <cmath>
#include <numbers>

namespace rayphase {

namespace {

// Orthonormal complement of psi0 via Householder QR.
CMatrix complement_basis(const CVector& psi0) {
  const int d = static_cast<int>(psi0.size());
  Eigen::HouseholderQR<CMatrix> qr(psi0);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  return q.rightCols(d - 1);
}

}  // namespace

DarbouxChart::DarbouxChart(StateVector base)
    : base_(std::move(base)), basis_(complement_basis(base_.amplitudes())) {}

DarbouxChart::DarbouxChart(StateVector base, CMatrix basis)
    : base_(std::move(base)), basis_(std::move(basis)) {
  const int d = base_.dim();
  if (basis_.rows() != d || basis_.cols() != d - 1) {
    throw DimensionError("DarbouxChart: basis must be dim x (dim-1)");
  }
  CMatrix full(d, d);
  full.col(0) = base_.amplitudes();
  full.rightCols(d - 1) = basis_;
  const double residual =
      (full.adjoint() * full - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (residual > 1e-12) {
    throw std::invalid_argument(
        "DarbouxChart: {psi0, e_r} not orthonormal, residual " +
        std::to_string(residual));
  }
}

DarbouxChart::Coords DarbouxChart::to_coords(const StateVector& psi) const {
  if (psi.dim() != dim()) throw DimensionError("to_coords: dimension mismatch");
  const Complex c0 = base_.amplitudes().dot(psi.amplitudes());
  if (std::abs(c0) <= kOrthogonalityThreshold) {
    throw OrthogonalStatesError(
        "to_coords: state orthogonal to the base ray (outside chart)");
  }
  Coords out;
  out.alpha = std::arg(c0);
  const CVector reduced =
      std::polar(1.0, -out.alpha) * psi.amplitudes() - std::abs(c0) * base_.amplitudes();
  const CVector chi = basis_.adjoint() * reduced;  // components on e_r
  out.beta.resize(pairs());
  out.gamma.resize(pairs());
  for (int r = 0; r < pairs(); ++r) {
    // chi_r = (beta_r - i gamma_r)/sqrt(2)
    out.beta(r) = std::numbers::sqrt2 * chi(r).real();
    out.gamma(r) = -std::numbers::sqrt2 * chi(r).imag();
  }
  return out;
}

StateVector DarbouxChart::from_coords(const Coords& c) const {
  if (c.beta.size() != pairs() || c.gamma.size() != pairs()) {
    throw DimensionError("from_coords: coordinate size mismatch");
  }
  const double chi2 = 0.5 * (c.beta.squaredNorm() + c.gamma.squaredNorm());
  if (!(chi2 < 1.0)) {
    throw std::domain_error(
        "from_coords: coordinates outside the chart (|chi|^2 >= 1)");
  }
  CVector chi(pairs());
  for (int r = 0; r < pairs(); ++r) {
    chi(r) = Complex(c.beta(r), -c.gamma(r)) / std::numbers::sqrt2;
  }
  CVector psi = basis_ * chi + std::sqrt(1.0 - chi2) * base_.amplitudes();
  return StateVector(CVector(std::polar(1.0, c.alpha) * psi));
}

CVector DarbouxChart::tangent_from_coords(const Coords& c, double alpha_rate,
                                          const RVector& beta_rate,
                                          const RVector& gamma_rate) const {
  const double chi2 = 0.5 * (c.beta.squaredNorm() + c.gamma.squaredNorm());
  if (!(chi2 < 1.0)) {
    throw std::domain_error("tangent_from_coords: outside chart");
  }
  CVector chi(pairs()), dchi(pairs());
  for (int r = 0; r < pairs(); ++r) {
    chi(r) = Complex(c.beta(r), -c.gamma(r)) / std::numbers::sqrt2;
    dchi(r) = Complex(beta_rate(r), -gamma_rate(r)) / std::numbers::sqrt2;
  }
  const double dchi2 =
      c.beta.dot(beta_rate) + c.gamma.dot(gamma_rate);  // d(|chi|^2)/dt
  const double root = std::sqrt(1.0 - chi2);
  const CVector unphased = basis_ * chi + root * base_.amplitudes();
  const CVector dunphased =
      basis_ * dchi - (0.5 * dchi2 / root) * base_.amplitudes();
  const Complex ph = std::polar(1.0, c.alpha);
  return ph * (dunphased + Complex(0.0, alpha_rate) * unphased);
}

double one_form_A(const DarbouxChart::Coords& point, double alpha_rate,
                  const RVector& beta_rate, const RVector& gamma_rate) {
  return alpha_rate +
         0.5 * (point.gamma.dot(beta_rate) - point.beta.dot(gamma_rate));
}

double integral_A(const CoordinatePath& path) {
  const std::size_t n = path.points.size();
  if (n < 2 || path.t.size() != n) {
    throw std::invalid_argument("integral_A: malformed path");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& p = path.points[k];
    const auto& q = path.points[k + 1];
    acc += q.alpha - p.alpha;
    // Exact integral of 1/2 (gamma dbeta - beta dgamma) on the segment.
    acc += 0.5 * (q.beta.dot(p.gamma) - p.beta.dot(q.gamma));
  }
  return acc;
}

double symplectic_area(const CoordinatePath& loop) {
  const std::size_t n = loop.points.size();
  if (n < 3) throw std::invalid_argument("symplectic_area: loop too short");
  const auto& a = loop.points.front();
  const auto& b = loop.points.back();
  const double closure = std::sqrt((a.beta - b.beta).squaredNorm() +
                                   (a.gamma - b.gamma).squaredNorm());
  if (closure > 1e-10) {
    throw std::invalid_argument(
        "symplectic_area: loop not closed in (beta, gamma), gap " +
        std::to_string(closure));
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& p = loop.points[k];
    const auto& q = loop.points[k + 1];
    acc += 0.5 * (p.beta.dot(q.gamma) - q.beta.dot(p.gamma));
  }
  return acc;
}

RMatrix symplectic_J(int m) {
  RMatrix j = RMatrix::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = RMatrix::Identity(m, m);
  j.bottomLeftCorner(m, m) = -RMatrix::Identity(m, m);
  return j;
}

RMatrix local_metric_matrix(const RVector& eta) {
  const int n = static_cast<int>(eta.size());
  if (n % 2 != 0) {
    throw DimensionError("local_metric_matrix: eta must stack (beta, gamma)");
  }
  const double e2 = eta.squaredNorm();
  if (!(e2 < 2.0)) {
    throw std::domain_error("local_metric_matrix: eta^T eta >= 2");
  }
  const RMatrix j = symplectic_J(n / 2);
  RMatrix g = RMatrix::Identity(n, n);
  g += 0.5 * (eta * eta.transpose()) / (1.0 - 0.5 * e2);
  g += 0.5 * j * (eta * eta.transpose()) * j;
  return g;
}

RMatrix pullback_two_form(const Chart& chart, const RVector& xi) {
  chart.require_domain(xi);
  const int n = chart.n_params();
  std::vector<CVector> u(n);
  for (int mu = 0; mu < n; ++mu) u[mu] = chart.tangent_at(xi, mu);
  RMatrix w(n, n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      w(mu, nu) = u[mu].dot(u[nu]).imag();
    }
  }
  return 0.5 * (w - w.transpose());  // antisymmetric up to rounding already
}

IsotropyReport isotropy_report(const Chart& chart,
                               const std::vector<RVector>& samples) {
  IsotropyReport rep;
  for (const auto& xi : samples) {
    rep.max_entry = std::max(
        rep.max_entry, pullback_two_form(chart, xi).cwiseAbs().maxCoeff());
  }
  rep.isotropic = rep.max_entry < 1e-10;
  return rep;
}

SampledCurve realize_coordinate_curve(
    const DarbouxChart& dc,
    const std::function<DarbouxChart::Coords(double)>& coords,
    const std::function<std::tuple<double, RVector, RVector>(double)>& rates,
    double t0, double t1, int nodes) {
  auto psi = [&dc, coords](double t) { return dc.from_coords(coords(t)); };
  TangentFn tangent = nullptr;
  if (rates) {
    const DarbouxChart* dcp = &dc;
    tangent = [dcp, coords, rates](double t) {
      const auto [ar, br, gr] = rates(t);
      return dcp->tangent_from_coords(coords(t), ar, br, gr);
    };
  }
  return sample_curve(psi, t0, t1, nodes, std::move(tangent));
}

}  // namespace rayphase
