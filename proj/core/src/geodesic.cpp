#include "rayphase/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rayphase {

CMatrix perp_tangent_gram(const Chart& chart, const RVector& xi) {
  chart.require_domain(xi);
  const int n = chart.n_params();
  const CVector psi = chart.state_at(xi).amplitudes();
  std::vector<CVector> uperp(n);
  for (int mu = 0; mu < n; ++mu) {
    const CVector u = chart.tangent_at(xi, mu);
    uperp[mu] = u - psi * psi.dot(u);
  }
  CMatrix h(n, n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      h(mu, nu) = uperp[mu].dot(uperp[nu]);
    }
  }
  return h;
}

namespace {

MetricSample metric_sample_from(RMatrix g, const RVector& xi,
                                const char* what) {
  MetricSample out;
  out.g = 0.5 * (g + g.transpose());
  out.xi = xi;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(out.g);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  const double max_eig = es.eigenvalues().cwiseAbs().maxCoeff();
  if (out.min_eigenvalue <= 1e-12 * std::max(1.0, max_eig)) {
    throw std::domain_error(std::string(what) +
                            ": metric rank-deficient, min eigenvalue " +
                            std::to_string(out.min_eigenvalue));
  }
  return out;
}

}  // namespace

MetricSample induced_metric(const Chart& chart, const RVector& xi) {
  const CMatrix h = perp_tangent_gram(chart, xi);
  return metric_sample_from(h.real(), xi, "induced_metric");
}

MetricSample overlap_metric(const Chart& chart, const RVector& xi,
                            double step) {
  chart.require_domain(xi);
  const int n = chart.n_params();
  auto K = [&](const RVector& x, const RVector& y) {
    const auto ov = chart.overlap(x, y);
    if (!ov) {
      throw std::runtime_error("overlap_metric: chart '" + chart.id() +
                               "' has no analytic overlap");
    }
    return *ov;
  };
  RVector h(n);
  for (int mu = 0; mu < n; ++mu) {
    h(mu) = step > 0 ? step
                     : std::pow(std::numeric_limits<double>::epsilon(), 0.25) *
                           std::max(1.0, std::abs(xi(mu)));
  }
  auto shift = [&](int mu, double delta) {
    RVector x = xi;
    x(mu) += delta;
    return x;
  };
  CVector d1(n), d2(n);
  for (int mu = 0; mu < n; ++mu) {
    d1(mu) = (K(shift(mu, h(mu)), xi) - K(shift(mu, -h(mu)), xi)) /
             (2.0 * h(mu));
    d2(mu) = (K(xi, shift(mu, h(mu))) - K(xi, shift(mu, -h(mu)))) /
             (2.0 * h(mu));
  }
  RMatrix g(n, n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const Complex dd = (K(shift(mu, h(mu)), shift(nu, h(nu))) -
                          K(shift(mu, h(mu)), shift(nu, -h(nu))) -
                          K(shift(mu, -h(mu)), shift(nu, h(nu))) +
                          K(shift(mu, -h(mu)), shift(nu, -h(nu)))) /
                         (4.0 * h(mu) * h(nu));
      g(mu, nu) = (dd - d1(mu) * d2(nu)).real();
    }
  }
  return metric_sample_from(std::move(g), xi, "overlap_metric");
}

RMatrix metric_of(const Chart& chart, const RVector& xi) {
  if (auto g = chart.metric_at(xi)) return *g;
  return induced_metric(chart, xi).g;
}

std::vector<RMatrix> christoffel(const Chart& chart, const RVector& xi,
                                 double step) {
  const int n = chart.n_params();
  const RMatrix g0 = metric_of(chart, xi);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g0);
  if (es.eigenvalues().minCoeff() <=
      1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
    throw std::domain_error("christoffel: metric near-singular at this point");
  }
  const RMatrix ginv = g0.inverse();

  std::vector<RMatrix> dg(n);
  for (int lam = 0; lam < n; ++lam) {
    const double h = step > 0
                         ? step
                         : std::cbrt(std::numeric_limits<double>::epsilon()) *
                               std::max(1.0, std::abs(xi(lam)));
    RVector xp = xi, xm = xi;
    xp(lam) += h;
    xm(lam) -= h;
    dg[lam] = (metric_of(chart, xp) - metric_of(chart, xm)) / (2.0 * h);
  }
  std::vector<RMatrix> gamma(n, RMatrix::Zero(n, n));
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      for (int lam = 0; lam < n; ++lam) {
        double acc = 0.0;
        for (int rho = 0; rho < n; ++rho) {
          acc += ginv(mu, rho) *
                 (dg[lam](rho, nu) + dg[nu](rho, lam) - dg[rho](nu, lam));
        }
        gamma[mu](nu, lam) = 0.5 * acc;
      }
    }
  }
  return gamma;
}

double GeodesicSolution::speed_drift() const {
  if (conserved_speed.empty()) return 0.0;
  const double c0 = conserved_speed.front();
  double worst = 0.0;
  for (double c : conserved_speed) {
    worst = std::max(worst, std::abs(c - c0));
  }
  return c0 != 0.0 ? worst / std::abs(c0) : worst;
}

namespace {

RVector geodesic_acceleration(const Chart& chart, const RVector& xi,
                              const RVector& v) {
  const auto gamma = christoffel(chart, xi);
  const int n = chart.n_params();
  RVector a(n);
  for (int mu = 0; mu < n; ++mu) {
    a(mu) = -v.dot(gamma[mu] * v);
  }
  return a;
}

}  // namespace

GeodesicSolution geodesic_shoot(const Chart& chart, const RVector& xi0,
                                const RVector& xi_dot0, double s_max,
                                int steps) {
  if (steps < 16) throw std::invalid_argument("geodesic_shoot: steps < 16");
  if (!(s_max > 0)) throw std::invalid_argument("geodesic_shoot: s_max <= 0");
  chart.require_domain(xi0);
  if (!chart.metric_domain(xi0)) {
    throw ChartDomainError("geodesic_shoot: start outside metric domain");
  }

  GeodesicSolution sol;
  const double h = s_max / steps;
  RVector x = xi0, v = xi_dot0;
  sol.s.push_back(0.0);
  sol.xi.push_back(x);
  sol.xi_dot.push_back(v);
  for (int k = 0; k < steps; ++k) {
    RVector xn(x.size()), vn(v.size());
    try {
      const RVector k1x = v;
      const RVector k1v = geodesic_acceleration(chart, x, v);
      const RVector k2x = v + 0.5 * h * k1v;
      const RVector k2v =
          geodesic_acceleration(chart, x + 0.5 * h * k1x, v + 0.5 * h * k1v);
      const RVector k3x = v + 0.5 * h * k2v;
      const RVector k3v =
          geodesic_acceleration(chart, x + 0.5 * h * k2x, v + 0.5 * h * k2v);
      const RVector k4x = v + h * k3v;
      const RVector k4v = geodesic_acceleration(chart, x + h * k3x, v + h * k3v);
      xn = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } catch (const std::domain_error&) {
      sol.exited_domain = true;
      break;
    }
    if (!chart.metric_domain(xn)) {
      sol.exited_domain = true;
      break;
    }
    x = xn;
    v = vn;
    sol.s.push_back((k + 1) * h);
    sol.xi.push_back(x);
    sol.xi_dot.push_back(v);
  }

  sol.conserved_speed.reserve(sol.s.size());
  for (std::size_t k = 0; k < sol.s.size(); ++k) {
    const RMatrix g = metric_of(chart, sol.xi[k]);
    sol.conserved_speed.push_back(sol.xi_dot[k].dot(g * sol.xi_dot[k]));
  }
  sol.length = 0.0;
  for (std::size_t k = 0; k + 1 < sol.s.size(); ++k) {
    sol.length += 0.5 * (sol.s[k + 1] - sol.s[k]) *
                  (std::sqrt(std::max(0.0, sol.conserved_speed[k])) +
                   std::sqrt(std::max(0.0, sol.conserved_speed[k + 1])));
  }
  return sol;
}

GeodesicSolution geodesic_connect(const Chart& chart, const RVector& xi_a,
                                  const RVector& xi_b,
                                  const ShootingOptions& opts) {
  chart.require_domain(xi_a);
  chart.require_domain(xi_b);
  const int n = chart.n_params();

  auto residual = [&](const RVector& v) -> RVector {
    const GeodesicSolution s = geodesic_shoot(chart, xi_a, v, 1.0, opts.steps);
    if (s.exited_domain) {
      // Penalize truncated trajectories by their shortfall.
      return RVector((s.xi.back() - xi_b) * 10.0);
    }
    return RVector(s.xi.back() - xi_b);
  };

  RVector v = xi_b - xi_a;
  if (v.norm() < 1e-14) {
    return geodesic_shoot(chart, xi_a, RVector(RVector::Zero(n)), 1.0,
                          opts.steps);
  }
  RVector f = residual(v);
  double best = f.norm();

  // Forward-difference Jacobian to seed Broyden.
  RMatrix jac(n, n);
  const double fd = 1e-6 * std::max(1.0, v.norm());
  for (int i = 0; i < n; ++i) {
    RVector vp = v;
    vp(i) += fd;
    jac.col(i) = (residual(vp) - f) / fd;
  }

  for (int it = 0; it < opts.max_iterations; ++it) {
    if (f.lpNorm<Eigen::Infinity>() < opts.tolerance) {
      GeodesicSolution sol = geodesic_shoot(chart, xi_a, v, 1.0, opts.steps);
      return sol;
    }
    RVector dv = jac.fullPivLu().solve(-f);
    if (!dv.allFinite()) {
      throw std::runtime_error("geodesic_connect: singular shooting Jacobian");
    }
    RVector v_new = v + dv;
    RVector f_new = residual(v_new);
    int damp = 0;
    while (f_new.norm() > f.norm() && damp < 24) {
      dv *= opts.damping;
      v_new = v + dv;
      f_new = residual(v_new);
      ++damp;
    }
    const RVector df = f_new - f;
    const double dv2 = dv.squaredNorm();
    if (dv2 > 0) jac += (df - jac * dv) * dv.transpose() / dv2;
    v = v_new;
    f = f_new;
    best = std::min(best, f.norm());
  }
  if (f.lpNorm<Eigen::Infinity>() < opts.tolerance) {
    return geodesic_shoot(chart, xi_a, v, 1.0, opts.steps);
  }
  throw std::runtime_error(
      "geodesic_connect: shooting did not converge, best residual " +
      std::to_string(best));
}

std::vector<double> transverse_speed(const Chart& chart,
                                     const GeodesicSolution& sol) {
  std::vector<double> out;
  out.reserve(sol.xi.size());
  for (std::size_t k = 0; k < sol.xi.size(); ++k) {
    const CVector psi = chart.state_at(sol.xi[k]).amplitudes();
    CVector w = CVector::Zero(psi.size());
    for (int mu = 0; mu < chart.n_params(); ++mu) {
      w += sol.xi_dot[k](mu) * chart.tangent_at(sol.xi[k], mu);
    }
    w -= psi * psi.dot(w);
    out.push_back(w.norm());
  }
  return out;
}

SampledCurve geodesic_curve(const Chart& chart, const GeodesicSolution& sol) {
  std::vector<StateVector> states;
  states.reserve(sol.xi.size());
  for (const auto& xi : sol.xi) states.push_back(chart.state_at(xi));

  // Cubic Hermite interpolation of (xi, xi_dot) gives a smooth tangent
  // evaluator consistent with the stored nodes.
  const Chart* ch = &chart;
  auto s_grid = sol.s;
  auto xs = sol.xi;
  auto vs = sol.xi_dot;
  const int dim = states.front().dim();
  TangentFn tangent = [ch, dim, s_grid, xs, vs](double s) {
    auto it = std::upper_bound(s_grid.begin(), s_grid.end(), s);
    int k = static_cast<int>(it - s_grid.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(s_grid.size()) - 2);
    const double h = s_grid[k + 1] - s_grid[k];
    const double t = (s - s_grid[k]) / h;
    const double h00 = 2 * t * t * t - 3 * t * t + 1;
    const double h10 = t * t * t - 2 * t * t + t;
    const double h01 = -2 * t * t * t + 3 * t * t;
    const double h11 = t * t * t - t * t;
    const RVector xi = h00 * xs[k] + h10 * h * vs[k] + h01 * xs[k + 1] +
                       h11 * h * vs[k + 1];
    const double g00 = (6 * t * t - 6 * t) / h;
    const double g10 = 3 * t * t - 4 * t + 1;
    const double g01 = (6 * t - 6 * t * t) / h;
    const double g11 = 3 * t * t - 2 * t;
    const RVector v = g00 * xs[k] + g10 * vs[k] + g01 * xs[k + 1] +
                      g11 * vs[k + 1];
    CVector out = CVector::Zero(dim);
    for (int mu = 0; mu < ch->n_params(); ++mu) {
      if (v(mu) != 0.0) out += v(mu) * ch->tangent_at(xi, mu);
    }
    return out;
  };
  return SampledCurve(sol.s, std::move(states), std::move(tangent));
}

}  // namespace rayphase
