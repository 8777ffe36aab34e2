#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rayphase/darboux.hpp"
#include "rayphase/geodesic.hpp"
#include "rayphase/sampling.hpp"
#include "test_helpers.hpp"

using namespace rayphase;
using namespace rayphase::testing;
using std::numbers::pi;

namespace {

RVector rv(std::initializer_list<double> xs) {
  RVector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Coordinate circle of radius r in the first (beta, gamma) pair, oriented so
// the reconstructed state loop is the standard latitude traversal
// (chi ~ e^{+it}).
CoordinatePath circle_loop(const DarbouxChart& dc, double r, int nodes,
                           bool reversed = false) {
  CoordinatePath path;
  const int m = dc.pairs();
  const double dir = reversed ? -1.0 : 1.0;
  for (int k = 0; k <= nodes; ++k) {
    const double t = dir * 2 * pi * k / nodes;
    DarbouxChart::Coords c;
    c.alpha = 0.0;
    c.beta = RVector::Zero(m);
    c.gamma = RVector::Zero(m);
    c.beta(0) = r * std::cos(t);
    c.gamma(0) = -r * std::sin(t);
    path.t.push_back(2 * pi * k / nodes);
    path.points.push_back(std::move(c));
  }
  return path;
}

SampledCurve circle_loop_curve(const DarbouxChart& dc, double r, int nodes,
                               bool reversed = false) {
  const double dir = reversed ? -1.0 : 1.0;
  const int m = dc.pairs();
  auto coords = [&dc, r, dir, m](double t) {
    DarbouxChart::Coords c;
    c.alpha = 0.0;
    c.beta = RVector::Zero(m);
    c.gamma = RVector::Zero(m);
    c.beta(0) = r * std::cos(dir * t);
    c.gamma(0) = -r * std::sin(dir * t);
    return c;
  };
  auto rates = [r, dir, m](double t) {
    RVector db = RVector::Zero(m), dg = RVector::Zero(m);
    db(0) = -dir * r * std::sin(dir * t);
    dg(0) = -dir * r * std::cos(dir * t);
    return std::tuple{0.0, db, dg};
  };
  return realize_coordinate_curve(dc, coords, rates, 0.0, 2 * pi, nodes);
}

// Three-parameter family with a genuinely varying pulled-back two-form.
class ThreeParamChart : public Chart {
 public:
  std::string id() const override { return "threeparam-test"; }
  int n_params() const override { return 3; }
  bool in_domain(const RVector& xi) const override {
    return xi.cwiseAbs().maxCoeff() < 3.0;
  }
  StateVector state_at(const RVector& xi) const override {
    return StateVector(raw(xi));
  }
  CVector tangent_at(const RVector& xi, int mu) const override {
    const CVector c = raw(xi);
    CVector dc = CVector::Zero(3);
    if (mu == 0) {
      dc(1) = 1;
      dc(2) = Complex(0, xi(1));
    } else if (mu == 1) {
      dc(1) = Complex(0, 1);
      dc(2) = Complex(0, xi(0));
    } else {
      dc(2) = 1;
    }
    const double n2 = c.squaredNorm(), n = std::sqrt(n2);
    return dc / n - c * (c.dot(dc).real() / (n2 * n));
  }

 private:
  static CVector raw(const RVector& xi) {
    CVector v(3);
    v << Complex(1, 0), Complex(xi(0), xi(1)),
        Complex(xi(2), xi(0) * xi(1));
    return v;
  }
};

}  // namespace

TEST_CASE("coordinates round trip") {
  Rng rng(501);
  const auto base = random_state(4, rng);
  const DarbouxChart dc(base);

  const auto c0 = dc.to_coords(base);
  CHECK_CLOSE(c0.alpha, 0.0, 1e-12);
  CHECK_CLOSE(c0.beta.norm() + c0.gamma.norm(), 0.0, 1e-12);

  const StateVector rot{CVector(std::polar(1.0, 0.3) * base.amplitudes())};
  const auto cr = dc.to_coords(rot);
  CHECK_CLOSE(cr.alpha, 0.3, 1e-12);
  CHECK_CLOSE(cr.beta.norm() + cr.gamma.norm(), 0.0, 1e-12);

  for (int i = 0; i < 20; ++i) {
    const auto psi = random_state(4, rng);
    if (ray_overlap(base, psi) < 1e-3) continue;
    const auto back = dc.from_coords(dc.to_coords(psi));
    CHECK_CLOSE((back.amplitudes() - psi.amplitudes()).norm(), 0.0, 1e-10);
  }

  CHECK_THROWS_AS((void)dc.to_coords(StateVector(CVector(dc.basis().col(0)))),
                  OrthogonalStatesError);
}

TEST_CASE("superposition with one complement vector has beta = 1") {
  Rng rng(503);
  const auto base = random_state(3, rng);
  const DarbouxChart dc(base);
  const CVector e1 = dc.basis().col(0);
  const StateVector psi{
      CVector((base.amplitudes() + e1) / std::numbers::sqrt2)};
  const auto c = dc.to_coords(psi);
  CHECK_CLOSE(c.alpha, 0.0, 1e-12);
  CHECK_CLOSE(c.beta(0), 1.0, 1e-12);
  CHECK_CLOSE(c.gamma(0), 0.0, 1e-12);
  for (int r = 1; r < dc.pairs(); ++r) {
    CHECK_CLOSE(std::abs(c.beta(r)) + std::abs(c.gamma(r)), 0.0, 1e-12);
  }
}

TEST_CASE("one-form worked values") {
  DarbouxChart::Coords pt;
  pt.beta = rv({1.0});
  pt.gamma = rv({0.0});
  CHECK_CLOSE(one_form_A(pt, 1.0, rv({0.0}), rv({0.0})), 1.0, 1e-15);
  CHECK_CLOSE(one_form_A(pt, 0.0, rv({0.0}), rv({1.0})), -0.5, 1e-15);
}

TEST_CASE("loop integral of A over the unit coordinate circle") {
  // beta = cos t, gamma = sin t, alpha = 0: integrand -1/2, total -pi
  CoordinatePath path;
  const int n = 2000;
  for (int k = 0; k <= n; ++k) {
    const double t = 2 * pi * k / n;
    DarbouxChart::Coords c;
    c.alpha = 0.0;
    c.beta = rv({std::cos(t)});
    c.gamma = rv({std::sin(t)});
    path.t.push_back(t);
    path.points.push_back(c);
  }
  CHECK_CLOSE(integral_A(path), -pi, 1e-4);
}

TEST_CASE("A integrates to the dynamical phase") {
  Rng rng(509);
  const DarbouxChart dc(random_state(3, rng));
  auto coords = [&](double t) {
    DarbouxChart::Coords c;
    c.alpha = 0.2 * t;
    c.beta = rv({0.5 * std::cos(t), 0.3 * std::sin(2 * t)});
    c.gamma = rv({-0.5 * std::sin(t), 0.1 + 0.2 * std::cos(t)});
    return c;
  };
  auto rates = [&](double t) {
    return std::tuple{0.2, rv({-0.5 * std::sin(t), 0.6 * std::cos(2 * t)}),
                      rv({-0.5 * std::cos(t), -0.2 * std::sin(t)})};
  };
  const auto curve =
      realize_coordinate_curve(dc, coords, rates, 0.0, 2.0, 4001);
  const double phi_dyn = dynamical_phase(curve);

  CoordinatePath path;
  const int n = 4000;
  for (int k = 0; k <= n; ++k) {
    path.t.push_back(2.0 * k / n);
    path.points.push_back(coords(path.t.back()));
  }
  CHECK_CLOSE(integral_A(path), phi_dyn, 1e-6);
}

TEST_CASE("symplectic area matches the loop geometric phase") {
  Rng rng(511);
  const DarbouxChart dc(random_state(2, rng));
  const double r = 0.8;

  const auto loop = circle_loop(dc, r, 1000);
  const double area = symplectic_area(loop);
  CHECK_CLOSE(area, -pi * r * r, 1e-2);

  const auto curve = circle_loop_curve(dc, r, 1001);
  CHECK_ANGLE(geometric_phase(curve), area, 1e-4);

  // reversing the traversal flips the sign
  const auto rev = circle_loop(dc, r, 1000, true);
  CHECK_CLOSE(symplectic_area(rev), pi * r * r, 1e-2);

  // degenerate constant loop has zero area
  CoordinatePath constant;
  for (int k = 0; k < 4; ++k) {
    constant.t.push_back(k);
    DarbouxChart::Coords c;
    c.beta = rv({0.3});
    c.gamma = rv({-0.2});
    constant.points.push_back(c);
  }
  CHECK_CLOSE(symplectic_area(constant), 0.0, 1e-15);

  // open loops are rejected
  CoordinatePath open = constant;
  open.points.back().beta = rv({0.5});
  CHECK_THROWS((void)symplectic_area(open));
}

TEST_CASE("oint A equals minus the symplectic area for alpha-closed loops") {
  Rng rng(513);
  const DarbouxChart dc(random_state(2, rng));
  const auto loop = circle_loop(dc, 0.6, 500);
  CHECK_CLOSE(integral_A(loop), -symplectic_area(loop), 1e-12);
}

TEST_CASE("local metric matrix") {
  CHECK_CLOSE(
      (local_metric_matrix(RVector::Zero(4)) - RMatrix::Identity(4, 4))
          .cwiseAbs()
          .maxCoeff(),
      0.0, 1e-15);

  Rng rng(517);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) {
    RVector eta(6);
    for (int j = 0; j < 6; ++j) eta(j) = u(rng);
    const double e2 = eta.squaredNorm();
    const RMatrix g = local_metric_matrix(eta);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g);

    std::vector<double> expected{1 - 0.5 * e2, 1, 1, 1, 1,
                                 1.0 / (1 - 0.5 * e2)};
    std::sort(expected.begin(), expected.end());
    for (int j = 0; j < 6; ++j) {
      CHECK_CLOSE(es.eigenvalues()(j), expected[j], 1e-10);
    }
    const RVector jeta = symplectic_J(3) * eta;
    CHECK_CLOSE((g * eta - eta / (1 - 0.5 * e2)).norm(), 0.0, 1e-12);
    CHECK_CLOSE((g * jeta - (1 - 0.5 * e2) * jeta).norm(), 0.0, 1e-12);
  }

  RVector eta(4);
  eta << 1.0, 0.0, 0.0, 0.0;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(local_metric_matrix(eta));
  CHECK_CLOSE(es.eigenvalues().minCoeff(), 0.5, 1e-12);
  CHECK_CLOSE(es.eigenvalues().maxCoeff(), 2.0, 1e-12);

  CHECK_THROWS_AS((void)local_metric_matrix(rv({1.2, 1.0, 0.0, 0.0})),
                  std::domain_error);
}

TEST_CASE("coordinate length equals Fubini-Study length") {
  Rng rng(519);
  const DarbouxChart dc(random_state(3, rng));
  auto coords = [&](double t) {
    DarbouxChart::Coords c;
    c.alpha = 0.0;
    c.beta = rv({0.6 * std::cos(t), 0.2 * t});
    c.gamma = rv({0.4 * std::sin(t), 0.1});
    return c;
  };
  auto rates = [&](double t) {
    return std::tuple{0.0, rv({-0.6 * std::sin(t), 0.2}),
                      rv({0.4 * std::cos(t), 0.0})};
  };
  const auto curve =
      realize_coordinate_curve(dc, coords, rates, 0.0, 1.2, 3001);
  const double fs_len = curve_length(curve);

  double len = 0.0;
  auto speed = [&](double t) {
    const auto c = coords(t);
    const auto [ar, br, gr] = rates(t);
    RVector eta(4), deta(4);
    eta << c.beta(0), c.beta(1), c.gamma(0), c.gamma(1);
    deta << br(0), br(1), gr(0), gr(1);
    return std::sqrt(deta.dot(local_metric_matrix(eta) * deta));
  };
  const int n = 3000;
  for (int k = 0; k < n; ++k) {
    const double t0 = 1.2 * k / n, t1 = 1.2 * (k + 1) / n;
    len += 0.5 * (t1 - t0) * (speed(t0) + speed(t1));
  }
  // g is twice the induced metric, so coordinate length lands sqrt(2) high
  CHECK_CLOSE(len / std::numbers::sqrt2, fs_len, 1e-6);
}

TEST_CASE("radial coordinate length has the arcsine closed form") {
  Rng rng(520);
  const DarbouxChart dc(random_state(3, rng));
  const int m = dc.pairs();
  auto coords = [m](double t) {
    DarbouxChart::Coords c;
    c.alpha = 0.0;
    c.beta = RVector::Zero(m);
    c.gamma = RVector::Zero(m);
    c.beta(0) = t;
    return c;
  };
  auto rates = [m](double) {
    RVector b = RVector::Zero(m), g = RVector::Zero(m);
    b(0) = 1.0;
    return std::tuple{0.0, b, g};
  };
  const auto curve = realize_coordinate_curve(dc, coords, rates, 0.0, 1.0,
                                              2001);
  CHECK_CLOSE(curve_length(curve), std::asin(1.0 / std::numbers::sqrt2),
              1e-9);
}

TEST_CASE("pullback two-form worked values") {
  const CoherentChart coherent(64);
  const auto wc = pullback_two_form(coherent, rv({0.5, -0.2}));
  CHECK_CLOSE(wc(0, 1), 0.5, 1e-10);
  CHECK_CLOSE(wc(0, 0), 0.0, 1e-14);
  CHECK_CLOSE(wc(1, 0), -0.5, 1e-10);

  const GaussianChart gaussian;
  const auto wg = pullback_two_form(gaussian, rv({0.3, 2.0}));
  CHECK_CLOSE(wg(0, 1), 1.0 / 32.0, 1e-12);

  const RealSphereChart realsphere(4);
  const auto wr = pullback_two_form(realsphere, rv({1.1, 0.9, 0.4}));
  CHECK_CLOSE(wr.cwiseAbs().maxCoeff(), 0.0, 1e-14);

  // projected and unprojected tangent Grams share the imaginary part
  const auto gram = perp_tangent_gram(gaussian, rv({0.3, 2.0}));
  CHECK_CLOSE(gram(0, 1).imag(), wg(0, 1), 1e-12);
}

TEST_CASE("two-mode pullback is the wedge of the round sphere") {
  const TwoModeSphereChart sphere;
  for (double th : {0.4, 1.0, 2.2}) {
    const auto w = pullback_two_form(sphere, rv({th, 0.8}));
    CHECK_CLOSE(w(0, 1), std::cos(th) * std::sin(th), 1e-10);
  }
}

TEST_CASE("pullback two-form is discretely closed") {
  const ThreeParamChart chart;
  const double h = 1e-4;
  const RVector xi = rv({0.4, -0.3, 0.8});
  auto omega = [&](int mu, int nu, const RVector& x) {
    return pullback_two_form(chart, x)(mu, nu);
  };
  auto d = [&](int lam, int mu, int nu) {
    RVector xp = xi, xm = xi;
    xp(lam) += h;
    xm(lam) -= h;
    return (omega(mu, nu, xp) - omega(mu, nu, xm)) / (2 * h);
  };
  // non-vacuous only with three distinct indices
  const double cyclic = d(0, 1, 2) + d(1, 2, 0) + d(2, 0, 1);
  // sanity: the individual derivatives are far from zero
  CHECK(std::abs(d(0, 1, 2)) + std::abs(d(1, 2, 0)) + std::abs(d(2, 0, 1)) >
        1e-3);
  CHECK_CLOSE(cyclic, 0.0, 1e-5);
}

TEST_CASE("isotropy verdicts across the catalogue") {
  Rng rng(523);
  std::uniform_real_distribution<double> u(0.3, 2.5);

  const RealSphereChart realsphere(4);
  std::vector<RVector> samples;
  for (int i = 0; i < 8; ++i) samples.push_back(rv({u(rng), u(rng), u(rng)}));
  CHECK(isotropy_report(realsphere, samples).isotropic);

  const GaussianChart gaussian;
  std::vector<RVector> gs;
  for (int i = 0; i < 8; ++i) gs.push_back(rv({u(rng) - 1.2, u(rng)}));
  const auto repg = isotropy_report(gaussian, gs);
  CHECK_FALSE(repg.isotropic);
  CHECK(repg.max_entry > 1e-3);

  const TwoModeSphereChart sphere;
  std::vector<RVector> ss;
  for (int i = 0; i < 8; ++i) ss.push_back(rv({u(rng), u(rng)}));
  CHECK_FALSE(isotropy_report(sphere, ss).isotropic);
}

TEST_CASE("geometric phase on isotropic charts depends on endpoints only") {
  const RealSphereChart chart(3);
  PathSpec p1, p2;
  p1.xi = [](double t) { return rv({0.6 + 0.9 * t, 0.4 + 1.1 * t}); };
  p2.xi = [](double t) {
    return rv({0.6 + 0.9 * t + 0.5 * std::sin(pi * t),
               0.4 + 1.1 * t - 0.4 * std::sin(pi * t)});
  };
  const auto c1 = chart_curve(chart, p1, 801);
  const auto c2 = chart_curve(chart, p2, 801);
  CHECK_CLOSE(geometric_phase(c1), geometric_phase(c2), 1e-12);

  PathSpec loop;
  loop.xi = [](double t) {
    return rv({1.0 + 0.4 * std::cos(2 * pi * t),
               0.8 + 0.4 * std::sin(2 * pi * t)});
  };
  CHECK_CLOSE(geometric_phase(chart_curve(chart, loop, 801)), 0.0, 1e-12);

  // open real curves need not be null phase curves: a negative endpoint
  // overlap pins the phase at pi
  PathSpec far;
  far.xi = [](double t) { return rv({0.3 + 2.6 * t, 0.2 + 2.8 * t}); };
  const auto c3 = chart_curve(chart, far, 1001);
  CHECK_CLOSE(std::abs(geometric_phase(c3)), pi, 1e-12);
}

TEST_CASE("basis rotations leave lengths and areas invariant") {
  Rng rng(527);
  const auto base = random_state(4, rng);
  const DarbouxChart dc(base);

  CMatrix m(3, 3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(m);
  const CMatrix unitary = qr.householderQ() * CMatrix::Identity(3, 3);
  const DarbouxChart rotated(base, CMatrix(dc.basis() * unitary));

  const auto psi = random_state(4, rng);
  if (ray_overlap(base, psi) > 1e-3) {
    const auto c1 = dc.to_coords(psi);
    const auto c2 = rotated.to_coords(psi);
    CHECK_CLOSE(0.5 * (c1.beta.squaredNorm() + c1.gamma.squaredNorm()),
                0.5 * (c2.beta.squaredNorm() + c2.gamma.squaredNorm()),
                1e-10);
  }

  const auto curve1 = circle_loop_curve(dc, 0.5, 501);
  const auto curve2 = circle_loop_curve(rotated, 0.5, 501);
  CHECK_ANGLE(geometric_phase(curve1), geometric_phase(curve2), 1e-10);
  CHECK_CLOSE(curve_length(curve1), curve_length(curve2), 1e-10);
}
