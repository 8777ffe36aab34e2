#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rayphase/bargmann.hpp"
#include "rayphase/chart.hpp"
#include "rayphase/nullphase.hpp"
#include "rayphase/sampling.hpp"
#include "test_helpers.hpp"

using namespace rayphase;
using namespace rayphase::testing;
using std::numbers::pi;

namespace {

// Central-difference tangent of state_at, for checking the analytic ones.
CVector numeric_tangent(const Chart& chart, const RVector& xi, int mu,
                        double h = 1e-6) {
  RVector xp = xi, xm = xi;
  xp(mu) += h;
  xm(mu) -= h;
  return (chart.state_at(xp).amplitudes() - chart.state_at(xm).amplitudes()) /
         (2 * h);
}

RVector xi2(double a, double b) {
  RVector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("chart normalization and tangent consistency") {
  Rng rng(301);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  const CoherentChart coherent(64);
  const GaussianChart gaussian;
  const TwoModeSphereChart sphere(32);
  const RealSphereChart realsphere(4);

  auto check_chart = [&](const Chart& chart, const RVector& xi) {
    CAPTURE(chart.id());
    const auto psi = chart.state_at(xi);
    CHECK_CLOSE(psi.amplitudes().norm(), 1.0, 1e-10);
    for (int mu = 0; mu < chart.n_params(); ++mu) {
      const CVector t = chart.tangent_at(xi, mu);
      // normalization makes Re(psi, u_mu) vanish identically
      CHECK_CLOSE(psi.amplitudes().dot(t).real(), 0.0, 1e-8);
      CHECK_CLOSE((t - numeric_tangent(chart, xi, mu)).norm(), 0.0, 1e-6);
    }
  };

  for (int i = 0; i < 5; ++i) {
    check_chart(coherent, xi2(1.5 * u(rng), 1.5 * u(rng)));
    check_chart(gaussian, xi2(2.0 * u(rng), 1.5 + u(rng)));
    check_chart(sphere, xi2(pi / 2 + u(rng), pi * u(rng)));
    RVector xi3(3);
    xi3 << pi / 2 + u(rng), pi / 2 + 0.5 * u(rng), 2.0 * u(rng);
    check_chart(realsphere, xi3);
  }
}

TEST_CASE("coherent overlap matches the truncated inner product") {
  const CoherentChart chart(64);
  Rng rng(303);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    Complex za(u(rng), u(rng)), zb(u(rng), u(rng));
    za /= std::max(1.0, std::abs(za) / 2);  // keep |z| <= 2
    zb /= std::max(1.0, std::abs(zb) / 2);
    const RVector xa = CoherentChart::xi_of(za), xb = CoherentChart::xi_of(zb);
    const Complex truncated =
        inner_product(chart.state_at(xa), chart.state_at(xb));
    CHECK_CLOSE(std::abs(truncated - *chart.overlap(xa, xb)), 0.0, 1e-8);
  }
  // diagonal is exactly one
  const RVector x0 = CoherentChart::xi_of({0.3, -1.2});
  CHECK_CLOSE(std::abs(*chart.overlap(x0, x0) - 1.0), 0.0, 1e-12);
}

TEST_CASE("coherent chart centers the quadratures at xi") {
  const int T = 64;
  const CoherentChart chart(T);
  // ladder matrices in the Fock basis
  CMatrix q = CMatrix::Zero(T, T), p = CMatrix::Zero(T, T);
  for (int n = 1; n < T; ++n) {
    const double r = std::sqrt(n / 2.0);
    q(n - 1, n) = r;
    q(n, n - 1) = r;
    p(n - 1, n) = Complex(0, -r);
    p(n, n - 1) = Complex(0, r);
  }
  const RVector xi = xi2(0.7, -1.1);
  const CVector v = chart.state_at(xi).amplitudes();
  CHECK_CLOSE((v.adjoint() * q * v)(0).real(), 0.7, 1e-10);
  CHECK_CLOSE((v.adjoint() * p * v)(0).real(), -1.1, 1e-10);
}

TEST_CASE("gaussian analytic overlap agrees with position-space quadrature") {
  const GaussianChart chart;
  Rng rng(307);
  std::uniform_real_distribution<double> u1(-3.0, 3.0), u2(0.5, 6.0);
  for (int i = 0; i < 12; ++i) {
    const RVector xa = xi2(u1(rng), u2(rng)), xb = xi2(u1(rng), u2(rng));
    const Complex grid = inner_product(chart.state_at(xa), chart.state_at(xb));
    CHECK_CLOSE(std::abs(grid - *chart.overlap(xa, xb)), 0.0, 2e-12);
  }
  CHECK_CLOSE(std::abs(*chart.overlap(xi2(0, 1), xi2(0, 1)) - 1.0), 0.0,
              1e-13);
}

TEST_CASE("coherent overlap phase vanishes from the vacuum") {
  // conj(z) z' = 0 when one argument is the origin
  const CoherentChart chart(64);
  CHECK_CLOSE(analytic_overlap_phase(chart, CoherentChart::xi_of({0, 0}),
                                     CoherentChart::xi_of({1, 1})),
              0.0, 1e-15);
}

TEST_CASE("gaussian overlap phase worked value") {
  const GaussianChart chart;
  // (0,1) vs (1,1): arg[(4)^(1/4)/sqrt(2 - i)] = atan(1/2)/2
  CHECK_CLOSE(analytic_overlap_phase(chart, xi2(0, 1), xi2(1, 1)),
              0.5 * std::atan(0.5), 1e-14);
}

TEST_CASE("gaussian position moments") {
  const GaussianChart chart;
  for (double x2 : {0.5, 1.0, 2.5}) {
    const CVector v = chart.state_at(xi2(0.8, x2)).amplitudes();
    double q2 = 0.0, q4 = 0.0;
    const auto& q = chart.grid();
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double w = std::norm(v(i));
      q2 += q[i] * q[i] * w;
      q4 += std::pow(q[i], 4) * w;
    }
    CHECK_CLOSE(q2, 1.0 / (2 * x2), 1e-8);
    CHECK_CLOSE(q4, 3.0 / (4 * x2 * x2), 1e-8);
  }
}

TEST_CASE("gaussian overlap branch stays continuous along paths") {
  const GaussianChart chart;
  const RVector ref = xi2(-2.5, 0.8);
  double prev = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = k / 400.0;
    const RVector xi = xi2(-2.5 + 5.5 * t, 0.8 + 2.5 * t);
    const double a = analytic_overlap_phase(chart, ref, xi);
    if (k > 0) CHECK(std::abs(a - prev) < 0.1);
    prev = a;
  }
}

TEST_CASE("gaussian type I and type II overlap phases") {
  const GaussianChart chart;
  // vertical: real positive overlap
  CHECK_CLOSE(analytic_overlap_phase(chart, xi2(0.7, 0.5), xi2(0.7, 3.0)), 0.0,
              1e-10);

  // semicircle, angle parametrization: arg = (s - s')/4
  const double R = std::numbers::sqrt2, c = 0.4;
  auto point = [&](double s) {
    return xi2(c + R * std::cos(s), R * std::sin(s));
  };
  for (double s : {0.9, 1.3, 2.0}) {
    for (double sp : {1.1, 1.8, 2.4}) {
      CHECK_CLOSE(analytic_overlap_phase(chart, point(s), point(sp)),
                  (s - sp) / 4.0, 1e-12);
    }
  }
}

TEST_CASE("two-mode overlap matches the truncated tensor product") {
  const TwoModeSphereChart chart(32);
  Rng rng(311);
  std::uniform_real_distribution<double> th(0.2, pi - 0.2), ph(-pi, pi);
  for (int i = 0; i < 10; ++i) {
    const RVector xa = xi2(th(rng), ph(rng)), xb = xi2(th(rng), ph(rng));
    const Complex truncated =
        inner_product(chart.state_at(xa), chart.state_at(xb));
    CHECK_CLOSE(std::abs(truncated - *chart.overlap(xa, xb)), 0.0, 1e-6);
  }
}

TEST_CASE("great-circle overlap phase equals the wedge times sine") {
  const TwoModeSphereChart chart;
  const Eigen::Vector3d a = Eigen::Vector3d(1, 0, 0);
  const Eigen::Vector3d b = Eigen::Vector3d(0, 0.5, std::sqrt(0.75));
  const double wedge3 = 0.5;  // (a x b)_3
  auto xi_at = [&](double s) {
    return TwoModeSphereChart::xi_from_unit(a * std::cos(s) + b * std::sin(s));
  };
  for (double s : {0.1, 0.7}) {
    for (double sp : {0.4, 1.2}) {
      CHECK_CLOSE(analytic_overlap_phase(chart, xi_at(s), xi_at(sp)),
                  wedge3 * std::sin(sp - s), 1e-12);
    }
  }
  // axis pair with vanishing third wedge component: zero phase
  const auto z = Eigen::Vector3d(0, 0, 1), x = Eigen::Vector3d(1, 0, 0);
  CHECK_CLOSE(
      analytic_overlap_phase(chart, TwoModeSphereChart::xi_from_unit(z),
                             TwoModeSphereChart::xi_from_unit(x)),
      0.0, 1e-14);
}

TEST_CASE("general two-point overlap phase is exactly the wedge") {
  // not only for small separations: arg = (n x n')_3 for any pair
  const TwoModeSphereChart chart;
  Rng rng(313);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::Vector3d n1(u(rng), u(rng), u(rng)), n2(u(rng), u(rng), u(rng));
    if (n1.norm() < 0.3 || n2.norm() < 0.3) continue;
    n1.normalize();
    n2.normalize();
    const double wedge3 = n1(0) * n2(1) - n1(1) * n2(0);
    CHECK_CLOSE(
        analytic_overlap_phase(chart, TwoModeSphereChart::xi_from_unit(n1),
                               TwoModeSphereChart::xi_from_unit(n2)),
        wedge3, 1e-12);
  }
}

TEST_CASE("latitude arcs project to straight lines and separate") {
  const TwoModeSphereChart chart;
  Rng rng(317);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Vector3d na(u(rng), u(rng), u(rng)), nb(u(rng), u(rng), u(rng));
    na.normalize();
    nb.normalize();
    const auto path = sphere_latitude_path(na, nb);
    // projection to the 1-2 plane is a line n2 = beta n1 + gamma
    const Eigen::Vector3d p0 =
        TwoModeSphereChart::unit_from_xi(path.xi(path.s0));
    const Eigen::Vector3d p1 = TwoModeSphereChart::unit_from_xi(
        path.xi(0.5 * (path.s0 + path.s1)));
    const Eigen::Vector3d p2 =
        TwoModeSphereChart::unit_from_xi(path.xi(path.s1));
    const double cross = (p1(0) - p0(0)) * (p2(1) - p0(1)) -
                         (p1(1) - p0(1)) * (p2(0) - p0(0));
    CHECK_CLOSE(cross, 0.0, 1e-10);

    // endpoints are reached
    CHECK_CLOSE((p0 - na).norm(), 0.0, 1e-9);
    CHECK_CLOSE((p2 - nb).norm(), 0.0, 1e-9);

    // overlap phase along the arc: gamma (n1(s) - n1(s'))
    const double den = p2(0) - p0(0);
    if (std::abs(den) > 1e-6) {
      const double beta = (p2(1) - p0(1)) / den;
      const double gamma = p0(1) - beta * p0(0);
      CHECK_CLOSE(
          analytic_overlap_phase(chart, path.xi(path.s0), path.xi(path.s1)),
          gamma * (p0(0) - p2(0)), 1e-10);
    }
  }
}

TEST_CASE("null phase families pass both certificates") {
  Rng rng(319);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  const CoherentChart coherent(64);
  auto pc = null_phase_family(coherent, xi2(0.3, -0.4), xi2(1.2, 0.8));
  auto cc = chart_curve(coherent, pc, 25);
  CHECK(separability_test(cc).pass);
  CHECK(bargmann_reality_test(cc).pass);

  const GaussianChart gaussian;
  for (auto [a, b] : {std::pair{xi2(-1, 1), xi2(1, 1)},
                      std::pair{xi2(0, 1), xi2(0, 3)},
                      std::pair{xi2(0.5, 0.8), xi2(1.5, 2.5)}}) {
    const auto path = null_phase_family(gaussian, a, b);
    const auto curve = chart_curve(gaussian, path, 25);
    CHECK(separability_test(curve).pass);
    CHECK(bargmann_reality_test(curve).pass);
  }

  const TwoModeSphereChart sphere;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d na(u(rng), u(rng), u(rng)), nb(u(rng), u(rng), u(rng));
    na.normalize();
    nb.normalize();
    const auto path =
        null_phase_family(sphere, TwoModeSphereChart::xi_from_unit(na),
                          TwoModeSphereChart::xi_from_unit(nb));
    const auto curve = chart_curve(sphere, path, 25);
    CHECK(separability_test(curve).pass);
    CHECK(bargmann_reality_test(curve).pass);
  }
}

TEST_CASE("latitude-sided polygons satisfy the generalized connection") {
  const TwoModeSphereChart chart(32);
  const std::vector<Eigen::Vector3d> pts{
      Eigen::Vector3d(0.6, 0.16, 0.784).normalized(),
      Eigen::Vector3d(0.2, 0.8, 0.5).normalized(),
      Eigen::Vector3d(-0.4, 0.3, 0.85).normalized()};
  std::vector<RVector> xs;
  std::vector<StateVector> vs;
  for (const auto& n : pts) {
    xs.push_back(TwoModeSphereChart::xi_from_unit(n));
    vs.push_back(chart.state_at(xs.back()));
  }
  SideBuilder latitudes = [&](int j, const StateVector&, const StateVector&,
                              int nodes) {
    return chart_curve(chart,
                       null_phase_family(chart, xs[j], xs[(j + 1) % 3]),
                       nodes);
  };
  const auto pc = polygon_phase_check(VertexList(vs), latitudes, 801);
  CHECK_CLOSE(pc.defect, 0.0, 1e-8);
  // the invariant phase is the cyclic wedge sum of the vertex directions
  double wedges = 0.0;
  for (int j = 0; j < 3; ++j) {
    const auto& n1 = pts[j];
    const auto& n2 = pts[(j + 1) % 3];
    wedges += n1(0) * n2(1) - n1(1) * n2(0);
  }
  CHECK_ANGLE(pc.geometric_phase, -wedges, 1e-8);
}

TEST_CASE("gaussian connector construction") {
  const GaussianChart chart;
  const auto semi = null_phase_family(chart, xi2(-1, 1), xi2(1, 1));
  CHECK(semi.kind == "gaussian-type2");
  // center 0, radius sqrt(2): every sample obeys xi1^2 + xi2^2 = 2
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const RVector xi = semi.xi(semi.s0 + t * (semi.s1 - semi.s0));
    CHECK_CLOSE(xi.squaredNorm(), 2.0, 1e-12);
  }
  const auto vert = null_phase_family(chart, xi2(0, 1), xi2(0, 3));
  CHECK(vert.kind == "gaussian-type1");
}

TEST_CASE("meridian connector for axis-aligned sphere endpoints") {
  const TwoModeSphereChart chart;
  const auto path = null_phase_family(
      chart, TwoModeSphereChart::xi_from_unit({0, 0, 1}),
      TwoModeSphereChart::xi_from_unit({1, 0, 0}));
  // the n_2 = 0 meridian
  for (double t : {0.0, 0.3, 0.6, 1.0}) {
    const double s = path.s0 + t * (path.s1 - path.s0);
    CHECK_CLOSE(TwoModeSphereChart::unit_from_xi(path.xi(s))(1), 0.0, 1e-10);
  }
}

TEST_CASE("realsphere connector aligns signs and checks positivity") {
  const RealSphereChart chart(3);
  RVector xa(2), xb(2);
  xa << 0.4, 0.2;
  xb << 2.9, 3.0;  // nearly antipodal: raw overlap is negative
  const auto emb_ip = chart.embed(xa).dot(chart.embed(xb));
  CHECK(emb_ip < 0);
  const auto path = null_phase_family(chart, xa, xb);
  const auto curve = chart_curve(chart, path, 21);
  // all pairwise overlaps real positive along the arc
  for (int j = 0; j < curve.node_count(); ++j) {
    for (int k = j + 1; k < curve.node_count(); ++k) {
      const Complex ip = inner_product(curve.state(j), curve.state(k));
      CHECK_CLOSE(ip.imag(), 0.0, 1e-14);
      CHECK(ip.real() > 0);
    }
  }
  // endpoint rays match even though the sign was flipped
  CHECK_CLOSE(1.0 - ray_overlap(curve.states().back(), chart.state_at(xb)),
              0.0, 1e-10);
}

TEST_CASE("chart curve reports domain violations with the offending s") {
  const GaussianChart chart;
  PathSpec bad;
  bad.xi = [](double s) {
    RVector v(2);
    v << 0.0, 1.0 - 2.0 * s;  // dives through xi2 = 0
    return v;
  };
  CHECK_THROWS_AS((void)chart_curve(chart, bad, 21), ChartDomainError);
}

TEST_CASE("realsphere round trips between angles and embeddings") {
  const RealSphereChart chart(5);
  Rng rng(331);
  std::uniform_real_distribution<double> u(0.3, pi - 0.3);
  for (int i = 0; i < 10; ++i) {
    RVector xi(4);
    xi << u(rng), u(rng), u(rng), u(rng) - pi / 2;
    const RVector psi = chart.embed(xi);
    CHECK_CLOSE(psi.norm(), 1.0, 1e-14);
    CHECK_CLOSE((chart.angles_of(psi) - xi).norm(), 0.0, 1e-12);
  }
}

TEST_CASE("make_chart registry") {
  for (const auto* id : {"coherent", "gaussian", "sphere2mode", "realsphere"}) {
    CHECK(make_chart(id)->id() == id);
  }
  CHECK_THROWS(make_chart("nope"));
}
