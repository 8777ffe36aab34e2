#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rayphase/chart.hpp"
#include "rayphase/nullphase.hpp"
#include "rayphase/sampling.hpp"
#include "test_helpers.hpp"

using namespace rayphase;
using namespace rayphase::testing;
using std::numbers::pi;

namespace {

SampledCurve bloch_latitude_arc(double theta, double s0, double s1,
                                int nodes) {
  return sample_curve(
      [theta](double s) { return bloch_latitude_state(theta, s); }, s0, s1,
      nodes, [theta](double s) { return bloch_latitude_tangent(theta, s); });
}

}  // namespace

TEST_CASE("free geodesic construction") {
  CHECK_THROWS_AS(
      (void)free_geodesic(qubit(1, 0),
                          qubit(0, std::polar(1.0, 0.4)), 33),
      OrthogonalStatesError);

  const auto geo =
      free_geodesic(qubit(1, 0),
                    qubit(1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2),
                    101);
  CHECK_CLOSE(geo.params().front(), 0.0, 1e-15);
  CHECK_CLOSE(geo.params().back(), pi / 4, 1e-14);
  const auto mid = geo.state(50);
  CHECK_CLOSE(mid[0].real(), std::cos(pi / 8), 1e-12);
  CHECK_CLOSE(mid[1].real(), std::sin(pi / 8), 1e-12);

  // endpoints project to the input rays
  CHECK_CLOSE(1.0 - ray_overlap(geo.states().back(),
                                qubit(1 / std::numbers::sqrt2,
                                      1 / std::numbers::sqrt2)),
              0.0, 1e-12);

  // same ray up to phase: constant curve of zero length
  Rng rng(201);
  const auto psi = random_state(3, rng);
  const StateVector phased{CVector(std::polar(1.0, 1.1) * psi.amplitudes())};
  const auto flat = free_geodesic(psi, phased, 17);
  CHECK_CLOSE(curve_length(flat), 0.0, 1e-14);
  CHECK_CLOSE((flat.states().back().amplitudes() - psi.amplitudes()).norm(),
              0.0, 1e-14);
}

TEST_CASE("separability certificate on coherent lines and circles") {
  const CoherentChart chart(64);
  // straight line z(s) = z0 + z1 s: separable, passes
  const Complex z0(0.2, -0.3), z1(0.8, 0.5);
  PathSpec line;
  line.xi = [&](double s) { return CoherentChart::xi_of(z0 + z1 * s); };
  line.dxi = [&](double) { return CoherentChart::xi_of(z1); };
  const auto lc = chart_curve(chart, line, 25);
  const auto rep = separability_test(lc);
  CHECK(rep.pass);
  CHECK(rep.mixed_partial_max < 1e-7);

  // circle z(s) = e^{is}: mixed partial sin(s'-s), max ~ 1, fails
  PathSpec circle;
  circle.s1 = 2.0;
  circle.xi = [](double s) {
    return CoherentChart::xi_of(std::polar(1.0, s));
  };
  const auto cc = chart_curve(chart, circle, 33);
  const auto rep2 = separability_test(cc);
  CHECK_FALSE(rep2.pass);
  CHECK_CLOSE(rep2.mixed_partial_max, 1.0, 0.05);
  CHECK(rep2.witness.has_value());
}

TEST_CASE("separability on a two-mode great circle scales with the wedge") {
  const TwoModeSphereChart chart(32);
  const Eigen::Vector3d a(1, 0, 0);
  const Eigen::Vector3d b(0, 0.5, std::sqrt(0.75));
  // (a x b)_3 = 0.5
  const auto curve = chart_curve(chart, great_circle_path(a, b, 0.0, 1.6), 33);
  const auto rep = separability_test(curve);
  CHECK_FALSE(rep.pass);
  CHECK_CLOSE(rep.mixed_partial_max, 0.5, 0.02);
}

TEST_CASE("reality certificate on free geodesics") {
  Rng rng(207);
  const auto [a, b] = random_nonorthogonal_pair(4, rng, 0.2);
  const auto rep = bargmann_reality_test(free_geodesic(a, b, 30));
  CHECK(rep.pass);
  CHECK(rep.bargmann_triple_max_imag < 1e-10);
  CHECK(rep.bargmann_triple_min_real >= -1e-12);
}

TEST_CASE("reality certificate on the Gaussian semicircle") {
  const GaussianChart chart;
  const auto arc =
      chart_curve(chart, gaussian_semicircle_path(0.0, std::numbers::sqrt2,
                                                  pi / 4, 3 * pi / 4),
                  30);
  const auto rep = bargmann_reality_test(arc);
  CHECK(rep.pass);
  const auto sep = separability_test(arc);
  CHECK(sep.pass);
}

TEST_CASE("non-equatorial latitude arcs fail both certificates") {
  const auto arc = bloch_latitude_arc(pi / 3, 0.0, 2.0, 30);
  const auto reality = bargmann_reality_test(arc);
  CHECK_FALSE(reality.pass);
  CHECK(reality.bargmann_triple_max_imag > 1e-4);
  CHECK(reality.witness.has_value());
  CHECK_FALSE(separability_test(arc).pass);
}

TEST_CASE("the equatorial latitude is a null phase curve") {
  // theta = pi/2 traces a ray-space great circle; short arcs pass both tests
  const auto arc = bloch_latitude_arc(pi / 2, 0.0, 2.0, 30);
  CHECK(bargmann_reality_test(arc).pass);
  CHECK(separability_test(arc).pass);
}

TEST_CASE("certificates agree on random curves") {
  Rng rng(211);
  for (int i = 0; i < 20; ++i) {
    const auto c = random_smooth_curve(2, 24, rng, 0.5);
    bool sep_ok = true, real_ok = true;
    try {
      sep_ok = separability_test(c).pass;
      real_ok = bargmann_reality_test(c).pass;
    } catch (const OrthogonalStatesError&) {
      continue;
    }
    CHECK(sep_ok == real_ok);
  }
}

TEST_CASE("sub-windows of passing curves pass and have zero phase") {
  Rng rng(213);
  const auto [a, b] = random_nonorthogonal_pair(5, rng, 0.3);
  const auto geo = free_geodesic(a, b, 201);
  std::uniform_int_distribution<int> lo(0, 100);
  for (int i = 0; i < 10; ++i) {
    const int j0 = lo(rng);
    const int j1 = j0 + 40 + lo(rng);
    const auto w = geo.window(j0, std::min(j1, 200));
    CHECK_CLOSE(geometric_phase(w), 0.0, 1e-7);
    CHECK(bargmann_reality_test(w).pass);
  }
}

TEST_CASE("open curves reduce to closed loops without changing the phase") {
  // a free geodesic closed on itself: both phases vanish
  Rng rng(217);
  const auto [a, b] = random_nonorthogonal_pair(3, rng, 0.3);
  const auto geo = free_geodesic(a, b, 301);
  const auto red = open_to_closed_reduction(geo, 301);
  CHECK_CLOSE(red.phi_closed, 0.0, 1e-8);
  CHECK_ANGLE(red.phi_open, red.phi_closed, 1e-8);

  // quarter of the equator, then a latitude arc with a genuinely
  // nonzero open phase
  const auto quarter = bloch_latitude_arc(pi / 2, 0.0, pi / 2, 301);
  const auto red2 = open_to_closed_reduction(quarter, 301);
  CHECK_ANGLE(red2.phi_open, red2.phi_closed, 1e-6);

  const auto tilted = bloch_latitude_arc(pi / 3, 0.0, 2.0, 501);
  const auto red3 = open_to_closed_reduction(tilted, 501);
  CHECK(std::abs(red3.phi_open) > 1e-3);
  CHECK_ANGLE(red3.phi_open, red3.phi_closed, 1e-6);

  // closed input: the connector is trivial and the phase is untouched
  const auto loop = bloch_latitude_arc(pi / 3, 0.0, 2 * pi, 801);
  const auto red4 = open_to_closed_reduction(loop, 51);
  CHECK_ANGLE(red4.phi_open, red4.phi_closed, 1e-9);
}

TEST_CASE("weak-overlap rows are excluded and reported") {
  // nearly-orthogonal middle node (overlap against the ends ~ 1e-8)
  const double eps = 1e-8;
  std::vector<double> params{0.0, 0.5, 1.0};
  std::vector<StateVector> states{
      ket({1, 0, 0}), ket({eps, 1, 0}), ket({1, eps, eps})};
  // consecutive overlaps stay above the hard threshold; the (0,1) pair is
  // weak, so rows drop below the minimum and the test must refuse
  const SampledCurve c(params, states);
  CHECK_THROWS((void)separability_test(c));
}
