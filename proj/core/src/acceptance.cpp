#include "rayphase/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "rayphase/bargmann.hpp"
#include "rayphase/chart.hpp"
#include "rayphase/curve.hpp"
#include "rayphase/darboux.hpp"
#include "rayphase/geodesic.hpp"
#include "rayphase/nullphase.hpp"
#include "rayphase/sampling.hpp"

namespace rayphase::acceptance {

namespace {

using std::numbers::pi;

RVector xi2(double a, double b) {
  RVector v(2);
  v << a, b;
  return v;
}

void add_row(CriterionResult& cr, const std::string& name, double expected,
             double computed, double tol, bool angle = false) {
  CheckRow row;
  row.name = name;
  row.expected = expected;
  row.computed = computed;
  row.tolerance = tol;
  row.pass = angle ? angle_distance(computed, expected) < tol
                   : std::abs(computed - expected) < tol;
  cr.rows.push_back(std::move(row));
}

void add_flag(CriterionResult& cr, const std::string& name, bool ok) {
  CheckRow row;
  row.name = name;
  row.expected = 1.0;
  row.computed = ok ? 1.0 : 0.0;
  row.tolerance = 0.5;
  row.pass = ok;
  cr.rows.push_back(std::move(row));
}

StateVector bloch_latitude_state(double theta, double s) {
  CVector v(2);
  v << std::cos(theta / 2), std::polar(std::sin(theta / 2), s);
  return StateVector(std::move(v));
}

SampledCurve bloch_latitude_curve(double theta, double s0, double s1,
                                  int nodes) {
  return sample_curve(
      [theta](double s) { return bloch_latitude_state(theta, s); }, s0, s1,
      nodes, [theta](double s) {
        CVector v(2);
        v << Complex(0, 0),
            Complex(0, 1) * std::polar(std::sin(theta / 2), s);
        return v;
      });
}

// --- criterion 1 -----------------------------------------------------------

CriterionResult criterion_free_geodesic(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "free geodesics and their sub-windows carry zero phase";
  Rng rng(seed * 1009 + 1);
  double worst_full = 0.0, worst_window = 0.0;
  std::uniform_int_distribution<int> pick(0, 180);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [a, b] = random_nonorthogonal_pair(4, rng, 0.05);
    const auto geo = free_geodesic(a, b, 257);
    worst_full = std::max(worst_full, std::abs(geometric_phase(geo)));
    for (int w = 0; w < 20; ++w) {
      const int j0 = pick(rng) % 200;
      const int j1 = std::min(256, j0 + 24 + pick(rng) % 32);
      worst_window = std::max(
          worst_window, std::abs(geometric_phase(geo.window(j0, j1))));
    }
  }
  add_row(cr, "max |phi_g| over 100 free geodesics", 0.0, worst_full, 1e-8);
  add_row(cr, "max |phi_g| over 2000 sub-windows", 0.0, worst_window, 1e-8);
  return cr;
}

// --- criterion 2 -----------------------------------------------------------

CriterionResult criterion_polygon(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "free-geodesic polygons close onto minus the invariant phase";
  Rng rng(seed * 1013 + 2);
  for (int n : {3, 4, 5}) {
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const auto v = random_vertices(n, 4, rng, 0.1);
      const auto pc = polygon_phase_check(v, free_geodesic_connector(), 4096);
      worst = std::max(worst, std::abs(pc.defect));
    }
    add_row(cr, "max |phi_g + arg Delta_" + std::to_string(n) + "| mod 2 pi",
            0.0, worst, 1e-6);
  }
  return cr;
}

// --- criterion 3 -----------------------------------------------------------

CriterionResult criterion_generalized_connection(std::uint64_t) {
  CriterionResult cr;
  cr.title =
      "coherent triangle: null-phase sides and free-geodesic sides agree";
  const CoherentChart chart(64);
  const std::vector<Complex> zs{{0, 0}, {1, 0}, {0, 1}};
  std::vector<RVector> xs;
  std::vector<StateVector> vs;
  for (const auto z : zs) {
    xs.push_back(CoherentChart::xi_of(z));
    vs.push_back(chart.state_at(xs.back()));
  }
  const VertexList vertices(vs);

  SideBuilder lines = [&](int j, const StateVector&, const StateVector&,
                          int nodes) {
    return chart_curve(chart, line_path(xs[j], xs[(j + 1) % 3]), nodes);
  };
  const auto with_lines = polygon_phase_check(vertices, lines, 2049);
  const auto with_geodesics =
      polygon_phase_check(vertices, free_geodesic_connector(), 2048);

  add_row(cr, "phi_g with straight-line sides", -1.0,
          with_lines.geometric_phase, 1e-6, true);
  add_row(cr, "phi_g with free-geodesic sides", with_lines.geometric_phase,
          with_geodesics.geometric_phase, 1e-5, true);
  add_row(cr, "straight-line defect against -arg Delta_3", 0.0,
          with_lines.defect, 1e-6);
  return cr;
}

// --- criterion 4 -----------------------------------------------------------

CriterionResult criterion_coherent_chart(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "coherent chart: Euclidean metric, straight geodesics, "
             "separable lines";
  const CoherentChart chart(64);
  Rng rng(seed * 1019 + 4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);

  double worst_overlap_route = 0.0, worst_tangent_route = 0.0;
  for (int i = 0; i < 5; ++i) {
    const RVector xi = xi2(u(rng), u(rng));
    worst_overlap_route = std::max(
        worst_overlap_route,
        (overlap_metric(chart, xi).g - 0.5 * RMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff());
    worst_tangent_route = std::max(
        worst_tangent_route,
        (induced_metric(chart, xi).g - 0.5 * RMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff());
  }
  add_row(cr, "metric vs identity/2, analytic-overlap route", 0.0,
          worst_overlap_route, 1e-6);
  add_row(cr, "metric vs identity/2, truncated-vector route", 0.0,
          worst_tangent_route, 1e-4);

  const auto sol = geodesic_shoot(chart, xi2(0.2, -0.4), xi2(0.7, 0.9), 2.0,
                                  256);
  double straight = 0.0;
  for (std::size_t k = 0; k < sol.s.size(); ++k) {
    const RVector expect = xi2(0.2 + 0.7 * sol.s[k], -0.4 + 0.9 * sol.s[k]);
    straight = std::max(straight, (sol.xi[k] - expect).cwiseAbs().maxCoeff());
  }
  add_row(cr, "shot trajectory deviation from the straight line", 0.0,
          straight, 1e-8);

  const Complex z0(0.3, -0.2), z1(0.9, 0.6);
  PathSpec line;
  line.kind = "line";
  line.xi = [=](double s) { return CoherentChart::xi_of(z0 + z1 * s); };
  line.dxi = [=](double) { return CoherentChart::xi_of(z1); };
  const auto curve = chart_curve(chart, line, 31);
  const auto rep = separability_test(curve);
  add_row(cr, "mixed partial along z(s) = z0 + z1 s", 0.0,
          rep.mixed_partial_max, 1e-7);

  const double slope =
      analytic_overlap_phase(chart, CoherentChart::xi_of(z0),
                             CoherentChart::xi_of(z0 + z1 * 0.8)) /
      0.8;
  add_row(cr, "overlap phase slope vs Im conj(z0) z1",
          (std::conj(z0) * z1).imag(), slope, 1e-8);
  return cr;
}

// --- criterion 5 -----------------------------------------------------------

CriterionResult criterion_gaussian_chart(std::uint64_t) {
  CriterionResult cr;
  cr.title = "gaussian chart: Lobachevsky metric, both geodesic families, "
             "triangle identity";
  const GaussianChart chart;

  double worst_metric = 0.0;
  for (double x1 : {-0.8, 0.5}) {
    for (double x2 : {0.6, 1.0, 2.7}) {
      const RVector xi = xi2(x1, x2);
      worst_metric =
          std::max(worst_metric, (induced_metric(chart, xi).g -
                                  RMatrix::Identity(2, 2) / (8 * x2 * x2))
                                     .cwiseAbs()
                                     .maxCoeff());
    }
  }
  add_row(cr, "metric vs identity/(8 xi2^2) by position quadrature", 0.0,
          worst_metric, 1e-8);

  double worst_gamma = 0.0;
  for (double x2 : {0.5, 1.0, 2.0}) {
    const auto gam = christoffel(chart, xi2(0.3, x2));
    const double e = -1.0 / x2;
    worst_gamma = std::max({worst_gamma, std::abs(gam[0](0, 1) - e),
                            std::abs(gam[1](1, 1) - e),
                            std::abs(gam[1](0, 0) + e),
                            std::abs(gam[0](0, 0)), std::abs(gam[0](1, 1)),
                            std::abs(gam[1](0, 1))});
  }
  add_row(cr, "christoffels vs the -1/xi2 pattern at xi2 in {1/2,1,2}", 0.0,
          worst_gamma, 1e-6);

  // Type I: vertical exponential
  const double b = 0.9;
  const auto sol1 =
      geodesic_shoot(chart, xi2(0.4, 1.0), xi2(0.0, b), 1.2, 512);
  double fit1 = 0.0;
  for (std::size_t k = 0; k < sol1.s.size(); ++k) {
    fit1 = std::max(fit1, std::abs(sol1.xi[k](0) - 0.4));
    fit1 =
        std::max(fit1, std::abs(sol1.xi[k](1) - std::exp(b * sol1.s[k])));
  }
  add_row(cr, "type I shot geodesic vs (xi1 const, xi2 = e^{bs})", 0.0, fit1,
          1e-6);

  // Type II: horizontal launch, algebraic circle fit
  const auto sol2 =
      geodesic_shoot(chart, xi2(0.0, 1.0), xi2(1.0, 0.0), 1.2, 512);
  RMatrix a(sol2.xi.size(), 2);
  RVector rhs(sol2.xi.size());
  for (std::size_t k = 0; k < sol2.xi.size(); ++k) {
    a(k, 0) = 2 * sol2.xi[k](0);
    a(k, 1) = 1.0;
    rhs(k) = sol2.xi[k].squaredNorm();
  }
  const RVector fit = a.colPivHouseholderQr().solve(rhs);
  const double c = fit(0), R = std::sqrt(fit(1) + fit(0) * fit(0));
  double fit2 = 0.0;
  for (const auto& xi : sol2.xi) {
    fit2 = std::max(fit2, std::abs(std::hypot(xi(0) - c, xi(1)) - R));
  }
  add_row(cr, "type II shot geodesic vs semicircle centered on the axis", 0.0,
          fit2, 1e-6);

  // overlap phases along both families
  double worst_t2 = 0.0;
  auto on_circle = [&](double s) {
    return xi2(c + R * std::cos(s), R * std::sin(s));
  };
  for (double s : {0.8, 1.4, 2.1}) {
    for (double sp : {1.1, 1.9, 2.5}) {
      worst_t2 = std::max(
          worst_t2, std::abs(analytic_overlap_phase(chart, on_circle(s),
                                                    on_circle(sp)) -
                             (s - sp) / 4));
    }
  }
  add_row(cr, "type II overlap phase vs (s - s')/4", 0.0, worst_t2, 1e-8);
  add_row(cr, "type I overlap phase", 0.0,
          std::abs(
              analytic_overlap_phase(chart, xi2(0.4, 0.7), xi2(0.4, 2.9))),
          1e-10);

  // constrained-geodesic triangle: loop phase vs -arg Delta_3
  const std::vector<RVector> verts{xi2(0, 1), xi2(1, 1), xi2(0.5, 2)};
  ShootingOptions opts;
  opts.steps = 256;
  SampledCurve loop = geodesic_curve(
      chart, geodesic_connect(chart, verts[0], verts[1], opts));
  loop = concatenate(
      loop,
      geodesic_curve(chart, geodesic_connect(chart, verts[1], verts[2],
                                             opts)));
  loop = concatenate(
      loop,
      geodesic_curve(chart, geodesic_connect(chart, verts[2], verts[0],
                                             opts)));
  double arg_d3 = 0.0;
  for (int j = 0; j < 3; ++j) {
    arg_d3 += std::arg(*chart.overlap(verts[j], verts[(j + 1) % 3]));
  }
  add_row(cr, "triangle loop phase vs -arg Delta_3", wrap_angle(-arg_d3),
          geometric_phase(loop), 1e-5, true);
  return cr;
}

// --- criterion 6 -----------------------------------------------------------

CriterionResult criterion_two_mode_sphere(std::uint64_t) {
  CriterionResult cr;
  cr.title = "two-mode sphere: round metric, great-circle phases, latitude "
             "null-phase curves";
  const TwoModeSphereChart chart(32);

  double worst_metric = 0.0;
  for (double th : {0.4, 1.1, 2.3}) {
    RMatrix expect = RMatrix::Zero(2, 2);
    expect(0, 0) = 1.0;
    expect(1, 1) = std::pow(std::sin(th), 2);
    worst_metric = std::max(
        worst_metric,
        (induced_metric(chart, xi2(th, 0.7)).g - expect).cwiseAbs().maxCoeff());
  }
  add_row(cr, "metric vs diag(1, sin^2 theta)", 0.0, worst_metric, 1e-8);

  const Eigen::Vector3d a(1, 0, 0);
  const Eigen::Vector3d bb(0, 0.6, 0.8);
  const double wedge = 0.6;  // (a x b)_3
  double worst_arc = 0.0;
  auto at = [&](double s) {
    return TwoModeSphereChart::xi_from_unit(a * std::cos(s) +
                                            bb * std::sin(s));
  };
  for (double s : {0.2, 0.9}) {
    for (double sp : {0.5, 1.3}) {
      worst_arc = std::max(
          worst_arc, std::abs(analytic_overlap_phase(chart, at(s), at(sp)) -
                              wedge * std::sin(sp - s)));
    }
  }
  add_row(cr, "great-circle overlap phase vs wedge * sin(s'-s)", 0.0,
          worst_arc, 1e-8);

  // separability verdicts across the wedge scale
  auto verdict = [&](const Eigen::Vector3d& axis_b) {
    const auto curve =
        chart_curve(chart, great_circle_path(a, axis_b, 0.0, 1.3), 25);
    return separability_test(curve);
  };
  add_flag(cr, "wedge 0.6 great circle fails separability",
           !verdict(bb).pass);
  add_flag(cr, "wedge 1e-3 great circle fails separability",
           !verdict(Eigen::Vector3d(0, 1e-3, std::sqrt(1 - 1e-6))).pass);
  Eigen::Vector3d tiny(0, 1e-9, 1.0);
  tiny.normalize();
  add_flag(cr, "wedge 1e-9 great circle passes separability",
           verdict(tiny).pass);
  add_flag(cr, "meridian great circle passes separability",
           verdict(Eigen::Vector3d(0, 0, 1)).pass);

  // latitude family: separable with phase gamma (n1(s) - n1(s'))
  Eigen::Vector3d na(0.8, 0.36, std::sqrt(1 - 0.64 - 0.1296));
  Eigen::Vector3d nb(-0.1, 0.63, std::sqrt(1 - 0.01 - 0.3969));
  const auto lat = sphere_latitude_path(na, nb);
  const auto lat_curve = chart_curve(chart, lat, 25);
  add_flag(cr, "latitude arc passes separability",
           separability_test(lat_curve).pass);
  const Eigen::Vector3d p0 = TwoModeSphereChart::unit_from_xi(lat.xi(lat.s0));
  const Eigen::Vector3d p2 = TwoModeSphereChart::unit_from_xi(lat.xi(lat.s1));
  const double beta = (p2(1) - p0(1)) / (p2(0) - p0(0));
  const double gamma = p0(1) - beta * p0(0);
  add_row(cr, "latitude overlap phase vs gamma (n1 - n1')",
          gamma * (p0(0) - p2(0)),
          analytic_overlap_phase(chart, lat.xi(lat.s0), lat.xi(lat.s1)),
          1e-8);
  return cr;
}

// --- criterion 7 -----------------------------------------------------------

CriterionResult criterion_decomposition(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "anchored triangle decomposition reconstructs Delta_n";
  Rng rng(seed * 1021 + 7);
  std::uniform_int_distribution<int> nn(4, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = random_vertices(nn(rng), 5, rng, 0.05);
    const auto dec = decompose_into_triangles(v);
    const Complex direct = bargmann_invariant(v);
    worst = std::max(worst,
                     std::abs(dec.reconstructed - direct) / std::abs(direct));
  }
  add_row(cr, "max relative reconstruction error, n <= 8, dim 5", 0.0, worst,
          1e-10);
  return cr;
}

// --- criterion 8 -----------------------------------------------------------

CriterionResult criterion_additivity(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "composition defects equal the junction invariants";
  Rng rng(seed * 1031 + 8);
  double worst_two = 0.0, worst_three = 0.0, worst_closed = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto v = random_vertices(3, 3, rng, 0.2);
    const auto c12 = free_geodesic(v.vertex(0), v.vertex(1), 128);
    const auto c23 = free_geodesic(v.vertex(1), v.vertex(2), 128);
    const double b3 = bargmann_phase(v);
    worst_two = std::max(
        worst_two, angle_distance(phase_composition_defect(c12, c23), -b3));

    const auto v4 = random_vertices(4, 3, rng, 0.2);
    std::vector<SampledCurve> pieces;
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) {
      const auto mid = random_state(3, rng);
      const auto piece = concatenate(free_geodesic(v4.vertex(j), mid, 64),
                                     free_geodesic(mid, v4.vertex(j + 1), 64));
      sum += geometric_phase(piece);
      pieces.push_back(piece);
    }
    const auto chain =
        concatenate(concatenate(pieces[0], pieces[1]), pieces[2]);
    worst_three = std::max(
        worst_three,
        angle_distance(geometric_phase(chain), sum - bargmann_phase(v4)));

    const auto c = random_smooth_curve(3, 201, rng, 0.3);
    std::vector<double> rp;
    std::vector<StateVector> rs;
    for (int k = c.node_count() - 1; k >= 0; --k) {
      rp.push_back(c.param(c.node_count() - 1) - c.param(k));
      rs.push_back(c.state(k));
    }
    const SampledCurve back(rp, rs);
    worst_closed =
        std::max(worst_closed, std::abs(phase_composition_defect(c, back)));
  }
  add_row(cr, "two-piece defect vs -B_3", 0.0, worst_two, 1e-6);
  add_row(cr, "three-piece chain vs sum - B_4", 0.0, worst_three, 1e-6);
  add_row(cr, "closed two-piece loops are exactly additive", 0.0, worst_closed,
          1e-8);
  return cr;
}

// --- criterion 9 -----------------------------------------------------------

CriterionResult criterion_equivalence(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "separability and three-point reality agree everywhere";
  Rng rng(seed * 1033 + 9);

  struct Entry {
    SampledCurve curve;
    bool expected_pass;
  };
  std::vector<Entry> catalogue;

  const CoherentChart coherent(64);
  PathSpec cl = line_path(CoherentChart::xi_of({0.1, -0.2}),
                          CoherentChart::xi_of({1.0, 0.7}));
  catalogue.push_back({chart_curve(coherent, cl, 25), true});
  PathSpec circ;
  circ.s1 = 2.0;
  circ.xi = [](double s) { return CoherentChart::xi_of(std::polar(1.0, s)); };
  catalogue.push_back({chart_curve(coherent, circ, 25), false});

  const GaussianChart gaussian;
  catalogue.push_back(
      {chart_curve(gaussian, gaussian_vertical_path(0.3, 0.8, 2.5), 25),
       true});
  catalogue.push_back(
      {chart_curve(gaussian,
                   gaussian_semicircle_path(0.0, std::numbers::sqrt2, pi / 4,
                                            3 * pi / 4),
                   25),
       true});

  const TwoModeSphereChart sphere(32);
  catalogue.push_back(
      {chart_curve(sphere,
                   great_circle_path({1, 0, 0}, {0, 0.6, 0.8}, 0.0, 1.3), 25),
       false});
  catalogue.push_back(
      {chart_curve(sphere, great_circle_path({0, 0, 1}, {1, 0, 0}, 0.2, 1.4),
                   25),
       true});
  catalogue.push_back(
      {chart_curve(
           sphere,
           sphere_latitude_path(Eigen::Vector3d(0.8, 0.36, 0.48).normalized(),
                                Eigen::Vector3d(0.1, 0.7, 0.707).normalized()),
           25),
       true});

  const RealSphereChart realsphere(3);
  PathSpec shortarc;
  shortarc.xi = [&](double t) { return xi2(0.7 + 0.5 * t, 0.5 + 0.4 * t); };
  catalogue.push_back({chart_curve(realsphere, shortarc, 25), true});
  PathSpec farc;
  farc.xi = [&](double t) { return xi2(0.4 + 2.2 * t, 0.3 + 2.6 * t); };
  catalogue.push_back({chart_curve(realsphere, farc, 25), false});

  Rng rng2(seed * 7 + 5);
  {
    const auto [a1, b1] = random_nonorthogonal_pair(2, rng2, 0.2);
    catalogue.push_back({free_geodesic(a1, b1, 25), true});
    const auto [a2, b2] = random_nonorthogonal_pair(5, rng2, 0.2);
    catalogue.push_back({free_geodesic(a2, b2, 25), true});
  }
  catalogue.push_back({bloch_latitude_curve(pi / 3, 0.0, 2.0, 25), false});
  catalogue.push_back({bloch_latitude_curve(pi / 2, 0.0, 2.0, 25), true});

  int agree = 0, correct = 0;
  for (const auto& e : catalogue) {
    const bool s = separability_test(e.curve).pass;
    const bool r = bargmann_reality_test(e.curve).pass;
    agree += (s == r);
    correct += (s == e.expected_pass) && (r == e.expected_pass);
  }
  add_row(cr, "catalogue agreement count",
          static_cast<double>(catalogue.size()), agree, 0.5);
  add_row(cr, "catalogue expected-verdict count",
          static_cast<double>(catalogue.size()), correct, 0.5);

  int random_agree = 0;
  int total = 0;
  while (total < 200) {
    const auto c = random_smooth_curve(2, 24, rng, 0.45);
    try {
      const bool s = separability_test(c).pass;
      const bool r = bargmann_reality_test(c).pass;
      ++total;
      random_agree += (s == r);
    } catch (const OrthogonalStatesError&) {
      // resample curves that graze an orthogonal pair
    }
  }
  add_row(cr, "agreement on 200 random qubit curves", 200.0, random_agree,
          0.5);
  return cr;
}

// --- criterion 10 ----------------------------------------------------------

CriterionResult criterion_symplectic(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "Darboux data: area = loop phase, one-form = dynamical phase, "
             "metric spectrum";
  Rng rng(seed * 1039 + 10);
  const DarbouxChart dc(random_state(2, rng));

  // coordinate circle oriented like the standard latitude traversal
  const double r = 0.8;
  CoordinatePath loop;
  const int n = 1000;
  for (int k = 0; k <= n; ++k) {
    const double t = 2 * pi * k / n;
    DarbouxChart::Coords c;
    c.alpha = 0.0;
    c.beta = RVector::Zero(1);
    c.gamma = RVector::Zero(1);
    c.beta(0) = r * std::cos(t);
    c.gamma(0) = -r * std::sin(t);
    loop.t.push_back(t);
    loop.points.push_back(std::move(c));
  }
  const double area = symplectic_area(loop);

  auto coords = [&dc, r](double t) {
    DarbouxChart::Coords c;
    c.alpha = 0.0;
    c.beta = RVector::Zero(1);
    c.gamma = RVector::Zero(1);
    c.beta(0) = r * std::cos(t);
    c.gamma(0) = -r * std::sin(t);
    return c;
  };
  auto rates = [r](double t) {
    RVector db(1), dg(1);
    db(0) = -r * std::sin(t);
    dg(0) = -r * std::cos(t);
    return std::tuple{0.0, db, dg};
  };
  const auto curve =
      realize_coordinate_curve(dc, coords, rates, 0.0, 2 * pi, 1001);
  add_row(cr, "loop phase vs symplectic area at 1e3 nodes", area,
          geometric_phase(curve), 1e-4, true);

  const auto equator = bloch_latitude_curve(pi / 2, 0.0, 2 * pi, 2001);
  add_row(cr, "equator loop phase", -pi, geometric_phase(equator), 1e-6,
          true);

  std::uniform_real_distribution<double> u(-0.55, 0.55);
  double worst_spec = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    RVector eta(6);
    for (int j = 0; j < 6; ++j) eta(j) = u(rng);
    const double e2 = eta.squaredNorm();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(local_metric_matrix(eta));
    std::vector<double> expect{1 - 0.5 * e2, 1, 1, 1, 1, 1 / (1 - 0.5 * e2)};
    std::sort(expect.begin(), expect.end());
    for (int j = 0; j < 6; ++j) {
      worst_spec =
          std::max(worst_spec, std::abs(es.eigenvalues()(j) - expect[j]));
    }
  }
  add_row(cr, "g(eta) spectrum at 50 random eta", 0.0, worst_spec, 1e-10);

  // oint A against the quadrature dynamical phase on a generic path
  const DarbouxChart dc3(random_state(3, rng));
  auto coords3 = [&](double t) {
    DarbouxChart::Coords c;
    c.alpha = 0.15 * t;
    c.beta = RVector(2);
    c.gamma = RVector(2);
    c.beta << 0.5 * std::cos(t), 0.3 * std::sin(2 * t);
    c.gamma << -0.5 * std::sin(t), 0.1 + 0.2 * std::cos(t);
    return c;
  };
  auto rates3 = [](double t) {
    RVector db(2), dg(2);
    db << -0.5 * std::sin(t), 0.6 * std::cos(2 * t);
    dg << -0.5 * std::cos(t), -0.2 * std::sin(t);
    return std::tuple{0.15, db, dg};
  };
  const auto path_curve =
      realize_coordinate_curve(dc3, coords3, rates3, 0.0, 2.0, 4001);
  CoordinatePath path;
  for (int k = 0; k <= 4000; ++k) {
    path.t.push_back(2.0 * k / 4000);
    path.points.push_back(coords3(path.t.back()));
  }
  add_row(cr, "oint A vs dynamical phase", dynamical_phase(path_curve),
          integral_A(path), 1e-6);
  return cr;
}

// --- criterion 11 ----------------------------------------------------------

CriterionResult criterion_isotropic(std::uint64_t seed) {
  CriterionResult cr;
  cr.title = "isotropic chart: phases depend on the endpoints alone";
  const RealSphereChart chart(3);
  Rng rng(seed * 1049 + 11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double worst_pair = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    // keep every sample safely inside the (0, pi) polar strip
    const double a0 = 1.5 + 0.4 * u(rng), b0 = 0.8 + 0.4 * u(rng);
    const double a1 = a0 + 0.4 * u(rng), b1 = b0 + 0.7 * u(rng);
    const double w1 = 0.25 * u(rng), w2 = 0.25 * u(rng);
    PathSpec p1, p2;
    p1.xi = [=](double t) {
      return xi2(a0 + (a1 - a0) * t + w1 * std::sin(pi * t),
                 b0 + (b1 - b0) * t - w1 * std::sin(2 * pi * t));
    };
    p2.xi = [=](double t) {
      return xi2(a0 + (a1 - a0) * t - w2 * std::sin(2 * pi * t),
                 b0 + (b1 - b0) * t + w2 * std::sin(pi * t));
    };
    const double g1 = geometric_phase(chart_curve(chart, p1, 401));
    const double g2 = geometric_phase(chart_curve(chart, p2, 401));
    worst_pair = std::max(worst_pair, angle_distance(g1, g2));
  }
  add_row(cr, "max |phase difference| over 20 shared-endpoint pairs", 0.0,
          worst_pair, 1e-8);

  double worst_loop = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double c0 = 1.2 + 0.3 * u(rng), c1 = 1.0 + 0.3 * u(rng);
    const double r1 = 0.25 + 0.15 * u(rng), r2 = 0.25 + 0.15 * u(rng);
    PathSpec loop;
    loop.xi = [=](double t) {
      return xi2(c0 + r1 * std::cos(2 * pi * t) + 0.1 * std::sin(4 * pi * t),
                 c1 + r2 * std::sin(2 * pi * t));
    };
    worst_loop = std::max(
        worst_loop, std::abs(geometric_phase(chart_curve(chart, loop, 401))));
  }
  add_row(cr, "max |phase| over 20 closed curves", 0.0, worst_loop, 1e-8);
  return cr;
}

// --- criterion 12 ----------------------------------------------------------

CriterionResult criterion_conservation(std::uint64_t) {
  CriterionResult cr;
  cr.title = "affine geodesics conserve their speed at fourth order";
  const CoherentChart coherent(64);
  const GaussianChart gaussian;
  const TwoModeSphereChart sphere(32);

  double worst = 0.0;
  worst = std::max(worst, geodesic_shoot(coherent, xi2(0.1, -0.3),
                                         xi2(0.9, 0.4), 2.0, 1000)
                              .speed_drift());
  worst = std::max(worst, geodesic_shoot(gaussian, xi2(0.0, 1.0),
                                         xi2(0.0, 0.8), 1.5, 1000)
                              .speed_drift());
  worst = std::max(worst, geodesic_shoot(gaussian, xi2(0.0, 1.0),
                                         xi2(1.0, 0.4), 1.2, 1000)
                              .speed_drift());
  worst = std::max(worst, geodesic_shoot(sphere, xi2(pi / 2, 0.0),
                                         xi2(0.6, 0.8), 1.5, 1000)
                              .speed_drift());
  add_row(cr, "max relative speed drift at 1e3 steps", 0.0, worst, 1e-8);

  const double coarse =
      geodesic_shoot(gaussian, xi2(0.0, 1.0), xi2(1.0, 0.4), 1.2, 64)
          .speed_drift();
  const double fine =
      geodesic_shoot(gaussian, xi2(0.0, 1.0), xi2(1.0, 0.4), 1.2, 128)
          .speed_drift();
  CheckRow row;
  row.name = "drift ratio under step halving (expect ~16)";
  row.expected = 16.0;
  row.computed = coarse / fine;
  row.tolerance = 12.0;
  row.pass = coarse / fine > 6.0 && coarse / fine < 40.0;
  cr.rows.push_back(row);
  return cr;
}

struct Registered {
  int id;
  const char* tag;
  CriterionResult (*fn)(std::uint64_t);
};

constexpr Registered kCriteria[] = {
    {1, "free-geodesic-null-phase", criterion_free_geodesic},
    {2, "polygon-bargmann", criterion_polygon},
    {3, "generalized-connection", criterion_generalized_connection},
    {4, "coherent-chart", criterion_coherent_chart},
    {5, "gaussian-chart", criterion_gaussian_chart},
    {6, "two-mode-sphere", criterion_two_mode_sphere},
    {7, "delta-decomposition", criterion_decomposition},
    {8, "additivity-defects", criterion_additivity},
    {9, "criterion-equivalence", criterion_equivalence},
    {10, "symplectic-consistency", criterion_symplectic},
    {11, "isotropic-endpoints", criterion_isotropic},
    {12, "conservation", criterion_conservation},
};

}  // namespace

int criterion_count() { return static_cast<int>(std::size(kCriteria)); }

CriterionResult run_criterion(int id, std::uint64_t seed) {
  for (const auto& reg : kCriteria) {
    if (reg.id != id) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult out = reg.fn(seed);
    out.id = reg.id;
    out.tag = reg.tag;
    out.pass = std::all_of(out.rows.begin(), out.rows.end(),
                           [](const CheckRow& r) { return r.pass; });
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
  }
  throw std::invalid_argument("unknown acceptance criterion id " +
                              std::to_string(id));
}

std::vector<CriterionResult> run_all(const std::string& filter,
                                     std::uint64_t seed, int jobs) {
  std::vector<int> ids;
  for (const auto& reg : kCriteria) {
    const std::string tag = reg.tag;
    if (filter.empty() || tag.find(filter) != std::string::npos ||
        std::to_string(reg.id) == filter) {
      ids.push_back(reg.id);
    }
  }
  std::vector<CriterionResult> results(ids.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      results[i] = run_criterion(ids[i], seed);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  const int count = std::min<int>(jobs, static_cast<int>(ids.size()));
  for (int w = 0; w < count; ++w) {
    workers.push_back(std::async(std::launch::async, [&]() {
      for (std::size_t i = next.fetch_add(1); i < ids.size();
           i = next.fetch_add(1)) {
        results[i] = run_criterion(ids[i], seed);
      }
    }));
  }
  for (auto& w : workers) w.get();
  return results;
}

std::string format_table(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  char buf[256];
  for (const auto& cr : results) {
    std::snprintf(buf, sizeof(buf), "criterion %2d [%s] %s\n", cr.id,
                  cr.pass ? "PASS" : "FAIL", cr.title.c_str());
    os << buf;
    for (const auto& row : cr.rows) {
      std::snprintf(buf, sizeof(buf),
                    "    %-52s expected % .9e  computed % .9e  tol %.1e  %s\n",
                    row.name.c_str(), row.expected, row.computed,
                    row.tolerance, row.pass ? "ok" : "FAIL");
      os << buf;
    }
  }
  const int passed = static_cast<int>(
      std::count_if(results.begin(), results.end(),
                    [](const CriterionResult& r) { return r.pass; }));
  os << passed << "/" << results.size() << " criteria passed\n";
  return os.str();
}

std::string results_to_json(const std::vector<CriterionResult>& results,
                            std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["schema"] = "rayphase.acceptance/1";
  j["seed"] = seed;
  j["criteria"] = nlohmann::ordered_json::array();
  for (const auto& cr : results) {
    nlohmann::ordered_json cj;
    cj["id"] = cr.id;
    cj["tag"] = cr.tag;
    cj["title"] = cr.title;
    cj["pass"] = cr.pass;
    cj["checks"] = nlohmann::ordered_json::array();
    for (const auto& row : cr.rows) {
      cj["checks"].push_back({{"name", row.name},
                              {"expected", row.expected},
                              {"computed", row.computed},
                              {"tolerance", row.tolerance},
                              {"pass", row.pass}});
    }
    j["criteria"].push_back(std::move(cj));
  }
  j["all_pass"] = all_pass(results);
  return j.dump(2);
}

bool all_pass(const std::vector<CriterionResult>& results) {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

}  // namespace rayphase::acceptance
