#include "rayphase/cases.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "rayphase/bargmann.hpp"
#include "rayphase/chart.hpp"
#include "rayphase/darboux.hpp"
#include "rayphase/geodesic.hpp"
#include "rayphase/nullphase.hpp"
#include "rayphase/sampling.hpp"

namespace rayphase::cases {

namespace {

using std::numbers::pi;

RVector xi2(double a, double b) {
  RVector v(2);
  v << a, b;
  return v;
}

void row(CaseResult& r, const std::string& name, double expected,
         double computed, double tol, bool angle = false) {
  CheckRow c;
  c.name = name;
  c.expected = expected;
  c.computed = computed;
  c.tolerance = tol;
  c.pass = angle ? angle_distance(computed, expected) < tol
                 : std::abs(computed - expected) < tol;
  r.rows.push_back(std::move(c));
}

CaseResult case_coherent_triangle(std::uint64_t) {
  CaseResult r;
  const CoherentChart chart(64);
  std::vector<RVector> xs;
  std::vector<StateVector> vs;
  for (const Complex z : {Complex(0, 0), Complex(1, 0), Complex(0, 1)}) {
    xs.push_back(CoherentChart::xi_of(z));
    vs.push_back(chart.state_at(xs.back()));
  }
  SideBuilder lines = [&](int j, const StateVector&, const StateVector&,
                          int nodes) {
    return chart_curve(chart, line_path(xs[j], xs[(j + 1) % 3]), nodes);
  };
  const auto pc = polygon_phase_check(VertexList(vs), lines, 1025);
  row(r, "loop phase", -1.0, pc.geometric_phase, 1e-6, true);
  row(r, "minus invariant phase", -1.0, pc.minus_bargmann_phase, 1e-12, true);
  row(r, "defect", 0.0, pc.defect, 1e-6);
  return r;
}

CaseResult case_coherent_triangle_free(std::uint64_t) {
  CaseResult r;
  const CoherentChart chart(64);
  std::vector<StateVector> vs;
  for (const Complex z : {Complex(0, 0), Complex(1, 0), Complex(0, 1)}) {
    vs.push_back(chart.state_at(CoherentChart::xi_of(z)));
  }
  const auto pc =
      polygon_phase_check(VertexList(vs), free_geodesic_connector(), 2048);
  row(r, "loop phase with free-geodesic sides", -1.0, pc.geometric_phase,
      1e-5, true);
  row(r, "defect", 0.0, pc.defect, 1e-5);
  return r;
}

CaseResult case_gaussian_type2(std::uint64_t) {
  CaseResult r;
  const GaussianChart chart;
  const auto sol = geodesic_shoot(chart, xi2(0, 1), xi2(1, 0), 1.2, 512);
  // algebraic fit of a circle centered on the xi_1 axis
  RMatrix a(sol.xi.size(), 2);
  RVector b(sol.xi.size());
  for (std::size_t k = 0; k < sol.xi.size(); ++k) {
    a(k, 0) = 2 * sol.xi[k](0);
    a(k, 1) = 1.0;
    b(k) = sol.xi[k].squaredNorm();
  }
  const RVector fit = a.colPivHouseholderQr().solve(b);
  const double c = fit(0), R = std::sqrt(fit(1) + fit(0) * fit(0));
  double residual = 0.0;
  for (const auto& xi : sol.xi) {
    residual = std::max(residual, std::abs(std::hypot(xi(0) - c, xi(1)) - R));
  }
  row(r, "fit center", 0.0, c, 1e-6);
  row(r, "fit radius", 1.0, R, 1e-6);
  row(r, "fit residual", 0.0, residual, 1e-6);
  const double slope =
      analytic_overlap_phase(chart, xi2(c + R * std::cos(1.0), R * std::sin(1.0)),
                             xi2(c + R * std::cos(1.8), R * std::sin(1.8))) /
      (1.0 - 1.8);
  row(r, "overlap phase slope along the arc", 0.25, slope, 1e-9);
  row(r, "speed drift", 0.0, sol.speed_drift(), 1e-8);
  return r;
}

CaseResult case_gaussian_type1(std::uint64_t) {
  CaseResult r;
  const GaussianChart chart;
  const double bpar = 0.8;
  const auto sol = geodesic_shoot(chart, xi2(0.5, 1.0), xi2(0.0, bpar), 1.5,
                                  512);
  double vertical = 0.0, expfit = 0.0;
  for (std::size_t k = 0; k < sol.s.size(); ++k) {
    vertical = std::max(vertical, std::abs(sol.xi[k](0) - 0.5));
    expfit = std::max(expfit,
                      std::abs(sol.xi[k](1) - std::exp(bpar * sol.s[k])));
  }
  row(r, "xi1 stays constant", 0.0, vertical, 1e-7);
  row(r, "xi2 follows e^{bs}", 0.0, expfit, 1e-6);
  row(r, "overlap phase along the ray", 0.0,
      analytic_overlap_phase(chart, xi2(0.5, 1.0), xi2(0.5, 2.2)), 1e-10);
  return r;
}

CaseResult case_gaussian_triangle(std::uint64_t) {
  CaseResult r;
  const GaussianChart chart;
  const std::vector<RVector> verts{xi2(0, 1), xi2(1, 1), xi2(0.5, 2)};
  ShootingOptions opts;
  opts.steps = 256;
  SampledCurve loop =
      geodesic_curve(chart, geodesic_connect(chart, verts[0], verts[1], opts));
  loop = concatenate(loop, geodesic_curve(chart, geodesic_connect(
                                              chart, verts[1], verts[2],
                                              opts)));
  loop = concatenate(loop, geodesic_curve(chart, geodesic_connect(
                                              chart, verts[2], verts[0],
                                              opts)));
  double arg_d3 = 0.0;
  for (int j = 0; j < 3; ++j) {
    arg_d3 += std::arg(*chart.overlap(verts[j], verts[(j + 1) % 3]));
  }
  row(r, "hyperbolic triangle loop phase", wrap_angle(-arg_d3),
      geometric_phase(loop), 1e-5, true);
  return r;
}

CaseResult case_sphere_greatcircle(std::uint64_t) {
  CaseResult r;
  const TwoModeSphereChart chart(32);
  const Eigen::Vector3d a(1, 0, 0), b(0, 0.5, std::sqrt(0.75));
  const auto bad = chart_curve(chart, great_circle_path(a, b, 0.0, 1.6), 29);
  const auto rep = separability_test(bad);
  row(r, "tilted great circle fails (verdict)", 0.0, rep.pass ? 1.0 : 0.0,
      0.5);
  row(r, "mixed partial magnitude vs wedge", 0.5, rep.mixed_partial_max,
      5e-2);
  row(r, "witness reported", 1.0, rep.witness.has_value() ? 1.0 : 0.0, 0.5);

  const auto good = chart_curve(
      chart, great_circle_path({0, 0, 1}, {1, 0, 0}, 0.1, 1.5), 29);
  row(r, "meridian variant passes (verdict)", 1.0,
      separability_test(good).pass ? 1.0 : 0.0, 0.5);
  return r;
}

CaseResult case_bloch_latitude(std::uint64_t) {
  CaseResult r;
  auto loop = [](double theta, int nodes) {
    return sample_curve(
        [theta](double s) {
          CVector v(2);
          v << std::cos(theta / 2), std::polar(std::sin(theta / 2), s);
          return StateVector(std::move(v));
        },
        0.0, 2 * pi, nodes, [theta](double s) {
          CVector v(2);
          v << Complex(0, 0),
              Complex(0, 1) * std::polar(std::sin(theta / 2), s);
          return v;
        });
  };
  row(r, "equator loop phase", -pi, geometric_phase(loop(pi / 2, 2001)), 1e-6,
      true);
  row(r, "theta = pi/3 loop phase", -pi / 2,
      geometric_phase(loop(pi / 3, 2001)), 1e-6, true);
  return r;
}

CaseResult case_free_polygon(std::uint64_t) {
  CaseResult r;
  const double rt = 1 / std::numbers::sqrt2;
  CVector a(2), b(2), c(2);
  a << 1, 0;
  b << rt, rt;
  c << rt, Complex(0, rt);
  const VertexList v({StateVector(a), StateVector(b), StateVector(c)});
  const auto pc = polygon_phase_check(v, free_geodesic_connector(), 1024);
  row(r, "triangle loop phase", -pi / 4, pc.geometric_phase, 1e-6, true);
  row(r, "defect", 0.0, pc.defect, 1e-6);
  return r;
}

CaseResult case_bloch_open_closure(std::uint64_t) {
  CaseResult r;
  const double theta = pi / 3;
  const auto arc = sample_curve(
      [theta](double s) {
        CVector v(2);
        v << std::cos(theta / 2), std::polar(std::sin(theta / 2), s);
        return StateVector(std::move(v));
      },
      0.0, 2.0, 801, [theta](double s) {
        CVector v(2);
        v << Complex(0, 0), Complex(0, 1) * std::polar(std::sin(theta / 2), s);
        return v;
      });
  const auto red = open_to_closed_reduction(arc, 801);
  row(r, "open phase is nonzero", 1.0,
      std::abs(red.phi_open) > 1e-3 ? 1.0 : 0.0, 0.5);
  row(r, "closed loop reproduces the open phase", red.phi_open,
      red.phi_closed, 1e-6, true);
  return r;
}

CaseResult case_darboux_bloch(std::uint64_t seed) {
  CaseResult r;
  Rng rng(seed);
  const DarbouxChart dc(random_state(2, rng));
  const double rad = 0.8;
  CoordinatePath loop;
  const int n = 1000;
  for (int k = 0; k <= n; ++k) {
    const double t = 2 * pi * k / n;
    DarbouxChart::Coords c;
    c.beta = RVector::Zero(1);
    c.gamma = RVector::Zero(1);
    c.beta(0) = rad * std::cos(t);
    c.gamma(0) = -rad * std::sin(t);
    loop.t.push_back(t);
    loop.points.push_back(std::move(c));
  }
  auto coords = [&dc, rad](double t) {
    DarbouxChart::Coords c;
    c.beta = RVector::Zero(1);
    c.gamma = RVector::Zero(1);
    c.beta(0) = rad * std::cos(t);
    c.gamma(0) = -rad * std::sin(t);
    return c;
  };
  auto rates = [rad](double t) {
    RVector db(1), dg(1);
    db(0) = -rad * std::sin(t);
    dg(0) = -rad * std::cos(t);
    return std::tuple{0.0, db, dg};
  };
  const auto curve =
      realize_coordinate_curve(dc, coords, rates, 0.0, 2 * pi, 1001);
  const double area = symplectic_area(loop);
  row(r, "area vs -pi r^2", -pi * rad * rad, area, 1e-2);
  row(r, "loop phase vs area", area, geometric_phase(curve), 1e-4, true);
  return r;
}

CaseResult case_sphere_triangle(std::uint64_t) {
  CaseResult r;
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
    return chart_curve(chart, null_phase_family(chart, xs[j], xs[(j + 1) % 3]),
                       nodes);
  };
  const auto pc = polygon_phase_check(VertexList(vs), latitudes, 801);
  double wedges = 0.0;
  for (int j = 0; j < 3; ++j) {
    const auto& n1 = pts[j];
    const auto& n2 = pts[(j + 1) % 3];
    wedges += n1(0) * n2(1) - n1(1) * n2(0);
  }
  row(r, "loop phase vs minus cyclic wedge sum", wrap_angle(-wedges),
      pc.geometric_phase, 1e-8, true);
  row(r, "defect", 0.0, pc.defect, 1e-8);
  return r;
}

CaseResult case_realsphere_endpoints(std::uint64_t) {
  CaseResult r;
  const RealSphereChart chart(3);
  PathSpec p1, p2;
  p1.xi = [](double t) { return xi2(0.7 + 0.8 * t, 0.5 + 0.9 * t); };
  p2.xi = [](double t) {
    return xi2(0.7 + 0.8 * t + 0.4 * std::sin(pi * t),
               0.5 + 0.9 * t - 0.3 * std::sin(2 * pi * t));
  };
  const double g1 = geometric_phase(chart_curve(chart, p1, 801));
  const double g2 = geometric_phase(chart_curve(chart, p2, 801));
  row(r, "shared endpoints give equal phases", g1, g2, 1e-10, true);

  PathSpec loop;
  loop.xi = [](double t) {
    return xi2(1.1 + 0.4 * std::cos(2 * pi * t),
               0.9 + 0.35 * std::sin(2 * pi * t));
  };
  row(r, "closed curve phase", 0.0,
      geometric_phase(chart_curve(chart, loop, 801)), 1e-10);
  return r;
}

struct Case {
  CaseInfo info;
  CaseResult (*run)(std::uint64_t);
};

const std::vector<Case>& registry() {
  static const std::vector<Case> cases = {
      {{"coherent-triangle",
        "coherent-state triangle with straight-line sides",
        "Closes the triangle of coherent states z in {0, 1, i} with "
        "straight-line segments in the z plane (null phase curves of this "
        "family) and checks the loop geometric phase against minus the "
        "three-vertex invariant phase: phi_g = -Im(conj(z1) z2 + conj(z2) z3 "
        "+ conj(z3) z1) = -1 rad, twice the signed triangle area."},
       case_coherent_triangle},
      {{"coherent-triangle-free",
        "same triangle closed by free geodesics in truncated Fock space",
        "Connects the same three coherent states by free geodesics of the "
        "full ray space (dimension 64 truncation). The loop phase depends on "
        "the vertices alone, so it must equal the straight-line result -1 "
        "rad within discretization error."},
       case_coherent_triangle_free},
      {{"gaussian-type2",
        "horizontally launched Gaussian geodesic is a semicircle",
        "Shoots the constrained geodesic of centered Gaussian states from "
        "(xi1, xi2) = (0, 1) with horizontal initial velocity. The "
        "trajectory must fit a semicircle centered on the xi1 axis (center "
        "0, radius 1, residual < 1e-6) and the overlap phase along the arc "
        "must be (s - s')/4 in the angle parameter."},
       case_gaussian_type2},
      {{"gaussian-type1",
        "vertically launched Gaussian geodesic is an exponential ray",
        "Shoots from (0.5, 1) straight up: xi1 stays constant and xi2 "
        "follows a e^{bs}; overlaps along the ray are real positive so the "
        "phase vanishes."},
       case_gaussian_type1},
      {{"gaussian-triangle",
        "hyperbolic triangle of Gaussian states",
        "Connects (0,1), (1,1), (0.5,2) pairwise by constrained geodesics of "
        "the Lobachevsky half-plane metric and checks the loop geometric "
        "phase against minus the phase of the cyclic overlap product of the "
        "three vertex states."},
       case_gaussian_triangle},
      {{"sphere-greatcircle",
        "two-mode great circles: separable only through meridians",
        "A great circle of the two-mode sphere with axis wedge (a x b)_3 = "
        "0.5 fails the separability certificate with mixed-partial magnitude "
        "0.5 and a witness pair; the meridian variant ((a x b)_3 = 0) "
        "passes."},
       case_sphere_greatcircle},
      {{"bloch-latitude",
        "Bloch latitude loops",
        "Full latitude loops of the qubit family (cos(theta/2), e^{is} "
        "sin(theta/2)): the loop geometric phase is -2 pi sin^2(theta/2), "
        "i.e. -pi at theta = pi/2 and -pi/2 at theta = pi/3."},
       case_bloch_latitude},
      {{"free-geodesic-polygon",
        "qubit triangle bounded by free geodesics",
        "The qubit triple (1,0), (1,1)/sqrt2, (1,i)/sqrt2 has cyclic overlap "
        "product (1+i)/4; the free-geodesic triangle loop phase equals minus "
        "its phase, -pi/4."},
       case_free_polygon},
      {{"bloch-open-closure",
        "open arc phase via a null-phase closure",
        "An open non-geodesic latitude arc is closed by the free geodesic "
        "between its end rays; the closed loop geometric phase equals the "
        "open arc phase because the return leg contributes none."},
       case_bloch_open_closure},
      {{"darboux-bloch",
        "coordinate-circle loop: area equals loop phase",
        "A circle of radius r in one Darboux coordinate pair encloses "
        "symplectic area -pi r^2 (standard latitude orientation); the "
        "reconstructed state loop has the same geometric phase."},
       case_darboux_bloch},
      {{"sphere-triangle",
        "two-mode sphere triangle bounded by latitude arcs",
        "Joins three directions on the two-mode sphere by latitude arcs "
        "about axes in the 1-2 plane (the null phase curves of this family; "
        "great circles generally are not). The loop geometric phase equals "
        "minus the cyclic wedge sum n_j x n_{j+1} projected on the third "
        "axis, which is the phase of the cyclic overlap product."},
       case_sphere_triangle},
      {{"realsphere-endpoints",
        "real chart: phases depend on endpoints only",
        "On the real sphere chart (isotropic: the pulled-back two-form "
        "vanishes) two curves sharing endpoints have equal geometric phase "
        "and closed curves have phase zero."},
       case_realsphere_endpoints},
  };
  return cases;
}

}  // namespace

std::vector<CaseInfo> list_cases() {
  std::vector<CaseInfo> out;
  for (const auto& c : registry()) out.push_back(c.info);
  return out;
}

const CaseInfo& describe(const std::string& id) {
  for (const auto& c : registry()) {
    if (c.info.id == id) return c.info;
  }
  throw std::invalid_argument("unknown case '" + id + "'");
}

CaseResult run_case(const std::string& id, std::uint64_t seed) {
  for (const auto& c : registry()) {
    if (c.info.id != id) continue;
    CaseResult r = c.run(seed);
    r.id = id;
    r.pass = std::all_of(r.rows.begin(), r.rows.end(),
                         [](const CheckRow& row) { return row.pass; });
    return r;
  }
  throw std::invalid_argument("unknown case '" + id + "'");
}

std::string result_to_json(const CaseResult& r) {
  nlohmann::ordered_json j;
  j["schema"] = "rayphase.case/1";
  j["case"] = r.id;
  j["pass"] = r.pass;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    j["checks"].push_back({{"name", row.name},
                           {"expected", row.expected},
                           {"computed", row.computed},
                           {"tolerance", row.tolerance},
                           {"pass", row.pass}});
  }
  return j.dump(2);
}

std::string format_report(const CaseResult& r) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "case %s [%s]\n", r.id.c_str(),
                r.pass ? "PASS" : "FAIL");
  os << buf;
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof(buf),
                  "    %-46s expected % .9e  computed % .9e  tol %.1e  %s\n",
                  row.name.c_str(), row.expected, row.computed, row.tolerance,
                  row.pass ? "ok" : "FAIL");
    os << buf;
  }
  return os.str();
}

}  // namespace rayphase::cases
