// Command-line front end: phase and invariant evaluation, geodesic solving,
// null-phase certification, symplectic checks, case reproduction, and the
// acceptance suite. Inputs are file paths or inline JSON; outputs go to
// stdout or --out. Exit codes: 0 success, 1 computational failure, 2 usage
// error.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rayphase/acceptance.hpp"
#include "rayphase/bargmann.hpp"
#include "rayphase/cases.hpp"
#include "rayphase/chart.hpp"
#include "rayphase/darboux.hpp"
#include "rayphase/geodesic.hpp"
#include "rayphase/json_io.hpp"
#include "rayphase/nullphase.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace rayphase;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open output file " + out_path);
  os << text << "\n";
}

RVector rvector_of(const json& j) {
  RVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

Eigen::Vector3d vec3_of(const json& j) {
  if (j.size() != 3) throw UsageError("expected a 3-vector");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

// Path specs accepted by chart-based subcommands:
//   {"kind":"line","from":[..],"to":[..]}
//   {"kind":"nullphase","from":[..],"to":[..]}    catalogued connector
//   {"kind":"circle","center":[..],"radius":r,"s0":a,"s1":b}
//   {"kind":"vertical","xi1":v,"from":a,"to":b}   gaussian
//   {"kind":"semicircle","center":c,"radius":R,"s0":a,"s1":b}
//   {"kind":"greatcircle","a":[3],"b":[3],"s0":a,"s1":b}
//   {"kind":"latitude","from":[3],"to":[3]}
PathSpec parse_path(const Chart& chart, const std::string& text) {
  const json full = json::parse(text);
  const std::string kind = full.at("kind").get<std::string>();
  const json j = full.contains("params") ? full.at("params") : full;
  if (kind == "line") {
    return line_path(rvector_of(j.at("from")), rvector_of(j.at("to")));
  }
  if (kind == "nullphase") {
    return null_phase_family(chart, rvector_of(j.at("from")),
                             rvector_of(j.at("to")));
  }
  if (kind == "circle") {
    const RVector c = rvector_of(j.at("center"));
    const double r = j.at("radius").get<double>();
    PathSpec p;
    p.kind = "circle";
    p.s0 = j.value("s0", 0.0);
    p.s1 = j.value("s1", 2 * std::numbers::pi);
    p.xi = [c, r](double s) {
      RVector xi = c;
      xi(0) += r * std::cos(s);
      xi(1) += r * std::sin(s);
      return xi;
    };
    p.dxi = [r](double s) {
      RVector v(2);
      v << -r * std::sin(s), r * std::cos(s);
      return v;
    };
    return p;
  }
  if (kind == "vertical") {
    return gaussian_vertical_path(j.at("xi1").get<double>(),
                                  j.at("from").get<double>(),
                                  j.at("to").get<double>());
  }
  if (kind == "semicircle") {
    return gaussian_semicircle_path(
        j.at("center").get<double>(), j.at("radius").get<double>(),
        j.at("s0").get<double>(), j.at("s1").get<double>());
  }
  if (kind == "greatcircle") {
    return great_circle_path(vec3_of(j.at("a")), vec3_of(j.at("b")),
                             j.value("s0", 0.0), j.value("s1", 1.0));
  }
  if (kind == "latitude") {
    return sphere_latitude_path(vec3_of(j.at("from")), vec3_of(j.at("to")));
  }
  throw UsageError("unknown path kind '" + kind + "'");
}

void write_csv_file(const std::string& path,
                    const std::function<void(std::ostream&)>& writer) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open CSV file " + path);
  writer(os);
}

int run_app(int argc, char** argv) {
  CLI::App app{
      "phases, invariants, geodesics, and null-phase certificates on "
      "quantum ray space"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "write the report here instead of stdout")
      ->capture_default_str();

  // ---- phase ----
  auto* phase_cmd = app.add_subcommand(
      "phase", "total, dynamical, and geometric phase of a sampled curve");
  std::string phase_curve, phase_csv;
  phase_cmd->add_option("curve", phase_curve,
                        "curve JSON (inline or file): "
                        "{\"params\": [...], \"states\": [...]}")
      ->required();
  phase_cmd->add_option("--csv", phase_csv,
                        "write the running phase table (s,total,dynamical,"
                        "geometric) to this CSV file");

  // ---- bargmann ----
  auto* barg_cmd = app.add_subcommand(
      "bargmann", "cyclic overlap invariant of a vertex list");
  std::string barg_vertices;
  barg_cmd->add_option("vertices", barg_vertices,
                       "vertex list JSON: {\"states\": [...]} or bare array")
      ->required();

  // ---- polygon ----
  auto* poly_cmd = app.add_subcommand(
      "polygon",
      "close the vertex polygon with null-phase sides and compare the loop "
      "phase with minus the invariant phase");
  std::string poly_vertices, poly_chart, poly_points, poly_connector = "free";
  int poly_nodes = 512;
  bool poly_refine = false;
  poly_cmd->add_option("--vertices", poly_vertices,
                       "vertex states JSON (free-geodesic sides)");
  poly_cmd->add_option("--chart", poly_chart,
                       "chart id (coherent|gaussian|sphere2mode|realsphere)");
  poly_cmd->add_option("--points", poly_points,
                       "JSON array of chart parameter points");
  poly_cmd->add_option("--connector", poly_connector,
                       "side family: free | catalog")
      ->capture_default_str();
  poly_cmd->add_option("--nodes", poly_nodes, "nodes per side")
      ->capture_default_str();
  poly_cmd->add_flag("--refine", poly_refine,
                     "double nodes until the defect stabilizes");

  // ---- geodesic ----
  auto* geo_cmd = app.add_subcommand("geodesic",
                                     "constrained geodesics on a chart");
  geo_cmd->require_subcommand(1);
  auto* shoot_cmd = geo_cmd->add_subcommand("shoot", "initial value problem");
  std::string shoot_chart, shoot_xi0, shoot_v0, shoot_csv;
  double shoot_smax = 1.0;
  int shoot_steps = 1000;
  shoot_cmd->add_option("--chart", shoot_chart, "chart id")->required();
  shoot_cmd->add_option("--xi0", shoot_xi0, "initial point JSON array")
      ->required();
  shoot_cmd->add_option("--v0", shoot_v0, "initial velocity JSON array")
      ->required();
  shoot_cmd->add_option("--smax", shoot_smax, "parameter range")
      ->capture_default_str();
  shoot_cmd->add_option("--steps", shoot_steps, "integration steps")
      ->capture_default_str();
  shoot_cmd->add_option("--csv", shoot_csv,
                        "write s,xi...,xi_dot...,conserved_speed here");

  auto* connect_cmd =
      geo_cmd->add_subcommand("connect", "two-point boundary problem");
  std::string conn_chart, conn_from, conn_to, conn_csv;
  int conn_steps = 512;
  connect_cmd->add_option("--chart", conn_chart, "chart id")->required();
  connect_cmd->add_option("--from", conn_from, "start point JSON array")
      ->required();
  connect_cmd->add_option("--to", conn_to, "end point JSON array")->required();
  connect_cmd->add_option("--steps", conn_steps, "integration steps")
      ->capture_default_str();
  connect_cmd->add_option("--csv", conn_csv, "write the solution table here");

  // ---- nullphase ----
  auto* null_cmd = app.add_subcommand("nullphase",
                                      "null-phase curve certificates");
  auto* check_cmd = null_cmd->add_subcommand(
      "check", "separability + three-point reality of a curve");
  std::string check_curve, check_chart, check_path;
  int check_nodes = 33;
  double tol_sep = -1.0, tol_im = -1.0;
  check_cmd->add_option("--curve", check_curve, "curve JSON (inline or file)");
  check_cmd->add_option("--chart", check_chart, "chart id for --path");
  check_cmd->add_option("--path", check_path, "path spec JSON (see docs)");
  check_cmd->add_option("--nodes", check_nodes, "sample nodes for --path")
      ->capture_default_str();
  check_cmd->add_option("--tol-sep", tol_sep,
                        "mixed-partial tolerance (default: adaptive)");
  check_cmd->add_option("--tol-im", tol_im,
                        "triple imaginary-part tolerance (default 1e-8)");

  // ---- symplectic ----
  auto* symp_cmd = app.add_subcommand("symplectic",
                                      "Darboux-coordinate machinery");
  auto* area_cmd = symp_cmd->add_subcommand(
      "area", "symplectic area of a closed coordinate loop");
  std::string area_loop, area_base;
  area_cmd->add_option("--loop", area_loop,
                       "coordinate path JSON: {\"beta\": [[..]..], "
                       "\"gamma\": [[..]..], \"alpha\": [..]}")
      ->required();
  area_cmd->add_option("--base", area_base,
                       "base state JSON; adds the reconstructed loop phase");

  auto* coords_cmd = symp_cmd->add_subcommand(
      "coords", "Darboux coordinates of a state about a base ray");
  std::string coords_base, coords_state;
  coords_cmd
      ->add_option("--base", coords_base,
                   "base state JSON, or a full chart "
                   "{\"base\": <state>, \"basis\": {\"re\": [[..]], "
                   "\"im\": [[..]]}}")
      ->required();
  coords_cmd->add_option("--state", coords_state, "state JSON")->required();

  auto* iso_cmd = symp_cmd->add_subcommand(
      "isotropy", "pulled-back two-form across sample points");
  std::string iso_chart, iso_samples;
  iso_cmd->add_option("--chart", iso_chart, "chart id")->required();
  iso_cmd->add_option("--samples", iso_samples,
                      "JSON array of parameter points")
      ->required();

  // ---- reproduce ----
  auto* repro_cmd = app.add_subcommand(
      "reproduce", "run a registered analytic scenario end to end");
  std::string repro_case;
  bool repro_list = false, repro_describe = false;
  std::uint64_t repro_seed = 42;
  repro_cmd->add_option("case", repro_case, "case id (see --list)");
  repro_cmd->add_flag("--list", repro_list, "list registered cases");
  repro_cmd->add_flag("--describe", repro_describe,
                      "print what the case computes and expects");
  repro_cmd->add_option("--seed", repro_seed, "random seed where applicable")
      ->capture_default_str();

  // ---- acceptance ----
  auto* acc_cmd = app.add_subcommand(
      "acceptance", "run the acceptance catalogue and print the table");
  std::string acc_filter;
  std::uint64_t acc_seed = 42;
  int acc_jobs = 1;
  bool acc_json = false;
  acc_cmd->add_option("--filter", acc_filter, "substring filter on tags");
  acc_cmd->add_option("--seed", acc_seed, "seed for randomized checks")
      ->capture_default_str();
  acc_cmd->add_option("--jobs", acc_jobs, "concurrent criteria")
      ->capture_default_str();
  acc_cmd->add_flag("--json", acc_json, "emit JSON instead of the table");

  CLI11_PARSE(app, argc, argv);

  if (phase_cmd->parsed()) {
    const auto curve = curve_from_json(read_json_argument(phase_curve));
    ordered_json j;
    j["schema"] = "rayphase.phase/1";
    j["total"] = total_phase(curve);
    j["dynamical"] = dynamical_phase(curve);
    j["geometric"] = geometric_phase(curve);
    if (!phase_csv.empty()) {
      write_csv_file(phase_csv, [&](std::ostream& os) {
        write_phase_trace_csv(os, phase_trace(curve));
      });
      j["csv"] = phase_csv;
    }
    emit(j.dump(2), out_path);
    return 0;
  }

  if (barg_cmd->parsed()) {
    const auto v = vertices_from_json(read_json_argument(barg_vertices));
    const Complex d = bargmann_invariant(v);
    ordered_json j;
    j["schema"] = "rayphase.bargmann/1";
    j["n"] = v.size();
    j["delta_re"] = d.real();
    j["delta_im"] = d.imag();
    j["modulus"] = std::abs(d);
    j["phase"] = bargmann_phase(v);
    emit(j.dump(2), out_path);
    return 0;
  }

  if (poly_cmd->parsed()) {
    std::unique_ptr<Chart> chart;
    std::vector<RVector> points;
    std::optional<VertexList> vertices;
    SideBuilder sides;
    if (!poly_vertices.empty()) {
      vertices = vertices_from_json(read_json_argument(poly_vertices));
      sides = free_geodesic_connector();
    } else if (!poly_chart.empty() && !poly_points.empty()) {
      chart = make_chart(poly_chart);
      const json pts = json::parse(read_json_argument(poly_points));
      std::vector<StateVector> states;
      for (const auto& p : pts) {
        points.push_back(rvector_of(p));
        states.push_back(chart->state_at(points.back()));
      }
      vertices = VertexList(std::move(states));
      if (poly_connector == "catalog") {
        const Chart* ch = chart.get();
        auto pts_copy = points;
        sides = [ch, pts_copy](int side, const StateVector&,
                               const StateVector&, int nodes) {
          const auto path = null_phase_family(
              *ch, pts_copy[side],
              pts_copy[(side + 1) % pts_copy.size()]);
          return chart_curve(*ch, path, nodes);
        };
      } else {
        sides = free_geodesic_connector();
      }
    } else {
      throw UsageError(
          "polygon needs --vertices or both --chart and --points");
    }
    const auto pc = poly_refine
                        ? polygon_phase_check_refined(*vertices, sides,
                                                      poly_nodes)
                        : polygon_phase_check(*vertices, sides, poly_nodes);
    ordered_json j;
    j["schema"] = "rayphase.polygon/1";
    j["geometric_phase"] = pc.geometric_phase;
    j["minus_arg_delta"] = pc.minus_bargmann_phase;
    j["defect"] = pc.defect;
    j["nodes_per_side"] = pc.nodes_per_side;
    emit(j.dump(2), out_path);
    return 0;
  }

  if (shoot_cmd->parsed() || connect_cmd->parsed()) {
    const bool shooting = shoot_cmd->parsed();
    const auto chart = make_chart(shooting ? shoot_chart : conn_chart);
    GeodesicSolution sol;
    if (shooting) {
      sol = geodesic_shoot(*chart,
                           rvector_of(json::parse(read_json_argument(shoot_xi0))),
                           rvector_of(json::parse(read_json_argument(shoot_v0))),
                           shoot_smax, shoot_steps);
    } else {
      ShootingOptions opts;
      opts.steps = conn_steps;
      sol = geodesic_connect(
          *chart, rvector_of(json::parse(read_json_argument(conn_from))),
          rvector_of(json::parse(read_json_argument(conn_to))), opts);
    }
    ordered_json j;
    j["schema"] = "rayphase.geodesic/1";
    j["chart"] = chart->id();
    j["length"] = sol.length;
    j["conserved_speed"] = sol.conserved_speed.empty()
                               ? 0.0
                               : sol.conserved_speed.front();
    j["speed_drift"] = sol.speed_drift();
    j["exited_domain"] = sol.exited_domain;
    if (chart->id() == "gaussian" && sol.xi.size() > 4) {
      // classify against the two closed-form families
      double spread = 0.0;
      for (const auto& xi : sol.xi) {
        spread = std::max(spread, std::abs(xi(0) - sol.xi.front()(0)));
      }
      if (spread < 1e-8) {
        j["fit"] = {{"family", "vertical"}, {"xi1", sol.xi.front()(0)}};
      } else {
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
          residual = std::max(residual,
                              std::abs(std::hypot(xi(0) - c, xi(1)) - R));
        }
        j["fit"] = {{"family", "semicircle"},
                    {"center", c},
                    {"radius", R},
                    {"residual", residual}};
      }
    }
    const std::string csv = shooting ? shoot_csv : conn_csv;
    if (!csv.empty()) {
      write_csv_file(csv, [&](std::ostream& os) {
        write_geodesic_csv(os, sol);
      });
      j["csv"] = csv;
    }
    emit(j.dump(2), out_path);
    return 0;
  }

  if (check_cmd->parsed()) {
    std::optional<SampledCurve> curve;
    std::unique_ptr<Chart> chart;
    if (!check_curve.empty()) {
      curve = curve_from_json(read_json_argument(check_curve));
    } else if (!check_chart.empty() && !check_path.empty()) {
      chart = make_chart(check_chart);
      curve = chart_curve(*chart, parse_path(*chart, check_path), check_nodes);
    } else {
      throw UsageError("nullphase check needs --curve or --chart with --path");
    }
    const auto sep = separability_test(*curve, tol_sep);
    const auto reality = bargmann_reality_test(*curve, {}, tol_im);
    NullPhaseReport combined;
    combined.mixed_partial_max = sep.mixed_partial_max;
    combined.bargmann_triple_max_imag = reality.bargmann_triple_max_imag;
    combined.bargmann_triple_min_real = reality.bargmann_triple_min_real;
    combined.pass = sep.pass && reality.pass;
    combined.witness = sep.pass ? reality.witness : sep.witness;
    combined.excluded_rows = sep.excluded_rows;
    emit(null_phase_report_to_json(combined), out_path);
    return 0;
  }

  if (area_cmd->parsed()) {
    const auto loop = coordinate_path_from_json(read_json_argument(area_loop));
    ordered_json j;
    j["schema"] = "rayphase.symplectic.area/1";
    j["area"] = symplectic_area(loop);
    j["oint_A"] = integral_A(loop);
    if (!area_base.empty()) {
      const auto base = state_from_json(read_json_argument(area_base)).state;
      const DarbouxChart dc(base);
      std::vector<double> params;
      std::vector<StateVector> states;
      for (std::size_t k = 0; k < loop.points.size(); ++k) {
        params.push_back(loop.t[k]);
        states.push_back(dc.from_coords(loop.points[k]));
      }
      j["loop_geometric_phase"] =
          geometric_phase(SampledCurve(params, states));
    }
    emit(j.dump(2), out_path);
    return 0;
  }

  if (coords_cmd->parsed()) {
    const std::string base_text = read_json_argument(coords_base);
    const DarbouxChart dc =
        json::parse(base_text).contains("base")
            ? darboux_from_json(base_text)
            : DarbouxChart(state_from_json(base_text).state);
    const auto psi = state_from_json(read_json_argument(coords_state)).state;
    const auto c = dc.to_coords(psi);
    ordered_json j;
    j["schema"] = "rayphase.symplectic.coords/1";
    j["alpha"] = c.alpha;
    j["beta"] = std::vector<double>(c.beta.data(), c.beta.data() + c.beta.size());
    j["gamma"] =
        std::vector<double>(c.gamma.data(), c.gamma.data() + c.gamma.size());
    emit(j.dump(2), out_path);
    return 0;
  }

  if (iso_cmd->parsed()) {
    const auto chart = make_chart(iso_chart);
    const json pts = json::parse(read_json_argument(iso_samples));
    std::vector<RVector> samples;
    for (const auto& p : pts) samples.push_back(rvector_of(p));
    const auto rep = isotropy_report(*chart, samples);
    ordered_json j;
    j["schema"] = "rayphase.symplectic.isotropy/1";
    j["chart"] = chart->id();
    j["isotropic"] = rep.isotropic;
    j["max_entry"] = rep.max_entry;
    emit(j.dump(2), out_path);
    return 0;
  }

  if (repro_cmd->parsed()) {
    if (repro_list) {
      ordered_json j = ordered_json::array();
      for (const auto& info : cases::list_cases()) {
        j.push_back({{"id", info.id}, {"summary", info.summary}});
      }
      emit(j.dump(2), out_path);
      return 0;
    }
    if (repro_case.empty()) {
      throw UsageError("reproduce needs a case id (or --list)");
    }
    const auto& info = cases::describe(repro_case);
    if (repro_describe) {
      ordered_json j;
      j["id"] = info.id;
      j["summary"] = info.summary;
      j["description"] = info.description;
      emit(j.dump(2), out_path);
      return 0;
    }
    const auto result = cases::run_case(repro_case, repro_seed);
    emit(cases::format_report(result) + cases::result_to_json(result),
         out_path);
    return result.pass ? 0 : 1;
  }

  if (acc_cmd->parsed()) {
    const auto results = acceptance::run_all(acc_filter, acc_seed, acc_jobs);
    if (results.empty()) throw UsageError("filter matched no criteria");
    emit(acc_json ? acceptance::results_to_json(results, acc_seed)
                  : acceptance::format_table(results),
         out_path);
    return acceptance::all_pass(results) ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
