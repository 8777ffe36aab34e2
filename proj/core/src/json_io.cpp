#include "rayphase/json_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace rayphase {

using nlohmann::json;

namespace {

CVector amplitudes_from(const json& j) {
  if (!j.contains("re") || !j.contains("im")) {
    throw std::invalid_argument("state JSON: need \"re\" and \"im\" arrays");
  }
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size()) {
    throw std::invalid_argument("state JSON: re/im length mismatch");
  }
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != re.size()) {
    throw std::invalid_argument("state JSON: dim does not match arrays");
  }
  CVector v(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    v(i) = Complex(re.at(i).get<double>(), im.at(i).get<double>());
  }
  return v;
}

json state_json(const StateVector& s) {
  json j;
  j["dim"] = s.dim();
  std::vector<double> re(s.dim()), im(s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    re[i] = s[i].real();
    im[i] = s[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

RVector rvector_from(const json& j) {
  RVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

}  // namespace

LoadedState state_from_json(const std::string& text) {
  const json j = json::parse(text);
  StateVector s{amplitudes_from(j)};
  return {s, s.normalization_factor()};
}

std::string state_to_json(const StateVector& s) {
  return state_json(s).dump();
}

SampledCurve curve_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.contains("params") || !j.contains("states")) {
    throw std::invalid_argument(
        "curve JSON: need \"params\" and \"states\" arrays");
  }
  std::vector<double> params = j.at("params").get<std::vector<double>>();
  std::vector<StateVector> states;
  states.reserve(j.at("states").size());
  for (const auto& sj : j.at("states")) {
    states.emplace_back(amplitudes_from(sj));
  }
  return SampledCurve(std::move(params), std::move(states));
}

std::string curve_to_json(const SampledCurve& c) {
  json j;
  j["params"] = c.params();
  json states = json::array();
  for (const auto& s : c.states()) states.push_back(state_json(s));
  j["states"] = std::move(states);
  return j.dump();
}

VertexList vertices_from_json(const std::string& text) {
  const json j = json::parse(text);
  const json& arr = j.is_array() ? j : j.at("states");
  std::vector<StateVector> states;
  states.reserve(arr.size());
  for (const auto& sj : arr) states.emplace_back(amplitudes_from(sj));
  return VertexList(std::move(states));
}

DarbouxChart darboux_from_json(const std::string& text) {
  const json j = json::parse(text);
  StateVector base{amplitudes_from(j.at("base"))};
  if (!j.contains("basis")) return DarbouxChart(std::move(base));
  const auto& re = j.at("basis").at("re");
  const auto& im = j.at("basis").at("im");
  const int rows = static_cast<int>(re.size());
  const int cols = rows ? static_cast<int>(re.at(0).size()) : 0;
  CMatrix basis(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      basis(r, c) = Complex(re.at(r).at(c).get<double>(),
                            im.at(r).at(c).get<double>());
    }
  }
  return DarbouxChart(std::move(base), std::move(basis));
}

CoordinatePath coordinate_path_from_json(const std::string& text) {
  const json j = json::parse(text);
  CoordinatePath path;
  const auto& beta = j.at("beta");
  const auto& gamma = j.at("gamma");
  if (beta.size() != gamma.size()) {
    throw std::invalid_argument("path JSON: beta/gamma length mismatch");
  }
  const std::size_t n = beta.size();
  path.t.resize(n);
  if (j.contains("t")) {
    path.t = j.at("t").get<std::vector<double>>();
    if (path.t.size() != n) {
      throw std::invalid_argument("path JSON: t length mismatch");
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) path.t[i] = static_cast<double>(i);
  }
  path.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    path.points[i].beta = rvector_from(beta.at(i));
    path.points[i].gamma = rvector_from(gamma.at(i));
    path.points[i].alpha =
        j.contains("alpha") ? j.at("alpha").at(i).get<double>() : 0.0;
  }
  return path;
}

std::string null_phase_report_to_json(const NullPhaseReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "rayphase.nullphase.report/1";
  j["mixed_partial_max"] = r.mixed_partial_max;
  j["bargmann_triple_max_imag"] = r.bargmann_triple_max_imag;
  j["bargmann_triple_min_real"] = r.bargmann_triple_min_real;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["excluded_rows"] = r.excluded_rows;
  if (r.witness) {
    const auto& [s, sp, spp] = *r.witness;
    j["witness"] = {s, sp, spp};
  } else {
    j["witness"] = nullptr;
  }
  return j.dump(2);
}

void write_phase_trace_csv(std::ostream& os, const PhaseTrace& tr) {
  os << "s,total,dynamical,geometric\n";
  char buf[160];
  for (std::size_t k = 0; k < tr.s.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", tr.s[k],
                  tr.total[k], tr.dynamical[k], tr.geometric[k]);
    os << buf;
  }
}

void write_geodesic_csv(std::ostream& os, const GeodesicSolution& sol) {
  const int n = sol.xi.empty() ? 0 : static_cast<int>(sol.xi.front().size());
  os << "s";
  for (int i = 0; i < n; ++i) os << ",xi" << i;
  for (int i = 0; i < n; ++i) os << ",xi_dot" << i;
  os << ",conserved_speed\n";
  char buf[64];
  for (std::size_t k = 0; k < sol.s.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", sol.s[k]);
    os << buf;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", sol.xi[k](i));
      os << buf;
    }
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g", sol.xi_dot[k](i));
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g\n", sol.conserved_speed[k]);
    os << buf;
  }
}

std::string read_json_argument(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return arg;
  std::ifstream in(arg);
  if (!in) throw std::runtime_error("cannot open input file: " + arg);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rayphase
