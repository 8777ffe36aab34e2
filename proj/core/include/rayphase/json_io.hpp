#pragma once

#include <iosfwd>
#include <string>

#include "rayphase/bargmann.hpp"
#include "rayphase/curve.hpp"
#include "rayphase/darboux.hpp"
#include "rayphase/geodesic.hpp"
#include "rayphase/nullphase.hpp"
#include "rayphase/state.hpp"

namespace rayphase {

/// State JSON: {"dim": n, "re": [...], "im": [...]}. The reader normalizes
/// and records the norm of the raw input.
struct LoadedState {
  StateVector state;
  double normalization;
};
LoadedState state_from_json(const std::string& text);
std::string state_to_json(const StateVector& s);

/// Curve JSON: {"params": [...], "states": [<state>...]}.
SampledCurve curve_from_json(const std::string& text);
std::string curve_to_json(const SampledCurve& c);

/// Vertex list JSON: {"states": [<state>...]} or a bare state array.
VertexList vertices_from_json(const std::string& text);

/// Darboux chart JSON: {"base": <state>, "basis": {"re": [[..]], "im": [[..]]}}
/// (basis optional; columns are the e_r).
DarbouxChart darboux_from_json(const std::string& text);

/// Coordinate path JSON:
/// {"t": [...], "alpha": [...], "beta": [[..]..], "gamma": [[..]..]}
/// with alpha optional (defaults to zeros).
CoordinatePath coordinate_path_from_json(const std::string& text);

std::string null_phase_report_to_json(const NullPhaseReport& r);

/// CSV with header s,total,dynamical,geometric.
void write_phase_trace_csv(std::ostream& os, const PhaseTrace& tr);

/// CSV with header s,xi...,xi_dot...,conserved_speed.
void write_geodesic_csv(std::ostream& os, const GeodesicSolution& sol);

/// If `arg` starts with '{' or '[' it is inline JSON, otherwise a file path
/// whose contents are returned.
std::string read_json_argument(const std::string& arg);

}  // namespace rayphase
