#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rayphase/state.hpp"

namespace rayphase {

enum class TangentMode { kAnalytic, kFiniteDifference };

/// Evaluates d/ds psi(s) for analytically known curves.
using TangentFn = std::function<CVector(double)>;

/// Discretized curve of unit vectors over a strictly increasing parameter
/// grid. Consecutive node overlaps must stay above the orthogonality
/// threshold. Immutable after construction.
///
/// A curve is a chain of smooth pieces. Joins produced by concatenate() keep
/// the piece boundaries so that quadrature never differentiates across a
/// corner; a freshly sampled curve is one piece.
class SampledCurve {
 public:
  struct Piece {
    int first = 0;
    int last = 0;           // inclusive node range
    TangentFn tangent;      // analytic d/ds psi on this piece, may be null
  };

  SampledCurve(std::vector<double> params, std::vector<StateVector> states,
               TangentFn analytic_tangent = nullptr);
  SampledCurve(std::vector<double> params, std::vector<StateVector> states,
               std::vector<Piece> pieces);

  int node_count() const { return static_cast<int>(params_.size()); }
  int dim() const { return states_.front().dim(); }
  const std::vector<double>& params() const { return params_; }
  const std::vector<StateVector>& states() const { return states_; }
  const StateVector& state(int k) const { return states_.at(k); }
  double param(int k) const { return params_.at(k); }
  const std::vector<Piece>& pieces() const { return pieces_; }
  TangentMode tangent_mode() const {
    return pieces_.front().tangent ? TangentMode::kAnalytic
                                   : TangentMode::kFiniteDifference;
  }

  /// d/ds psi at node k: analytic evaluator when present, otherwise a
  /// three-point Lagrange difference (one-sided at piece ends). At a junction
  /// node the right piece wins.
  CVector tangent(int k) const;

  /// Three-point difference tangent at node k, restricted to nodes [a, b].
  CVector finite_difference_tangent(int k, int a, int b) const;

  /// Nodes j0..j1 inclusive as a curve of their own.
  SampledCurve window(int j0, int j1) const;

 private:
  std::vector<double> params_;
  std::vector<StateVector> states_;
  std::vector<Piece> pieces_;
};

/// Samples s -> psi(s) on a uniform n-node grid over [s0, s1].
SampledCurve sample_curve(const std::function<StateVector(double)>& psi,
                          double s0, double s1, int nodes,
                          TangentFn analytic_tangent = nullptr);

/// arg(psi(s_0), psi(s_N)), principal branch.
double total_phase(const SampledCurve& c);

/// Im integral (psi, d/ds psi) ds. Trapezoid by default; composite Simpson
/// on uniform odd-count grids when the tangent is analytic. Accumulated
/// segment-wise, never wrapped.
double dynamical_phase(const SampledCurve& c);

/// total_phase - dynamical_phase, wrapped to (-pi, pi]. Lift-independent.
double geometric_phase(const SampledCurve& c);

/// Discrete parallel transport: re-phases each node so consecutive pairs are
/// in phase; the first node is kept. The output projects to the same rays.
SampledCurve horizontal_lift(const SampledCurve& c);

/// Fubini-Study length: integral of sqrt(|psi'|^2 - |(psi,psi')|^2).
double curve_length(const SampledCurve& c);

/// End of c12 and start of c23 project to the same ray (checked); c23 is
/// phase-aligned so the junction states coincide and the grids are chained.
SampledCurve concatenate(const SampledCurve& c12, const SampledCurve& c23);

/// phi_g[c12 u c23] - phi_g[c12] - phi_g[c23], wrapped. Equals
/// -arg Delta_3 of the three junction states.
double phase_composition_defect(const SampledCurve& c12,
                                const SampledCurve& c23);

/// Running phase table for plotting: per node k, arg(psi_0, psi_k), the
/// cumulative dynamical phase, and their wrapped difference.
struct PhaseTrace {
  std::vector<double> s;
  std::vector<double> total;
  std::vector<double> dynamical;
  std::vector<double> geometric;
};
PhaseTrace phase_trace(const SampledCurve& c);

}  // namespace rayphase
