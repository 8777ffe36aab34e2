#pragma once

#include <functional>
#include <vector>

#include "rayphase/curve.hpp"
#include "rayphase/state.hpp"

namespace rayphase {

/// n >= 2 unit vectors of equal dimension; cyclically consecutive pairs must
/// be non-orthogonal so the cyclic overlap product has a well-defined phase.
class VertexList {
 public:
  explicit VertexList(std::vector<StateVector> states);

  int size() const { return static_cast<int>(states_.size()); }
  int dim() const { return states_.front().dim(); }
  const std::vector<StateVector>& states() const { return states_; }
  const StateVector& vertex(int j) const { return states_.at(j); }

 private:
  std::vector<StateVector> states_;
};

/// Delta_n = (psi_1,psi_2)(psi_2,psi_3)...(psi_n,psi_1). Invariant under
/// per-vertex phase changes and cyclic rotation.
Complex bargmann_invariant(const VertexList& v);

/// Same quantity evaluated as Tr(rho_1 ... rho_n); the slow cross-check route.
Complex bargmann_invariant_trace(const VertexList& v);

/// B_n = arg Delta_n, principal branch. Throws when |Delta_n| <= 1e-12.
double bargmann_phase(const VertexList& v);

/// Delta_n written as a product of anchored three-vertex invariants over a
/// product of two-vertex ones. The anchor vertex is a parameter; the
/// reconstructed value is anchor-independent, the factor lists are not.
struct TriangleDecomposition {
  std::vector<Complex> triangles;  // Delta_3(psi_a, psi_{j-1}, psi_j)
  std::vector<Complex> pairs;      // Delta_2(psi_a, psi_{j-1}) denominators
  Complex reconstructed;
  int anchor;
};
TriangleDecomposition decompose_into_triangles(const VertexList& v,
                                               int anchor = 0);

/// Builds the discretized side from vertex a to vertex b with the requested
/// node count. side_index identifies the polygon side for error reporting.
using SideBuilder = std::function<SampledCurve(
    int side_index, const StateVector& a, const StateVector& b, int nodes)>;

/// Closes the polygon with the given connector, evaluates the loop geometric
/// phase, and compares it against -arg Delta_n (both only defined mod 2*pi).
struct PolygonCheck {
  double geometric_phase;
  double minus_bargmann_phase;
  double defect;  // wrapped difference of the two
  int nodes_per_side;
};
PolygonCheck polygon_phase_check(const VertexList& v,
                                 const SideBuilder& connector,
                                 int nodes_per_side = 512);

/// Doubles nodes_per_side until the defect stabilizes below stall_tol or the
/// per-side node cap (2^20) is reached; returns the finest evaluation.
PolygonCheck polygon_phase_check_refined(const VertexList& v,
                                         const SideBuilder& connector,
                                         int initial_nodes = 512,
                                         double stall_tol = 1e-10);

/// Free-geodesic connector, available between any non-orthogonal rays.
SideBuilder free_geodesic_connector();

/// Assembled loop for the polygon bounded by the connector's sides.
SampledCurve polygon_loop(const VertexList& v, const SideBuilder& connector,
                          int nodes_per_side);

}  // namespace rayphase
