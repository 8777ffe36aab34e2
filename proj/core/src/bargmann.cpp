#include "rayphase/bargmann.hpp"

#include <cmath>
#include <string>

#include "rayphase/nullphase.hpp"

namespace rayphase {

VertexList::VertexList(std::vector<StateVector> states)
    : states_(std::move(states)) {
  if (states_.size() < 2) {
    throw std::invalid_argument("VertexList: need at least 2 vertices");
  }
  const int d = states_.front().dim();
  for (const auto& s : states_) {
    if (s.dim() != d) throw DimensionError("VertexList: mixed dimensions");
  }
  const int n = static_cast<int>(states_.size());
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    if (std::abs(inner_product(states_[j], states_[k])) <=
        kOrthogonalityThreshold) {
      throw OrthogonalStatesError(
          "VertexList: consecutive vertices " + std::to_string(j) + "," +
          std::to_string(k) + " orthogonal");
    }
  }
}

Complex bargmann_invariant(const VertexList& v) {
  const int n = v.size();
  Complex prod(1.0, 0.0);
  for (int j = 0; j < n; ++j) {
    prod *= inner_product(v.vertex(j), v.vertex((j + 1) % n));
  }
  return prod;
}

Complex bargmann_invariant_trace(const VertexList& v) {
  CMatrix prod = project_to_ray(v.vertex(0)).projector();
  for (int j = 1; j < v.size(); ++j) {
    prod = prod * project_to_ray(v.vertex(j)).projector();
  }
  return prod.trace();
}

double bargmann_phase(const VertexList& v) {
  const Complex d = bargmann_invariant(v);
  if (std::abs(d) <= 1e-12) {
    throw OrthogonalStatesError(
        "bargmann_phase: |Delta_n| below threshold, phase undefined");
  }
  return std::arg(d);
}

TriangleDecomposition decompose_into_triangles(const VertexList& v,
                                               int anchor) {
  const int n = v.size();
  if (n < 3) {
    throw std::invalid_argument("decompose_into_triangles: need n >= 3");
  }
  if (anchor < 0 || anchor >= n) {
    throw std::out_of_range("decompose_into_triangles: anchor out of range");
  }
  auto at = [&](int j) -> const StateVector& {
    return v.vertex((anchor + j) % n);
  };
  TriangleDecomposition out;
  out.anchor = anchor;
  out.reconstructed = Complex(1.0, 0.0);
  // Delta_3(psi_1, psi_{j-1}, psi_j) for j = 3..n (1-based as in the ratio
  // formula), divided by Delta_2(psi_1, psi_{j-1}) for j = 4..n.
  for (int j = 3; j <= n; ++j) {
    const Complex tri = inner_product(at(0), at(j - 2)) *
                        inner_product(at(j - 2), at(j - 1)) *
                        inner_product(at(j - 1), at(0));
    out.triangles.push_back(tri);
    out.reconstructed *= tri;
  }
  for (int j = 4; j <= n; ++j) {
    const Complex pair = inner_product(at(0), at(j - 2)) *
                         inner_product(at(j - 2), at(0));
    if (std::abs(pair) <= 1e-10) {
      throw OrthogonalStatesError(
          "decompose_into_triangles: vanishing Delta_2 denominator for "
          "vertices (" +
          std::to_string(anchor) + "," +
          std::to_string((anchor + j - 2) % n) + ")");
    }
    out.pairs.push_back(pair);
    out.reconstructed /= pair;
  }
  return out;
}

SideBuilder free_geodesic_connector() {
  return [](int, const StateVector& a, const StateVector& b, int nodes) {
    return free_geodesic(a, b, nodes);
  };
}

SampledCurve polygon_loop(const VertexList& v, const SideBuilder& connector,
                          int nodes_per_side) {
  const int n = v.size();
  SampledCurve loop =
      connector(0, v.vertex(0), v.vertex(1 % n), nodes_per_side);
  for (int j = 1; j < n; ++j) {
    loop = concatenate(
        loop, connector(j, v.vertex(j), v.vertex((j + 1) % n), nodes_per_side));
  }
  return loop;
}

PolygonCheck polygon_phase_check(const VertexList& v,
                                 const SideBuilder& connector,
                                 int nodes_per_side) {
  PolygonCheck out;
  out.nodes_per_side = nodes_per_side;
  out.geometric_phase = geometric_phase(polygon_loop(v, connector,
                                                     nodes_per_side));
  out.minus_bargmann_phase = wrap_angle(-bargmann_phase(v));
  out.defect = wrap_angle(out.geometric_phase - out.minus_bargmann_phase);
  return out;
}

PolygonCheck polygon_phase_check_refined(const VertexList& v,
                                         const SideBuilder& connector,
                                         int initial_nodes, double stall_tol) {
  constexpr int kNodeCap = 1 << 20;
  PolygonCheck prev = polygon_phase_check(v, connector, initial_nodes);
  for (int nodes = 2 * initial_nodes; nodes <= kNodeCap; nodes *= 2) {
    PolygonCheck next = polygon_phase_check(v, connector, nodes);
    if (angle_distance(next.defect, prev.defect) < stall_tol) return next;
    prev = next;
  }
  return prev;
}

}  // namespace rayphase
