#pragma once

#include <random>
#include <vector>

#include "rayphase/bargmann.hpp"
#include "rayphase/curve.hpp"
#include "rayphase/state.hpp"

namespace rayphase {

using Rng = std::mt19937_64;

/// Haar-uniform unit vector (normalized complex Gaussian entries).
StateVector random_state(int dim, Rng& rng);

/// Pair with |(a,b)| >= min_overlap (rejection sampled).
std::pair<StateVector, StateVector> random_nonorthogonal_pair(
    int dim, Rng& rng, double min_overlap = 0.05);

/// Vertex list whose cyclically consecutive overlaps all stay above
/// min_overlap.
VertexList random_vertices(int n, int dim, Rng& rng,
                           double min_overlap = 0.05);

/// Smooth closed-form random curve: psi(s) = normalize(psi0 + a v(s)) with
/// v a low-order trigonometric polynomial with random complex vector
/// coefficients. Carries an analytic tangent.
SampledCurve random_smooth_curve(int dim, int nodes, Rng& rng,
                                 double amplitude = 0.35, int harmonics = 2,
                                 double s0 = 0.0, double s1 = 1.0);

}  // namespace rayphase
