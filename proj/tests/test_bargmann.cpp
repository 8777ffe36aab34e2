#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rayphase/bargmann.hpp"
#include "rayphase/chart.hpp"
#include "rayphase/nullphase.hpp"
#include "rayphase/sampling.hpp"
#include "test_helpers.hpp"

using namespace rayphase;
using namespace rayphase::testing;
using std::numbers::pi;

namespace {

VertexList qubit_triple() {
  const double r = 1 / std::numbers::sqrt2;
  return VertexList({qubit(1, 0), qubit(r, r), qubit(r, Complex(0, r))});
}

}  // namespace

TEST_CASE("two-vertex invariants are real nonnegative") {
  Rng rng(101);
  for (int i = 0; i < 30; ++i) {
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    if (std::abs(inner_product(a, b)) < 1e-6) continue;
    const Complex d2 = bargmann_invariant(VertexList({a, b}));
    CHECK_CLOSE(d2.imag(), 0.0, 1e-14);
    CHECK(d2.real() >= 0.0);
    CHECK_CLOSE(bargmann_phase(VertexList({a, b})), 0.0, 1e-13);
  }
}

TEST_CASE("qubit triple invariant") {
  const auto v = qubit_triple();
  const Complex d3 = bargmann_invariant(v);
  CHECK_CLOSE(d3.real(), 0.25, 1e-14);
  CHECK_CLOSE(d3.imag(), 0.25, 1e-14);
  CHECK_CLOSE(bargmann_phase(v), pi / 4, 1e-13);

  // cyclic rotation leaves both untouched
  const VertexList rot({v.vertex(1), v.vertex(2), v.vertex(0)});
  CHECK_CLOSE(std::abs(bargmann_invariant(rot) - d3), 0.0, 1e-14);
  CHECK_CLOSE(bargmann_phase(rot), pi / 4, 1e-12);
}

TEST_CASE("coherent triple via truncated vectors matches the area formula") {
  const CoherentChart chart(64);
  std::vector<StateVector> states;
  for (const Complex z : {Complex(0, 0), Complex(1, 0), Complex(0, 1)}) {
    states.push_back(chart.state_at(CoherentChart::xi_of(z)));
  }
  // arg Delta_3 = Im(conj(z1) z2 + conj(z2) z3 + conj(z3) z1) = 1
  CHECK_CLOSE(bargmann_phase(VertexList(states)), 1.0, 1e-12);
}

TEST_CASE("gauge invariance under per-vertex phases") {
  Rng rng(103);
  std::uniform_real_distribution<double> th(-pi, pi);
  const auto v = random_vertices(5, 3, rng);
  const Complex d = bargmann_invariant(v);
  std::vector<StateVector> rotated;
  for (int j = 0; j < v.size(); ++j) {
    rotated.emplace_back(
        CVector(std::polar(1.0, th(rng)) * v.vertex(j).amplitudes()));
  }
  CHECK_CLOSE(std::abs(bargmann_invariant(VertexList(rotated)) - d), 0.0,
              1e-12);
}

TEST_CASE("overlap product equals the projector trace form") {
  Rng rng(107);
  for (int n : {2, 3, 4, 6}) {
    const auto v = random_vertices(n, 4, rng);
    CHECK_CLOSE(std::abs(bargmann_invariant(v) - bargmann_invariant_trace(v)),
                0.0, 1e-10);
  }
}

TEST_CASE("triangle decomposition reconstructs Delta_n") {
  Rng rng(109);
  const auto v = random_vertices(5, 4, rng);
  const auto dec = decompose_into_triangles(v);
  const Complex direct = bargmann_invariant(v);
  CHECK_CLOSE(std::abs(dec.reconstructed / direct - 1.0), 0.0, 1e-10);
  CHECK(dec.triangles.size() == 3);
  CHECK(dec.pairs.size() == 2);

  // anchor choice shuffles the factors but not the product
  for (int anchor = 1; anchor < 5; ++anchor) {
    CHECK_CLOSE(
        std::abs(decompose_into_triangles(v, anchor).reconstructed - direct),
        0.0, 1e-10);
  }
}

TEST_CASE("degenerate revisit keeps the decomposition valid") {
  const double r = 1 / std::numbers::sqrt2;
  const auto psi1 = qubit(1, 0);
  const auto psi2 = qubit(r, r);
  const auto psi4 = qubit(r, Complex(0, r));
  const VertexList v({psi1, psi2, psi1, psi4});  // psi3 = psi1
  const auto dec = decompose_into_triangles(v);
  // Delta_3(psi1, psi2, psi1) = |(psi1,psi2)|^2, real
  CHECK_CLOSE(dec.triangles[0].imag(), 0.0, 1e-14);
  CHECK_CLOSE(dec.triangles[0].real(), 0.5, 1e-14);
  CHECK_CLOSE(std::abs(dec.reconstructed - bargmann_invariant(v)), 0.0, 1e-12);
}

TEST_CASE("vanishing denominator names the offending pair") {
  const double r = 1 / std::numbers::sqrt2;
  const double t = 1 / std::sqrt(3.0);
  // psi3 orthogonal to psi1 while all consecutive overlaps stay healthy
  const VertexList v({ket({1, 0, 0}), ket({r, r, 0}), ket({0, 1, 0}),
                      ket({t, t, t})});
  CHECK_THROWS_AS((void)decompose_into_triangles(v), OrthogonalStatesError);
}

TEST_CASE("coherent four-vertex invariant sums the plane areas") {
  const CoherentChart chart(64);
  std::vector<StateVector> states;
  for (const Complex z :
       {Complex(0, 0), Complex(1, 0), Complex(1, 1), Complex(0, 1)}) {
    states.push_back(chart.state_at(CoherentChart::xi_of(z)));
  }
  // cyclic sum of Im(conj(z_j) z_{j+1}) = 2 x unit square area
  CHECK_CLOSE(bargmann_phase(VertexList(states)), 2.0, 1e-12);
}

TEST_CASE("free-geodesic polygon reproduces minus the invariant phase") {
  const auto check =
      polygon_phase_check(qubit_triple(), free_geodesic_connector(), 512);
  CHECK_ANGLE(check.geometric_phase, -pi / 4, 1e-9);
  CHECK_CLOSE(check.defect, 0.0, 1e-9);

  Rng rng(113);
  for (int n : {3, 4, 5}) {
    const auto v = random_vertices(n, 4, rng, 0.15);
    const auto pc = polygon_phase_check(v, free_geodesic_connector(), 256);
    CHECK_CLOSE(pc.defect, 0.0, 1e-9);
  }
}

TEST_CASE("polygon refinement stalls immediately on exact sides") {
  const auto pc = polygon_phase_check_refined(qubit_triple(),
                                              free_geodesic_connector(), 128);
  CHECK_CLOSE(pc.defect, 0.0, 1e-9);
  CHECK(pc.nodes_per_side <= 512);
}

TEST_CASE("multi-piece chains obey the generalized additivity identity") {
  Rng rng(127);
  for (int n : {3, 4, 5}) {
    // vertices and generic (non-geodesic) pieces between consecutive ones
    const auto v = random_vertices(n, 3, rng, 0.2);
    std::vector<SampledCurve> pieces;
    double sum_piece_phases = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      const auto mid = random_state(3, rng);
      const auto piece =
          concatenate(free_geodesic(v.vertex(j), mid, 96),
                      free_geodesic(mid, v.vertex(j + 1), 96));
      sum_piece_phases += geometric_phase(piece);
      pieces.push_back(piece);
    }
    SampledCurve chain = pieces.front();
    for (std::size_t j = 1; j < pieces.size(); ++j) {
      chain = concatenate(chain, pieces[j]);
    }
    // open chain over n vertices: phi_g[chain] = sum phi_g[pieces] - B_n
    const double bn = bargmann_phase(v);
    CHECK_ANGLE(geometric_phase(chain), sum_piece_phases - bn, 1e-8);

    // B_n decomposes into anchored B_3 terms mod 2 pi
    double b3sum = 0.0;
    for (int j = 3; j <= n; ++j) {
      b3sum += std::arg(inner_product(v.vertex(0), v.vertex(j - 2)) *
                        inner_product(v.vertex(j - 2), v.vertex(j - 1)) *
                        inner_product(v.vertex(j - 1), v.vertex(0)));
    }
    CHECK_ANGLE(bn, b3sum, 1e-10);
  }
}

TEST_CASE("closed chains keep the same invariant term") {
  Rng rng(131);
  const auto v = random_vertices(4, 3, rng, 0.2);
  std::vector<SampledCurve> pieces;
  double sum_phases = 0.0;
  for (int j = 0; j < 4; ++j) {
    const auto piece = free_geodesic(v.vertex(j), v.vertex((j + 1) % 4), 128);
    sum_phases += geometric_phase(piece);
    pieces.push_back(piece);
  }
  SampledCurve loop = pieces[0];
  for (int j = 1; j < 4; ++j) loop = concatenate(loop, pieces[j]);
  CHECK_ANGLE(geometric_phase(loop), sum_phases - bargmann_phase(v), 1e-8);
}

TEST_CASE("vertex list validation") {
  CHECK_THROWS_AS(VertexList({qubit(1, 0), qubit(0, 1)}),
                  OrthogonalStatesError);
  CHECK_THROWS(VertexList({qubit(1, 0)}));
}
