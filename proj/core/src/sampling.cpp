#include "rayphase/sampling.hpp"

#include <cmath>

namespace rayphase {

StateVector random_state(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return StateVector(std::move(v));
}

std::pair<StateVector, StateVector> random_nonorthogonal_pair(
    int dim, Rng& rng, double min_overlap) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    StateVector a = random_state(dim, rng);
    StateVector b = random_state(dim, rng);
    if (std::abs(inner_product(a, b)) >= min_overlap) return {a, b};
  }
  throw std::runtime_error("random_nonorthogonal_pair: rejection stalled");
}

VertexList random_vertices(int n, int dim, Rng& rng, double min_overlap) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<StateVector> v;
    v.reserve(n);
    for (int j = 0; j < n; ++j) v.push_back(random_state(dim, rng));
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      ok = std::abs(inner_product(v[j], v[(j + 1) % n])) >= min_overlap;
    }
    if (ok) return VertexList(std::move(v));
  }
  throw std::runtime_error("random_vertices: rejection stalled");
}

SampledCurve random_smooth_curve(int dim, int nodes, Rng& rng,
                                 double amplitude, int harmonics, double s0,
                                 double s1) {
  const CVector base = random_state(dim, rng).amplitudes();
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<CVector> ck(harmonics), sk(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    ck[h] = CVector(dim);
    sk[h] = CVector(dim);
    for (int i = 0; i < dim; ++i) {
      ck[h](i) = Complex(g(rng), g(rng)) / std::sqrt(2.0 * dim);
      sk[h](i) = Complex(g(rng), g(rng)) / std::sqrt(2.0 * dim);
    }
  }
  auto raw = [=](double s) {
    CVector v = base;
    for (int h = 0; h < harmonics; ++h) {
      v += amplitude * (std::cos((h + 1) * s) * ck[h] +
                        std::sin((h + 1) * s) * sk[h]);
    }
    return v;
  };
  auto draw = [=](double s) {
    CVector v = CVector::Zero(dim);
    for (int h = 0; h < harmonics; ++h) {
      v += amplitude * (h + 1) * (-std::sin((h + 1) * s) * ck[h] +
                                  std::cos((h + 1) * s) * sk[h]);
    }
    return v;
  };
  auto psi = [raw](double s) { return StateVector(raw(s)); };
  auto dpsi = [raw, draw](double s) {
    const CVector c = raw(s);
    const CVector dc = draw(s);
    const double n2 = c.squaredNorm();
    const double n = std::sqrt(n2);
    return CVector(dc / n - c * (c.dot(dc).real() / (n2 * n)));
  };
  return sample_curve(psi, s0, s1, nodes, dpsi);
}

}  // namespace rayphase
