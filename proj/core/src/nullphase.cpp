#include "rayphase/nullphase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace rayphase {

namespace {
constexpr double kWeakOverlap = 1e-6;  // row-exclusion threshold
}

SampledCurve free_geodesic(const StateVector& a, const StateVector& b,
                           int nodes) {
  if (nodes < 2) throw std::invalid_argument("free_geodesic: nodes < 2");
  const Complex ip = inner_product(a, b);
  const double kappa = std::abs(ip);
  if (kappa <= kOrthogonalityThreshold) {
    throw OrthogonalStatesError(
        "free_geodesic: rays orthogonal, no geodesic of this form");
  }
  const CVector phi1 = a.amplitudes();
  if (1.0 - kappa < 1e-14) {
    // Same ray: constant curve of zero length.
    std::vector<double> params(nodes);
    std::vector<StateVector> states(nodes, a);
    for (int i = 0; i < nodes; ++i) params[i] = double(i) / (nodes - 1);
    const int d = a.dim();
    return SampledCurve(std::move(params), std::move(states),
                        [d](double) { return CVector(CVector::Zero(d)); });
  }
  // Align b so (a, b') is real positive, then complete the orthonormal pair.
  const CVector bp = std::polar(1.0, -std::arg(ip)) * b.amplitudes();
  const CVector phi2 = (bp - kappa * phi1) / std::sqrt(1.0 - kappa * kappa);
  const double s_max = std::acos(kappa);
  auto psi = [phi1, phi2](double s) {
    return StateVector(CVector(std::cos(s) * phi1 + std::sin(s) * phi2));
  };
  auto dpsi = [phi1, phi2](double s) {
    return CVector(-std::sin(s) * phi1 + std::cos(s) * phi2);
  };
  return sample_curve(psi, 0.0, s_max, nodes, dpsi);
}

NullPhaseReport separability_test(const SampledCurve& c, double tol) {
  const int m = c.node_count();
  if (m < 3) {
    throw std::invalid_argument(
        "separability_test: need at least 3 nodes for the mixed partial");
  }
  // Pairwise overlap matrix; hard error on orthogonal pairs, row exclusion
  // on weak ones.
  CMatrix overlaps(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      overlaps(j, k) = inner_product(c.state(j), c.state(k));
    }
  }
  std::vector<bool> bad(m, false);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      const double mod = std::abs(overlaps(j, k));
      if (mod <= kOrthogonalityThreshold) {
        throw OrthogonalStatesError(
            "separability_test: orthogonal pair at s=" +
            std::to_string(c.param(j)) + ", s'=" + std::to_string(c.param(k)));
      }
      if (mod < kWeakOverlap) bad[j] = bad[k] = true;
    }
  }
  std::vector<int> keep;
  for (int j = 0; j < m; ++j) {
    if (!bad[j]) keep.push_back(j);
  }
  NullPhaseReport rep;
  rep.excluded_rows = m - static_cast<int>(keep.size());
  const int n = static_cast<int>(keep.size());
  if (n < 3) {
    throw std::invalid_argument(
        "separability_test: too few usable nodes after weak-overlap "
        "exclusion");
  }

  // Phase matrix on kept nodes, unwrapped along each row.
  RMatrix phase(n, n);
  for (int j = 0; j < n; ++j) {
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
      double a = std::arg(overlaps(keep[j], keep[k]));
      if (k > 0) a = prev + wrap_angle(a - prev);
      phase(j, k) = a;
      prev = a;
    }
  }

  double max_abs_arg = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      max_abs_arg =
          std::max(max_abs_arg, std::abs(wrap_angle(phase(j, k))));
    }
  }

  double hsum = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    hsum += c.param(keep[i + 1]) - c.param(keep[i]);
  }
  const double h = hsum / (n - 1);
  const double tol_eff =
      tol > 0 ? tol : std::max(1e-8, 1e-6 * max_abs_arg / (h * h));

  rep.mixed_partial_max = 0.0;
  for (int j = 1; j + 1 < n; ++j) {
    const double dj = c.param(keep[j + 1]) - c.param(keep[j - 1]);
    for (int k = 1; k + 1 < n; ++k) {
      const double dk = c.param(keep[k + 1]) - c.param(keep[k - 1]);
      const double d2 = (phase(j + 1, k + 1) - phase(j + 1, k - 1) -
                         phase(j - 1, k + 1) + phase(j - 1, k - 1)) /
                        (dj * dk);
      if (std::abs(d2) > rep.mixed_partial_max) {
        rep.mixed_partial_max = std::abs(d2);
        rep.witness = {c.param(keep[j]), c.param(keep[k]), c.param(keep[k])};
      }
    }
  }
  rep.pass = rep.mixed_partial_max < tol_eff;
  if (rep.pass) rep.witness.reset();
  return rep;
}

NullPhaseReport bargmann_reality_test(const SampledCurve& c,
                                      const TripleSampling& sampling,
                                      double tol) {
  const int m = c.node_count();
  if (m < 3) {
    throw std::invalid_argument("bargmann_reality_test: need >= 3 nodes");
  }
  const double tol_eff = tol > 0 ? tol : 1e-8;

  std::vector<std::array<int, 3>> triples;
  if (m <= sampling.exhaustive_limit) {
    for (int j = 0; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        for (int l = k + 1; l < m; ++l) triples.push_back({j, k, l});
      }
    }
  } else {
    std::mt19937_64 rng(sampling.seed);
    std::uniform_int_distribution<int> pick(0, m - 1);
    std::set<std::array<int, 3>> seen;
    while (static_cast<int>(triples.size()) < sampling.random_triples) {
      std::array<int, 3> t = {pick(rng), pick(rng), pick(rng)};
      std::sort(t.begin(), t.end());
      if (t[0] == t[1] || t[1] == t[2]) continue;
      if (seen.insert(t).second) triples.push_back(t);
      if (seen.size() >
          static_cast<std::size_t>(m) * (m - 1) * (m - 2) / 6) {
        break;
      }
    }
  }

  NullPhaseReport rep;
  rep.bargmann_triple_max_imag = 0.0;
  rep.bargmann_triple_min_real = 1.0;
  double worst = -1.0;
  for (const auto& t : triples) {
    // Tr(rho rho' rho'') as the cyclic overlap product.
    const Complex d3 = inner_product(c.state(t[0]), c.state(t[1])) *
                       inner_product(c.state(t[1]), c.state(t[2])) *
                       inner_product(c.state(t[2]), c.state(t[0]));
    const double im = std::abs(d3.imag());
    const double re = d3.real();
    rep.bargmann_triple_max_imag = std::max(rep.bargmann_triple_max_imag, im);
    rep.bargmann_triple_min_real = std::min(rep.bargmann_triple_min_real, re);
    const double badness = std::max(im, -re);
    if (badness > worst) {
      worst = badness;
      rep.witness = {c.param(t[0]), c.param(t[1]), c.param(t[2])};
    }
  }
  rep.pass = rep.bargmann_triple_max_imag < tol_eff &&
             rep.bargmann_triple_min_real > -tol_eff;
  if (rep.pass) rep.witness.reset();
  return rep;
}

OpenClosedReduction open_to_closed_reduction(
    const SampledCurve& c_open,
    const std::function<SampledCurve(const StateVector&, const StateVector&,
                                     int)>& connector,
    int connector_nodes) {
  const SampledCurve back =
      connector(c_open.states().back(), c_open.states().front(),
                connector_nodes);
  OpenClosedReduction r{concatenate(c_open, back), geometric_phase(c_open),
                        0.0};
  r.phi_closed = geometric_phase(r.closed);
  return r;
}

OpenClosedReduction open_to_closed_reduction(const SampledCurve& c_open,
                                             int connector_nodes) {
  return open_to_closed_reduction(
      c_open,
      [](const StateVector& a, const StateVector& b, int nodes) {
        return free_geodesic(a, b, nodes);
      },
      connector_nodes);
}

}  // namespace rayphase
