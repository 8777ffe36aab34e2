#include "rayphase/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace rayphase {

namespace {

// Derivative weights of the quadratic through (x0,x1,x2), evaluated at x.
std::array<double, 3> lagrange3_weights(double x0, double x1, double x2,
                                        double x) {
  return {(2 * x - x1 - x2) / ((x0 - x1) * (x0 - x2)),
          (2 * x - x0 - x2) / ((x1 - x0) * (x1 - x2)),
          (2 * x - x0 - x1) / ((x2 - x0) * (x2 - x1))};
}

bool uniform_grid(const std::vector<double>& s, int a, int b) {
  if (b - a < 2) return true;
  const double h = (s[b] - s[a]) / (b - a);
  for (int k = a; k < b; ++k) {
    if (std::abs((s[k + 1] - s[k]) - h) > 1e-12 * std::max(1.0, std::abs(h))) {
      return false;
    }
  }
  return true;
}

}  // namespace

SampledCurve::SampledCurve(std::vector<double> params,
                           std::vector<StateVector> states,
                           TangentFn analytic_tangent)
    : params_(std::move(params)), states_(std::move(states)) {
  if (params_.size() < 2) {
    throw std::invalid_argument("SampledCurve: need at least 2 nodes");
  }
  if (params_.size() != states_.size()) {
    throw std::invalid_argument("SampledCurve: params/states size mismatch");
  }
  const int d = states_.front().dim();
  for (std::size_t k = 0; k + 1 < params_.size(); ++k) {
    if (!(params_[k + 1] > params_[k])) {
      throw std::invalid_argument(
          "SampledCurve: params must be strictly increasing at index " +
          std::to_string(k));
    }
  }
  for (std::size_t k = 0; k < states_.size(); ++k) {
    if (states_[k].dim() != d) {
      throw DimensionError("SampledCurve: mixed state dimensions");
    }
  }
  for (std::size_t k = 0; k + 1 < states_.size(); ++k) {
    const double ov = std::abs(inner_product(states_[k], states_[k + 1]));
    if (ov <= kOrthogonalityThreshold) {
      throw OrthogonalStatesError(
          "SampledCurve: consecutive nodes (numerically) orthogonal at index " +
          std::to_string(k));
    }
  }
  if (analytic_tangent) {
    pieces_ = {Piece{0, node_count() - 1, std::move(analytic_tangent)}};
  } else {
    pieces_ = {Piece{0, node_count() - 1, nullptr}};
  }
}

SampledCurve::SampledCurve(std::vector<double> params,
                           std::vector<StateVector> states,
                           std::vector<Piece> pieces)
    : SampledCurve(std::move(params), std::move(states)) {
  pieces_ = std::move(pieces);
}

CVector SampledCurve::finite_difference_tangent(int k, int a, int b) const {
  if (b - a < 2) {
    throw std::invalid_argument(
        "SampledCurve: finite-difference tangent needs at least 3 nodes per "
        "smooth piece");
  }
  int i0 = std::clamp(k - 1, a, b - 2);
  const auto w = lagrange3_weights(params_[i0], params_[i0 + 1],
                                   params_[i0 + 2], params_[k]);
  return w[0] * states_[i0].amplitudes() + w[1] * states_[i0 + 1].amplitudes() +
         w[2] * states_[i0 + 2].amplitudes();
}

CVector SampledCurve::tangent(int k) const {
  // At an interior junction the piece starting at k wins (right limit).
  for (const Piece& p : pieces_) {
    if (k >= p.first && k <= p.last) {
      if (p.tangent) return p.tangent(params_[k]);
      return finite_difference_tangent(k, p.first, p.last);
    }
  }
  throw std::out_of_range("SampledCurve::tangent: node index out of range");
}

SampledCurve SampledCurve::window(int j0, int j1) const {
  if (j0 < 0 || j1 >= node_count() || j1 <= j0) {
    throw std::out_of_range("SampledCurve::window: bad node range");
  }
  std::vector<double> p(params_.begin() + j0, params_.begin() + j1 + 1);
  std::vector<StateVector> st(states_.begin() + j0, states_.begin() + j1 + 1);
  std::vector<Piece> pieces;
  for (const Piece& q : pieces_) {
    const int a = std::max(q.first, j0), b = std::min(q.last, j1);
    if (b > a) pieces.push_back(Piece{a - j0, b - j0, q.tangent});
  }
  if (pieces.empty()) pieces.push_back(Piece{0, j1 - j0, nullptr});
  return SampledCurve(std::move(p), std::move(st), std::move(pieces));
}

SampledCurve sample_curve(const std::function<StateVector(double)>& psi,
                          double s0, double s1, int nodes,
                          TangentFn analytic_tangent) {
  if (nodes < 2) throw std::invalid_argument("sample_curve: nodes < 2");
  if (!(s1 > s0)) throw std::invalid_argument("sample_curve: need s1 > s0");
  std::vector<double> params(nodes);
  std::vector<StateVector> states;
  states.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    params[i] = s0 + (s1 - s0) * i / (nodes - 1);
    states.push_back(psi(params[i]));
  }
  return SampledCurve(std::move(params), std::move(states),
                      std::move(analytic_tangent));
}

double total_phase(const SampledCurve& c) {
  const Complex ip = inner_product(c.states().front(), c.states().back());
  if (std::abs(ip) <= kOrthogonalityThreshold) {
    throw OrthogonalStatesError("total_phase: endpoints orthogonal");
  }
  return std::arg(ip);
}

namespace {

// Integrates f over the nodes of one smooth piece [a, b]. Composite Simpson
// on uniform odd-count grids with analytic tangents, else trapezoid.
double integrate_piece(const SampledCurve& c, int a, int b, bool analytic,
                       const std::function<double(int)>& f) {
  const auto& s = c.params();
  const int n = b - a;
  if (n == 0) return 0.0;
  if (analytic && n >= 2 && n % 2 == 0 && uniform_grid(s, a, b)) {
    const double h = (s[b] - s[a]) / n;
    double acc = f(a) + f(b);
    for (int k = a + 1; k < b; ++k) acc += ((k - a) % 2 ? 4.0 : 2.0) * f(k);
    return acc * h / 3.0;
  }
  double acc = 0.0;
  for (int k = a; k < b; ++k) {
    acc += 0.5 * (s[k + 1] - s[k]) * (f(k) + f(k + 1));
  }
  return acc;
}

double integrate_over_pieces(const SampledCurve& c,
                             const std::function<double(int, const CVector&)>&
                                 integrand) {
  double acc = 0.0;
  for (const auto& p : c.pieces()) {
    const bool analytic = static_cast<bool>(p.tangent);
    auto f = [&](int k) {
      const CVector t = analytic ? p.tangent(c.param(k))
                                 : c.finite_difference_tangent(k, p.first,
                                                               p.last);
      return integrand(k, t);
    };
    acc += integrate_piece(c, p.first, p.last, analytic, f);
  }
  return acc;
}

}  // namespace

double dynamical_phase(const SampledCurve& c) {
  return integrate_over_pieces(c, [&](int k, const CVector& t) {
    return c.state(k).amplitudes().dot(t).imag();
  });
}

double geometric_phase(const SampledCurve& c) {
  return wrap_angle(total_phase(c) - dynamical_phase(c));
}

double curve_length(const SampledCurve& c) {
  return integrate_over_pieces(c, [&](int k, const CVector& t) {
    const Complex pt = c.state(k).amplitudes().dot(t);
    const double v2 = t.squaredNorm() - std::norm(pt);
    return std::sqrt(std::max(0.0, v2));
  });
}

SampledCurve horizontal_lift(const SampledCurve& c) {
  std::vector<StateVector> lifted;
  lifted.reserve(c.node_count());
  lifted.push_back(c.state(0));
  for (int k = 1; k < c.node_count(); ++k) {
    const Complex ip = inner_product(lifted.back(), c.state(k));
    if (std::abs(ip) <= kOrthogonalityThreshold) {
      throw OrthogonalStatesError(
          "horizontal_lift: consecutive nodes orthogonal");
    }
    const Complex factor = std::polar(1.0, -std::arg(ip));
    lifted.emplace_back(CVector(factor * c.state(k).amplitudes()));
  }
  // Node phases are now grid-dependent; tangents fall back to differences.
  return SampledCurve(c.params(), std::move(lifted));
}

SampledCurve concatenate(const SampledCurve& c12, const SampledCurve& c23) {
  if (c12.dim() != c23.dim()) {
    throw DimensionError("concatenate: dimension mismatch");
  }
  const StateVector& end = c12.states().back();
  const StateVector& start = c23.states().front();
  const double miss = 1.0 - ray_overlap(end, start);
  if (miss > 1e-10) {
    throw std::invalid_argument(
        "concatenate: junction rays differ, 1 - Tr(rho rho') = " +
        std::to_string(miss));
  }
  // Align the second piece so the junction states coincide as vectors.
  const Complex align = std::polar(1.0, std::arg(inner_product(start, end)));

  std::vector<double> params(c12.params());
  std::vector<StateVector> states(c12.states());
  const double shift = c12.params().back() - c23.params().front();
  for (int k = 1; k < c23.node_count(); ++k) {
    params.push_back(c23.param(k) + shift);
    states.emplace_back(CVector(align * c23.state(k).amplitudes()));
  }

  std::vector<SampledCurve::Piece> pieces(c12.pieces());
  const int off = c12.node_count() - 1;
  for (const auto& p : c23.pieces()) {
    TangentFn t = nullptr;
    if (p.tangent) {
      t = [align, shift, base = p.tangent](double s) -> CVector {
        return align * base(s - shift);
      };
    }
    pieces.push_back(SampledCurve::Piece{p.first + off, p.last + off, t});
  }
  return SampledCurve(std::move(params), std::move(states), std::move(pieces));
}

double phase_composition_defect(const SampledCurve& c12,
                                const SampledCurve& c23) {
  const SampledCurve joined = concatenate(c12, c23);
  return wrap_angle(geometric_phase(joined) - geometric_phase(c12) -
                    geometric_phase(c23));
}

PhaseTrace phase_trace(const SampledCurve& c) {
  PhaseTrace tr;
  const int n = c.node_count();
  tr.s = c.params();
  tr.total.assign(n, 0.0);
  tr.dynamical.assign(n, 0.0);
  tr.geometric.assign(n, 0.0);
  for (int k = 1; k < n; ++k) {
    const Complex ip = inner_product(c.state(0), c.state(k));
    tr.total[k] = std::abs(ip) > kOrthogonalityThreshold ? std::arg(ip)
                                                         : std::nan("");
  }
  // Cumulative dynamical phase, piece by piece.
  for (const auto& p : c.pieces()) {
    const bool analytic = static_cast<bool>(p.tangent);
    auto f = [&](int k) {
      const CVector t = analytic
                            ? p.tangent(c.param(k))
                            : c.finite_difference_tangent(k, p.first, p.last);
      return c.state(k).amplitudes().dot(t).imag();
    };
    for (int k = p.first; k < p.last; ++k) {
      tr.dynamical[k + 1] = tr.dynamical[k] +
                            0.5 * (c.param(k + 1) - c.param(k)) *
                                (f(k) + f(k + 1));
    }
  }
  for (int k = 0; k < n; ++k) {
    tr.geometric[k] = wrap_angle(tr.total[k] - tr.dynamical[k]);
  }
  return tr;
}

}  // namespace rayphase
