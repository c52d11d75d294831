#pragma once

// Muckenhoupt characteristics and mean oscillation over dyadic cubes.

#include "roughvar/sample.hpp"

#include <cmath>
#include <map>
#include <optional>

namespace roughvar::weights {

using grid::Grid;
using grid::SampledFunction;

/// All dyadic cubes of the torus from side 2L (level 0) down to side 2L / 2^depth.
struct CubeFamily {
  Grid grid;
  int depth = 0;

  std::size_t count() const {
    std::size_t c = 0;
    for (int k = 0; k <= depth; ++k) c += std::size_t(1) << (k * grid.n);
    return c;
  }
  std::size_t cells_per_side(int level) const { return grid.m >> level; }
};

inline CubeFamily make_cube_family(const Grid& g, int depth) {
  if (depth < 0) throw std::invalid_argument("cube depth must be nonnegative");
  if ((std::size_t(1) << depth) > g.m) throw std::invalid_argument("cube depth finer than the grid");
  return {g, depth};
}

namespace detail {

/// Visits every cube at the given level with the flat indices of its cells.
template <class Fn>
void for_each_cube(const CubeFamily& cubes, int level, Fn&& fn) {
  const Grid& g = cubes.grid;
  const std::size_t side = cubes.cells_per_side(level), per_axis = std::size_t(1) << level;
  std::vector<std::size_t> cells;
  cells.reserve(g.n == 1 ? side : side * side);
  if (g.n == 1) {
    for (std::size_t c = 0; c < per_axis; ++c) {
      cells.clear();
      for (std::size_t i = 0; i < side; ++i) cells.push_back(c * side + i);
      fn(cells);
    }
  } else {
    for (std::size_t a = 0; a < per_axis; ++a)
      for (std::size_t b = 0; b < per_axis; ++b) {
        cells.clear();
        for (std::size_t i = 0; i < side; ++i)
          for (std::size_t j = 0; j < side; ++j) cells.push_back((a * side + i) * g.m + b * side + j);
        fn(cells);
      }
  }
}

inline void require_positive(const SampledFunction& w) {
  for (const auto& v : w.values)
    if (!(v.real() > 0) || v.imag() != 0 || !std::isfinite(v.real()))
      throw std::invalid_argument("weight must be finite and positive on every cell");
}

}  // namespace detail

/// Characteristic restricted to the cubes of one level.
inline double ap_level(const SampledFunction& w, double p, const CubeFamily& cubes, int level) {
  const double pp = p > 1 ? p / (p - 1) : 0.0;
  double best = 0;
  detail::for_each_cube(cubes, level, [&](const std::vector<std::size_t>& cells) {
    const double N = double(cells.size());
    double sw = 0, sd = 0, mn = std::numeric_limits<double>::infinity();
    for (auto c : cells) {
      const double v = w.values[c].real();
      sw += v;
      if (p > 1)
        sd += std::pow(v, 1.0 - pp);
      else
        mn = std::min(mn, v);
    }
    const double val = p > 1 ? (sw / N) * std::pow(sd / N, p - 1) : (sw / N) / mn;
    best = std::max(best, val);
  });
  return best;
}

/// sup over the family of (avg_Q w)(avg_Q w^(1-p'))^(p-1); avg_Q w / min_Q w for p = 1.
inline double ap_characteristic(const SampledFunction& w, double p, const CubeFamily& cubes) {
  if (!(p >= 1) || !std::isfinite(p)) throw std::invalid_argument("A_p exponent must satisfy 1 <= p < inf");
  if (!(w.grid == cubes.grid)) throw std::invalid_argument("grid mismatch");
  detail::require_positive(w);
  double best = 0;
  for (int level = 0; level <= cubes.depth; ++level) best = std::max(best, ap_level(w, p, cubes, level));
  return best;
}

inline double bmo_level(const SampledFunction& b, const CubeFamily& cubes, int level) {
  double best = 0;
  detail::for_each_cube(cubes, level, [&](const std::vector<std::size_t>& cells) {
    double s = 0;
    for (auto c : cells) s += b.values[c].real();
    const double avg = s / double(cells.size());
    double osc = 0;
    for (auto c : cells) osc += std::abs(b.values[c].real() - avg);
    best = std::max(best, osc / double(cells.size()));
  });
  return best;
}

/// sup over the family of avg_Q |b - avg_Q b|.
inline double bmo_norm(const SampledFunction& b, const CubeFamily& cubes) {
  if (!b.is_real()) throw std::invalid_argument("bmo_norm: b must be real-tagged");
  if (!(b.grid == cubes.grid)) throw std::invalid_argument("grid mismatch");
  double best = 0;
  for (int level = 0; level <= cubes.depth; ++level) best = std::max(best, bmo_level(b, cubes, level));
  return best;
}

/// Cube depth whose finest cubes have the given physical side (>= one cell).
inline int depth_for_side(const Grid& g, double side) {
  int d = static_cast<int>(std::floor(std::log2(2 * g.L / side) + 1e-9));
  d = std::max(d, 0);
  while ((std::size_t(1) << d) > g.m) --d;
  return d;
}

struct ExpWeightResult {
  double value = 1.0;
  bool admissible = false;
  /// alpha_n min{1, 1/(p-1)} / ||b||_*.
  double admissible_radius = 0.0;
};

inline ExpWeightResult exp_weight_characteristic(const SampledFunction& b, double lambda, double p,
                                                 const CubeFamily& cubes, double alpha_n = 0.01) {
  if (!b.is_real()) throw std::invalid_argument("b must be real-tagged");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : b.values) {
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  if (std::abs(lambda) * (hi - lo) > 50) throw std::domain_error("|lambda| times the range of b exceeds 50");
  ExpWeightResult r;
  const double bmo = bmo_norm(b, cubes);
  r.admissible_radius = bmo > 0 ? alpha_n * std::min(1.0, p > 1 ? 1.0 / (p - 1) : 1.0) / bmo
                                : std::numeric_limits<double>::infinity();
  r.admissible = std::abs(lambda) <= r.admissible_radius;
  if (lambda == 0) {
    r.value = 1.0;
    return r;
  }
  const auto w = grid::map(b, [lambda](grid::cplx v) { return grid::cplx(std::exp(lambda * v.real())); });
  r.value = ap_characteristic(w, p, cubes);
  return r;
}

/// alpha_n min{1, s'/s} / (tau p r' ||b||_*), with s' = s/(s-1).
inline double theorem1_radius(double tau, double p, double r_prime, double bmo, double s, double alpha_n = 0.01) {
  if (!(tau > 0 && p > 0 && r_prime > 0 && bmo > 0 && alpha_n > 0))
    throw std::invalid_argument("theorem radius: arguments must be positive");
  if (!(s > 1)) throw std::invalid_argument("theorem radius: s must exceed 1");
  const double sp = s / (s - 1);
  return alpha_n * std::min(1.0, sp / s) / (tau * p * r_prime * bmo);
}

struct WeightProfile {
  SampledFunction w;
  std::map<double, double> characteristics;
  std::optional<double> bmo;
};

inline WeightProfile make_weight_profile(const SampledFunction& w, const std::vector<double>& ps,
                                         const CubeFamily& cubes, bool is_symbol = false) {
  WeightProfile prof{w, {}, {}};
  for (double p : ps) prof.characteristics[p] = ap_characteristic(w, p, cubes);
  if (is_symbol) prof.bmo = bmo_norm(w, cubes);
  return prof;
}

struct RefinementPoint {
  int depth = 0;
  std::size_t m = 0;
  double value = 0.0;
};

struct RefinementProfile {
  std::vector<RefinementPoint> points;
  /// Ratio of the last two values.
  double last_ratio = 1.0;
  bool stable = false;
  /// Consecutive ratios all exceed 1 + slack: no stabilization in sight.
  bool growing = false;
};

/// [w]_{A_p} with the grid refined together with the cube depth, so the
/// finest cubes always hold cells_per_cube cells per axis.
inline RefinementProfile ap_refinement_profile(const grid::FunctionSpec& w, double p, int n, double L,
                                               const std::vector<int>& depths, std::size_t cells_per_cube = 4,
                                               double slack = 0.15) {
  if (depths.size() < 2) throw std::invalid_argument("refinement profile needs at least two depths");
  RefinementProfile prof;
  for (int d : depths) {
    const std::size_t m = cells_per_cube << d;
    const Grid g = grid::make_grid(n, m, L);
    const auto field = grid::sample(w, g);
    prof.points.push_back({d, m, ap_characteristic(field, p, make_cube_family(g, d))});
  }
  const auto& P = prof.points;
  prof.last_ratio = P.back().value / P[P.size() - 2].value;
  prof.stable = std::abs(prof.last_ratio - 1.0) <= slack;
  prof.growing = true;
  for (std::size_t i = 1; i < P.size(); ++i)
    if (P[i].value / P[i - 1].value <= 1 + slack) prof.growing = false;
  return prof;
}

}  // namespace roughvar::weights
