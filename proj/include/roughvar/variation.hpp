#pragma once

// Exact rho-variation of finite sequences and of operator families.

#include "roughvar/operators.hpp"

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughvar::variation {

using grid::cplx;
using grid::Grid;
using grid::SampledFunction;
using operators::FamilySample;

namespace detail {

inline void check_rho(double rho) {
  if (!(rho >= 1) || std::isnan(rho)) throw std::invalid_argument("rho must be >= 1");
}

template <class Pow>
double dp_sum(std::size_t n, const double* re, const double* im, std::size_t stride, Pow pw, double* V) {
  double best = 0;
  V[0] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    double vi = 0;
    const double ar = re[i * stride], ai = im ? im[i * stride] : 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double dr = ar - re[j * stride];
      const double d = im ? std::hypot(dr, ai - im[j * stride]) : std::abs(dr);
      const double c = V[j] + pw(d);
      if (c > vi) vi = c;
    }
    V[i] = vi;
    if (vi > best) best = vi;
  }
  return best;
}

/// max over increasing index chains of sum |a_{k} - a_{k-1}|^rho.
inline double variation_power(std::size_t n, const double* re, const double* im, std::size_t stride, double rho,
                              std::vector<double>& scratch) {
  if (n < 2) return 0.0;
  scratch.resize(n);
  double* V = scratch.data();
  if (rho == 1) return dp_sum(n, re, im, stride, [](double d) { return d; }, V);
  if (rho == 2) return dp_sum(n, re, im, stride, [](double d) { return d * d; }, V);
  if (rho == 3) return dp_sum(n, re, im, stride, [](double d) { return d * d * d; }, V);
  return dp_sum(n, re, im, stride, [rho](double d) { return std::pow(d, rho); }, V);
}

inline double root(double s, double rho) {
  if (rho == 1) return s;
  if (rho == 2) return std::sqrt(s);
  if (rho == 3) return std::cbrt(s);
  return std::pow(s, 1.0 / rho);
}

/// |d|^rho with the same arithmetic as the dynamic program.
inline double power(double d, double rho) {
  if (rho == 1) return d;
  if (rho == 2) return d * d;
  if (rho == 3) return d * d * d;
  return std::pow(d, rho);
}

}  // namespace detail

inline double variation_norm(std::span<const double> a, double rho) {
  detail::check_rho(rho);
  if (a.empty()) throw std::invalid_argument("variation_norm: empty sequence");
  std::vector<double> s;
  return detail::root(detail::variation_power(a.size(), a.data(), nullptr, 1, rho, s), rho);
}

inline double variation_norm(std::span<const cplx> a, double rho) {
  detail::check_rho(rho);
  if (a.empty()) throw std::invalid_argument("variation_norm: empty sequence");
  std::vector<double> re(a.size()), im(a.size()), s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    re[i] = a[i].real();
    im[i] = a[i].imag();
  }
  return detail::root(detail::variation_power(a.size(), re.data(), im.data(), 1, rho, s), rho);
}

struct VariationField {
  Grid grid;
  std::vector<double> values;
  double rho = 2.0;
  std::string provenance;
  /// Short variation diagnostics: dyadic block count and blocks holding a single sample.
  std::size_t blocks = 0;
  std::size_t single_sample_blocks = 0;

  SampledFunction as_function() const { return SampledFunction::from_real(grid, values); }
};

namespace detail {

/// dp_sum for P sequences at once; a[c * P + k] is entry c of sequence k. Same arithmetic as dp_sum.
template <class Pow>
void dp_batch(std::size_t C, std::size_t P, const double* a, Pow pw, double* V, double* best) {
  for (std::size_t k = 0; k < P; ++k) best[k] = V[k] = 0;
  for (std::size_t i = 1; i < C; ++i) {
    double* vi = V + i * P;
    const double* ai = a + i * P;
    for (std::size_t k = 0; k < P; ++k) vi[k] = 0;
    for (std::size_t j = 0; j < i; ++j) {
      const double* aj = a + j * P;
      const double* vj = V + j * P;
      for (std::size_t k = 0; k < P; ++k) {
        const double c = vj[k] + pw(std::abs(ai[k] - aj[k]));
        vi[k] = c > vi[k] ? c : vi[k];
      }
    }
    for (std::size_t k = 0; k < P; ++k) best[k] = vi[k] > best[k] ? vi[k] : best[k];
  }
}

inline void variation_power_batch(std::size_t C, std::size_t P, const double* a, double rho, double* V, double* best) {
  if (C < 2) {
    for (std::size_t k = 0; k < P; ++k) best[k] = 0;
    return;
  }
  if (rho == 1) return dp_batch(C, P, a, [](double d) { return d; }, V, best);
  if (rho == 2) return dp_batch(C, P, a, [](double d) { return d * d; }, V, best);
  if (rho == 3) return dp_batch(C, P, a, [](double d) { return d * d * d; }, V, best);
  dp_batch(C, P, a, [rho](double d) { return std::pow(d, rho); }, V, best);
}

/// Variation of each point's sequence restricted to the given ladder columns.
inline std::vector<double> columns_variation(const FamilySample& fam, const std::vector<std::size_t>& cols,
                                             double rho, bool powered) {
  const std::size_t N = fam.points(), R = fam.length(), C = cols.size();
  if (!fam.is_complex()) {
    constexpr std::size_t P = 64;
    std::vector<double> out(N), a(C * P), V(C * P), best(P);
    for (std::size_t p0 = 0; p0 < N; p0 += P) {
      const std::size_t np = std::min(P, N - p0);
      for (std::size_t k = 0; k < np; ++k)
        for (std::size_t c = 0; c < C; ++c) a[c * np + k] = fam.re[(p0 + k) * R + cols[c]];
      variation_power_batch(C, np, a.data(), rho, V.data(), best.data());
      for (std::size_t k = 0; k < np; ++k) out[p0 + k] = powered ? best[k] : root(best[k], rho);
    }
    return out;
  }
  std::vector<double> out(N, 0.0), re(C), im(C), s;
  for (std::size_t p = 0; p < N; ++p) {
    for (std::size_t c = 0; c < C; ++c) {
      re[c] = fam.re[p * R + cols[c]];
      if (fam.is_complex()) im[c] = fam.im[p * R + cols[c]];
    }
    const double v = variation_power(C, re.data(), fam.is_complex() ? im.data() : nullptr, 1, rho, s);
    out[p] = powered ? v : root(v, rho);
  }
  return out;
}

}  // namespace detail

inline VariationField pointwise_variation(const FamilySample& fam, double rho) {
  detail::check_rho(rho);
  std::vector<std::size_t> cols(fam.length());
  for (std::size_t r = 0; r < cols.size(); ++r) cols[r] = r;
  VariationField v{fam.grid, detail::columns_variation(fam, cols, rho, false), rho, fam.provenance};
  return v;
}

inline VariationField long_variation(const FamilySample& fam, double rho) {
  detail::check_rho(rho);
  if (fam.ladder.anchors.empty()) throw std::invalid_argument("long_variation: ladder has no dyadic anchors");
  VariationField v{fam.grid, detail::columns_variation(fam, fam.ladder.anchors, rho, false), rho,
                   fam.provenance + ";long"};
  return v;
}

/// Ladder indices grouped by dyadic block [2^j, 2^(j+1)).
inline std::vector<std::vector<std::size_t>> dyadic_blocks(const operators::TruncationLadder& l) {
  std::vector<std::vector<std::size_t>> blocks;
  int current = 0;
  for (std::size_t r = 0; r < l.radii.size(); ++r) {
    int e;
    std::frexp(l.radii[r], &e);  // radii[r] in [2^(e-1), 2^e)
    if (blocks.empty() || e != current) {
      blocks.emplace_back();
      current = e;
    }
    blocks.back().push_back(r);
  }
  return blocks;
}

/// S_2 = (sum_j V_{2,j}^2)^(1/2), V_{2,j} the 2-variation inside block j.
inline VariationField short_variation(const FamilySample& fam) {
  const auto blocks = dyadic_blocks(fam.ladder);
  VariationField v{fam.grid, std::vector<double>(fam.points(), 0.0), 2.0, fam.provenance + ";short"};
  v.blocks = blocks.size();
  for (const auto& b : blocks)
    if (b.size() < 2) ++v.single_sample_blocks;
  const std::size_t R = fam.length();
  const bool cplx = fam.is_complex();
  std::vector<double> s;
  for (std::size_t p = 0; p < fam.points(); ++p) {
    const double* re = fam.re.data() + p * R;
    const double* im = cplx ? fam.im.data() + p * R : nullptr;
    double acc = 0;
    for (const auto& b : blocks) {
      if (b.size() < 2) continue;
      // Blocks are runs of consecutive ladder indices.
      acc += detail::variation_power(b.size(), re + b.front(), im ? im + b.front() : nullptr, 1, 2.0, s);
    }
    v.values[p] = std::sqrt(acc);
  }
  return v;
}

}  // namespace roughvar::variation
