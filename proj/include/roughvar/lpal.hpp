#pragma once

// Littlewood-Paley projections on the grid, square functions, and the
// paraproduct decomposition of a product.

#include "roughvar/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace roughvar::lpal {

using grid::cplx;
using grid::Grid;
using grid::SampledFunction;

/// 1 on [0, 1/2], cosine taper on [1/2, 1], 0 beyond.
inline double varpi(double rho) {
  if (rho <= 0.5) return 1.0;
  if (rho >= 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (2.0 * rho - 1.0)));
}

/// varpi(rho/2) - varpi(rho), supported in [1/2, 2].
inline double psi(double rho) { return varpi(rho / 2) - varpi(rho); }

/// sqrt(psi): the symbol of Delta, with sum_l phi(2^-l xi)^2 = 1.
inline double phi(double rho) { return std::sqrt(std::max(psi(rho), 0.0)); }

enum class BandKind { delta, theta, lowpass };

struct FilterBank {
  Grid grid;
  int l_min = 0;
  int l_max = 0;
  /// max over nonzero lattice frequencies of |sum_l phi^2(2^-l xi) - 1|.
  double partition_defect = 0.0;

  /// Symbol of Delta_l, Theta_l (l in [l_min, l_max]) or G_l (l in [l_min, l_max + 1]).
  std::vector<cplx> symbol(int l, BandKind kind) const {
    const int hi = kind == BandKind::lowpass ? l_max + 1 : l_max;
    if (l < l_min || l > hi) throw std::invalid_argument("scale out of the filter bank range");
    return grid::radial_symbol(grid, [l, kind](double xi) {
      const double rho = std::ldexp(xi, -l);
      switch (kind) {
        case BandKind::delta: return phi(rho);
        case BandKind::theta: return psi(rho);
        case BandKind::lowpass: return varpi(rho);
      }
      return 0.0;
    });
  }

  /// Lowest frequency of the band on which the paraproduct of f against a
  /// constant reproduces f.
  double interior_low() const { return std::ldexp(1.0, l_min + 3); }
  double interior_high() const { return std::ldexp(1.0, l_max - 2); }
};

inline FilterBank make_filter_bank(const Grid& g) {
  FilterBank b;
  b.grid = g;
  const double xi1 = g.fundamental();
  const double ximax = g.nyquist() * std::sqrt(double(g.n));
  b.l_min = static_cast<int>(std::floor(std::log2(xi1) + 1e-12));
  b.l_max = static_cast<int>(std::ceil(std::log2(ximax) - 1e-12));
  double defect = 0;
  for (std::size_t k = 0; k < g.spectrum_size(); ++k) {
    const double xi = g.frequency_norm(k);
    if (xi == 0) continue;
    double s = 0;
    for (int l = b.l_min; l <= b.l_max; ++l) {
      const double v = phi(std::ldexp(xi, -l));
      s += v * v;
    }
    defect = std::max(defect, std::abs(s - 1.0));
  }
  b.partition_defect = defect;
  if (defect > 1e-12) throw std::logic_error("filter bank partition defect exceeds 1e-12");
  return b;
}

inline SampledFunction bandpass(const FilterBank& bank, const SampledFunction& f, int l, BandKind kind) {
  if (!(f.grid == bank.grid)) throw std::invalid_argument("grid mismatch");
  return grid::apply_symbol(f, bank.symbol(l, kind));
}

struct ScaleBand {
  int lo = 0;
  int hi = 0;
};

/// (sum_l |Delta_{l;b,u} f|^2)^(1/2); with squared set, Delta_l^2 (symbol psi) replaces Delta_l.
inline SampledFunction square_function(const FilterBank& bank, const SampledFunction& f, ScaleBand range,
                                       const SampledFunction* b = nullptr, int u = 0, bool squared = false) {
  if (u < 0) throw std::invalid_argument("commutator order must be nonnegative");
  if (u > 0 && b == nullptr) throw std::invalid_argument("commutator order > 0 needs a symbol b");
  if (range.lo > range.hi || range.lo < bank.l_min || range.hi > bank.l_max)
    throw std::invalid_argument("scale range outside the filter bank");
  SampledFunction acc = SampledFunction::zeros(f.grid);
  for (int l = range.lo; l <= range.hi; ++l) {
    const auto S = bank.symbol(l, squared ? BandKind::theta : BandKind::delta);
    const auto part = u == 0 ? grid::apply_symbol(f, S) : operators::commutator_with_symbol(S, f, *b, u);
    for (std::size_t p = 0; p < acc.size(); ++p) acc.values[p] += std::norm(part.values[p]);
  }
  for (auto& v : acc.values) v = std::sqrt(v.real());
  return acc;
}

inline SampledFunction square_function(const FilterBank& bank, const SampledFunction& f) {
  return square_function(bank, f, {bank.l_min, bank.l_max});
}

struct BonyParts {
  SampledFunction pi_fg;  // pi_f(g)
  SampledFunction pi_gf;  // pi_g(f)
  SampledFunction remainder;
  double residual = 0.0;
  /// Both spectra inside the interior band of the bank, constants allowed.
  bool interior = true;
};

namespace detail {

/// P_i f for the pieces i = l_min - 1 (the projection G_{l_min}) and l_min..l_max (Theta_i).
inline std::vector<SampledFunction> pieces(const FilterBank& bank, const SampledFunction& f) {
  std::vector<SampledFunction> out;
  out.push_back(bandpass(bank, f, bank.l_min, BandKind::lowpass));
  for (int l = bank.l_min; l <= bank.l_max; ++l) out.push_back(bandpass(bank, f, l, BandKind::theta));
  return out;
}

/// sum_i (Theta_i f)(G_{i-3} g) from precomputed pieces; G_j = sum_{k<j} P_k, zero below l_min.
inline SampledFunction para(const std::vector<SampledFunction>& pf, const std::vector<SampledFunction>& pg) {
  const Grid& g = pf[0].grid;
  SampledFunction out = SampledFunction::zeros(g, (pf[0].is_real() && pg[0].is_real()) ? grid::Tag::real : grid::Tag::complex);
  SampledFunction G = SampledFunction::zeros(g, pg[0].tag);
  // Piece index q = i - (l_min - 1); G_{i-3} sums pieces q' <= q - 4.
  for (std::size_t q = 1; q < pf.size(); ++q) {
    if (q >= 4) {
      const auto& add = pg[q - 4];
      for (std::size_t p = 0; p < G.size(); ++p) G.values[p] += add.values[p];
      for (std::size_t p = 0; p < out.size(); ++p) out.values[p] += pf[q].values[p] * G.values[p];
    }
  }
  return out;
}

inline bool spectrum_inside(const SampledFunction& f, double lo, double hi) {
  const Grid& g = f.grid;
  auto check = [&](const std::vector<double>& part) {
    const auto F = fft::forward(g.n, g.m, part);
    double total = 0, outside = 0;
    for (std::size_t k = 0; k < F.size(); ++k) {
      const double e = g.spectral_multiplicity(k) * std::norm(F[k]);
      total += e;
      const double xi = g.frequency_norm(k);
      if (xi > 0 && (xi < lo || xi > hi)) outside += e;
    }
    return outside <= 1e-24 * std::max(total, 1e-300);
  };
  return check(f.real_part()) && (f.is_real() || check(f.imag_part()));
}

}  // namespace detail

inline SampledFunction paraproduct(const FilterBank& bank, const SampledFunction& f, const SampledFunction& g) {
  grid::require_same_grid(f, g);
  return detail::para(detail::pieces(bank, f), detail::pieces(bank, g));
}

/// fg = pi_f(g) + pi_g(f) + R(f, g), R summing pairs of pieces at index distance <= 3.
inline BonyParts bony_decompose(const FilterBank& bank, const SampledFunction& f, const SampledFunction& g) {
  grid::require_same_grid(f, g);
  if (!(f.grid == bank.grid)) throw std::invalid_argument("grid mismatch");
  const auto pf = detail::pieces(bank, f), pg = detail::pieces(bank, g);
  BonyParts out{detail::para(pf, pg), detail::para(pg, pf), SampledFunction::zeros(f.grid), 0.0, true};
  if (!(f.is_real() && g.is_real())) out.remainder.tag = grid::Tag::complex;
  const long Q = static_cast<long>(pf.size());
  for (long i = 0; i < Q; ++i)
    for (long k = std::max(0L, i - 3); k <= std::min(Q - 1, i + 3); ++k)
      for (std::size_t p = 0; p < out.remainder.size(); ++p)
        out.remainder.values[p] += pf[i].values[p] * pg[k].values[p];
  const auto fg = f * g;
  const auto diff = fg - out.pi_fg - out.pi_gf - out.remainder;
  const double nfg = grid::lp_norm(fg, 2);
  out.residual = nfg == 0 ? 0.0 : grid::lp_norm(diff, 2) / nfg;
  out.interior = detail::spectrum_inside(f, bank.interior_low(), bank.interior_high()) &&
                 detail::spectrum_inside(g, bank.interior_low(), bank.interior_high());
  return out;
}

struct OscillationFit {
  double C = 0.0;
  std::size_t pairs = 0;
  /// Separation of the maximizing pair.
  double witness_distance = 0.0;
};

/// Sampled sup of |G_k b(x) - G_k b(y)| / ((2^(k tau) / tau) |x - y|^tau ||b||_*).
inline OscillationFit lowpass_oscillation(const SampledFunction& b, int k, double tau, std::size_t sample_pairs,
                                          std::uint64_t seed, double bmo) {
  if (!(tau > 0 && tau < 0.5)) throw std::invalid_argument("tau must lie in (0, 1/2)");
  if (!(bmo > 0)) throw std::invalid_argument("zero BMO norm: b is constant");
  if (!b.is_real()) throw std::invalid_argument("b must be real-tagged");
  if (sample_pairs == 0) throw std::invalid_argument("need at least one sample pair");
  const Grid& g = b.grid;
  const auto Gb = grid::apply_symbol(b, grid::radial_symbol(g, [k](double xi) { return varpi(std::ldexp(xi, -k)); }));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const long M = static_cast<long>(g.m), c = M / 2;
  auto wrap = [M](long i) { return ((i % M) + M) % M; };
  auto log_uniform_cells = [&](double max_cells) {
    return static_cast<long>(std::llround(std::exp(U(rng) * std::log(max_cells))));
  };
  OscillationFit fit;
  fit.pairs = sample_pairs;
  const double scale = std::exp2(k * tau) / tau * bmo;
  for (std::size_t s = 0; s < sample_pairs; ++s) {
    std::array<long, 2> xi{}, yi{};
    for (int a = 0; a < g.n; ++a) {
      // Half the pairs sit near the singularity at the origin.
      if (s % 2 == 0) {
        const long off = log_uniform_cells(double(c)) * (U(rng) < 0.5 ? -1 : 1);
        xi[a] = wrap(c + (U(rng) < 0.5 ? off : 0));
      } else {
        xi[a] = static_cast<long>(U(rng) * M) % M;
      }
    }
    const double dist_cells = std::exp(U(rng) * std::log(double(c)));
    std::array<double, 2> dir{1.0, 0.0};
    if (g.n == 2) {
      const double th = 2 * std::numbers::pi * U(rng);
      dir = {std::cos(th), std::sin(th)};
    }
    double d2 = 0;
    for (int a = 0; a < g.n; ++a) {
      const long off = std::lround(dist_cells * dir[a]);
      yi[a] = wrap(xi[a] + off);
      d2 += double(off) * double(off);
    }
    if (d2 == 0) continue;
    const double dist = std::sqrt(d2) * g.h;
    const std::size_t px = g.n == 1 ? std::size_t(xi[0]) : std::size_t(xi[0] * M + xi[1]);
    const std::size_t py = g.n == 1 ? std::size_t(yi[0]) : std::size_t(yi[0] * M + yi[1]);
    const double ratio = std::abs(Gb.values[px].real() - Gb.values[py].real()) / (scale * std::pow(dist, tau));
    if (ratio > fit.C) {
      fit.C = ratio;
      fit.witness_distance = dist;
    }
  }
  return fit;
}

}  // namespace roughvar::lpal
