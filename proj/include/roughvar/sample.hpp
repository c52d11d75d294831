#pragma once

// Built-in function descriptors and their sampling on a grid.

#include "roughvar/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <variant>

namespace roughvar::grid {

struct Gaussian {
  double sigma = 1.0;
  std::array<double, 2> center{0.0, 0.0};
};
/// exp(1 - 1/(1 - r^2)) on r = |x - center|/width < 1.
struct Bump {
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0;
};
/// Axis-aligned box; each cell takes the fraction of its area inside.
struct Indicator {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
};
struct LogAbs {};
struct SinLogAbs {};
struct PowerAbs {
  double alpha = 0.5;
};
/// Real random trigonometric polynomial with lattice frequencies in
/// low_cut <= |xi| <= cutoff. Values at a fixed x do not depend on m.
struct BandLimitedRandom {
  std::uint64_t seed = 0;
  double cutoff = 1.0;
  double low_cut = 0.0;
};
struct Constant {
  double value = 1.0;
};
/// The coordinate x_axis itself, a sawtooth on the torus.
struct Coordinate {
  int axis = 0;
};
struct Monomial {
  int axis = 0;
  int degree = 2;
};

using FunctionSpec = std::variant<Gaussian, Bump, Indicator, LogAbs, SinLogAbs, PowerAbs,
                                  BandLimitedRandom, Constant, Coordinate, Monomial>;

namespace detail {

inline double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

inline SampledFunction sample_band_limited(const BandLimitedRandom& d, const Grid& g) {
  if (!(d.cutoff > 0) || d.low_cut < 0 || d.low_cut > d.cutoff)
    throw std::invalid_argument("band_limited_random: need 0 <= low_cut <= cutoff, cutoff > 0");
  const long K = static_cast<long>(std::floor(d.cutoff * 2.0 * g.L + 1e-9));
  if (K >= static_cast<long>(g.m / 2))
    throw std::invalid_argument("band_limited_random: cutoff beyond the grid's Nyquist frequency");
  std::mt19937_64 rng(d.seed);
  std::normal_distribution<double> normal;
  struct Mode {
    long k0, k1;
    cplx c;
  };
  std::vector<Mode> modes;
  auto included = [&](long k0, long k1) {
    if (k0 == 0 && k1 == 0) return d.low_cut == 0.0;
    const double xi = std::hypot(double(k0), double(k1)) * g.fundamental();
    return xi <= d.cutoff + 1e-12 && xi >= d.low_cut - 1e-12;
  };
  if (g.n == 1) {
    for (long k = 0; k <= K; ++k)
      if (included(k, 0)) {
        const double a = normal(rng), b = normal(rng);
        modes.push_back({k, 0, {a, b}});
      }
  } else {
    for (long k0 = -K; k0 <= K; ++k0)
      for (long k1 = 0; k1 <= K; ++k1) {
        if (k1 == 0 && k0 < 0) continue;
        if (!included(k0, k1)) continue;
        const double a = normal(rng), b = normal(rng);
        modes.push_back({k0, k1, {a, b}});
      }
  }
  if (modes.empty()) throw std::invalid_argument("band_limited_random: empty frequency band");
  const double amp = 1.0 / std::sqrt(static_cast<double>(modes.size()));
  const double N = static_cast<double>(g.size());
  std::vector<cplx> X(g.spectrum_size());
  const std::size_t half = g.m / 2 + 1;
  const long M = static_cast<long>(g.m);
  auto slot = [&](long k0, long k1) -> cplx& {
    if (g.n == 1) return X[static_cast<std::size_t>(k0)];
    return X[static_cast<std::size_t>((k0 % M + M) % M) * half + static_cast<std::size_t>(k1)];
  };
  for (const auto& md : modes) {
    // f(x) gets Re(c e^{2 pi i k.x / 2L}); x = -L + i h contributes (-1)^{k0+k1}.
    const double s = ((md.k0 + md.k1) % 2 == 0) ? 1.0 : -1.0;
    const cplx c = amp * md.c * s;
    if (md.k0 == 0 && md.k1 == 0) {
      slot(0, 0) += N * c.real();
    } else if (md.k1 == 0 && g.n == 2) {
      slot(md.k0, 0) += N * c / 2.0;
      slot(-md.k0, 0) += N * std::conj(c) / 2.0;
    } else {
      slot(md.k0, md.k1) += N * c / 2.0;
    }
  }
  return SampledFunction::from_real(g, fft::inverse(g.n, g.m, X));
}

}  // namespace detail

inline SampledFunction sample(const FunctionSpec& spec, const Grid& g) {
  SampledFunction f = SampledFunction::zeros(g);
  const double cap_r = g.h / 2.0;
  auto fill = [&](auto&& fn) {
    for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = fn(g.point(i), g.radius(i));
  };
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          if (!(d.sigma > 0)) throw std::invalid_argument("gaussian: sigma must be positive");
          const double norm = std::pow(2.0 * std::numbers::pi * d.sigma * d.sigma, -0.5 * g.n);
          fill([&](auto x, double) {
            const double r2 = (x[0] - d.center[0]) * (x[0] - d.center[0]) +
                              (g.n == 2 ? (x[1] - d.center[1]) * (x[1] - d.center[1]) : 0.0);
            return norm * std::exp(-r2 / (2 * d.sigma * d.sigma));
          });
        } else if constexpr (std::is_same_v<T, Bump>) {
          if (!(d.width > 0)) throw std::invalid_argument("bump: width must be positive");
          fill([&](auto x, double) {
            const double r2 = ((x[0] - d.center[0]) * (x[0] - d.center[0]) +
                               (g.n == 2 ? (x[1] - d.center[1]) * (x[1] - d.center[1]) : 0.0)) /
                              (d.width * d.width);
            return r2 < 1 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
          });
        } else if constexpr (std::is_same_v<T, Indicator>) {
          for (int a = 0; a < g.n; ++a)
            if (!(d.lo[a] <= d.hi[a])) throw std::invalid_argument("indicator: empty or inverted box");
          fill([&](auto x, double) {
            double frac = 1.0;
            for (int a = 0; a < g.n; ++a)
              frac *= detail::overlap(x[a] - g.h / 2, x[a] + g.h / 2, d.lo[a], d.hi[a]) / g.h;
            return frac;
          });
        } else if constexpr (std::is_same_v<T, LogAbs>) {
          fill([&](auto, double r) { return std::log(std::max(r, cap_r)); });
        } else if constexpr (std::is_same_v<T, SinLogAbs>) {
          fill([&](auto, double r) { return std::sin(std::log(std::max(r, cap_r))); });
        } else if constexpr (std::is_same_v<T, PowerAbs>) {
          if (!std::isfinite(d.alpha)) throw std::invalid_argument("power_abs: non-finite exponent");
          fill([&](auto, double r) { return std::pow(std::max(r, cap_r), d.alpha); });
        } else if constexpr (std::is_same_v<T, BandLimitedRandom>) {
          f = detail::sample_band_limited(d, g);
        } else if constexpr (std::is_same_v<T, Constant>) {
          fill([&](auto, double) { return d.value; });
        } else if constexpr (std::is_same_v<T, Coordinate>) {
          if (d.axis < 0 || d.axis >= g.n) throw std::invalid_argument("coordinate: axis out of range");
          fill([&](auto x, double) { return x[d.axis]; });
        } else if constexpr (std::is_same_v<T, Monomial>) {
          if (d.axis < 0 || d.axis >= g.n) throw std::invalid_argument("monomial: axis out of range");
          if (d.degree < 0) throw std::invalid_argument("monomial: negative degree is unbounded");
          fill([&](auto x, double) { return std::pow(x[d.axis], d.degree); });
        }
      },
      spec);
  return f;
}

inline std::string describe(const FunctionSpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        std::ostringstream os;
        os << std::setprecision(6);
        if constexpr (std::is_same_v<T, Gaussian>)
          os << "gaussian(sigma=" << d.sigma << ",center=" << d.center[0] << ":" << d.center[1] << ")";
        else if constexpr (std::is_same_v<T, Bump>)
          os << "bump(center=" << d.center[0] << ":" << d.center[1] << ",width=" << d.width << ")";
        else if constexpr (std::is_same_v<T, Indicator>)
          os << "indicator(" << d.lo[0] << ":" << d.lo[1] << "," << d.hi[0] << ":" << d.hi[1] << ")";
        else if constexpr (std::is_same_v<T, LogAbs>)
          os << "log_abs";
        else if constexpr (std::is_same_v<T, SinLogAbs>)
          os << "sin_log_abs";
        else if constexpr (std::is_same_v<T, PowerAbs>)
          os << "power_abs(" << d.alpha << ")";
        else if constexpr (std::is_same_v<T, BandLimitedRandom>)
          os << "band_limited_random(seed=" << d.seed << ",cutoff=" << d.cutoff << ",low_cut=" << d.low_cut << ")";
        else if constexpr (std::is_same_v<T, Constant>)
          os << "constant(" << d.value << ")";
        else if constexpr (std::is_same_v<T, Coordinate>)
          os << "coordinate(" << d.axis << ")";
        else if constexpr (std::is_same_v<T, Monomial>)
          os << "monomial(" << d.axis << "," << d.degree << ")";
        return os.str();
      },
      spec);
}

}  // namespace roughvar::grid
