#pragma once

// Rough kernels on the sphere and the sampled pieces built from them.

#include "roughvar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

namespace roughvar::kernels {

using grid::Grid;
using grid::SampledFunction;

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Continuous-domain tolerance under which a kernel is treated as mean-zero.
constexpr double cancellation_tolerance = 1e-10;

struct SphereKernel {
  int n = 1;
  /// n = 1: {Omega(+1), Omega(-1)}. n = 2: Omega at angles 2 pi k / size.
  std::vector<double> samples;
  double q = 2.0;
  double integral = 0.0;
  double cancellation_defect = 0.0;
  double l1 = 0.0;
  double lq = 0.0;
  /// Luxemburg norms in L(log+ L)^kappa, kappa = 1, 2, 3.
  std::array<double, 3> llogl{};

  double measure() const { return n == 1 ? 2.0 : two_pi; }
  double node_weight() const { return n == 1 ? 1.0 : two_pi / static_cast<double>(samples.size()); }
  double mean() const { return integral / measure(); }
  bool cancelling() const { return cancellation_defect <= cancellation_tolerance; }
  double max_abs() const {
    double mx = 0;
    for (double s : samples) mx = std::max(mx, std::abs(s));
    return mx;
  }
  double angle(std::size_t k) const { return two_pi * static_cast<double>(k) / static_cast<double>(samples.size()); }

  /// Omega at direction theta, periodic linear interpolation (n = 2).
  double at_angle(double theta) const {
    const double q_s = static_cast<double>(samples.size());
    double u = theta / two_pi * q_s;
    u -= q_s * std::floor(u / q_s);
    const double fl = std::floor(u);
    const double a = u - fl;
    const std::size_t i0 = static_cast<std::size_t>(fl) % samples.size();
    const std::size_t i1 = (i0 + 1) % samples.size();
    return (1 - a) * samples[i0] + a * samples[i1];
  }
  /// Cumulative integral table of the linear interpolant, in sample-index units (n = 2).
  std::vector<double> cumulative() const {
    std::vector<double> c(samples.size() + 1, 0.0);
    for (std::size_t k = 0; k < samples.size(); ++k)
      c[k + 1] = c[k] + 0.5 * (samples[k] + samples[(k + 1) % samples.size()]);
    return c;
  }
  /// Mean of the interpolant over [theta - half_width, theta + half_width], given cumulative().
  double cell_average(double theta, double half_width, const std::vector<double>& cum) const {
    const double q_s = static_cast<double>(samples.size());
    const double du = std::min(half_width, two_pi / 2) / two_pi * q_s;
    if (du < 1e-9) return at_angle(theta);
    auto integral_to = [&](double u) {
      const double wraps = std::floor(u / q_s);
      u -= q_s * wraps;
      const double fl = std::floor(u);
      const double a = u - fl;
      const std::size_t i0 = static_cast<std::size_t>(fl) % samples.size();
      const std::size_t i1 = (i0 + 1) % samples.size();
      return wraps * cum.back() + cum[i0] + a * samples[i0] + 0.5 * a * a * (samples[i1] - samples[i0]);
    };
    const double u = theta / two_pi * q_s;
    return (integral_to(u + du) - integral_to(u - du)) / (2 * du);
  }
  /// Omega(y / |y|) for y != 0.
  double at(std::array<double, 2> y) const {
    if (n == 1) return y[0] > 0 ? samples[0] : samples[1];
    return at_angle(std::atan2(y[1], y[0]));
  }
};

namespace detail {

inline double luxemburg(const std::vector<double>& s, double w, double kappa) {
  double mx = 0;
  for (double v : s) mx = std::max(mx, std::abs(v));
  if (mx == 0) return 0.0;
  auto modular = [&](double lambda) {
    double acc = 0;
    for (double v : s) {
      const double t = std::abs(v) / lambda;
      if (t > 0) acc += t * std::pow(std::log(std::numbers::e + t), kappa) * w;
    }
    return acc;
  };
  double lo = 1e-300, hi = mx * (s.size() * w + 1.0) * 4.0 + 1.0;
  while (modular(hi) > 1) hi *= 2;
  lo = hi;
  while (modular(lo) <= 1 && lo > 1e-300) lo /= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (modular(mid) > 1)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return hi;
}

}  // namespace detail

inline SphereKernel make_sphere_kernel(int n, std::vector<double> samples, double q = 2.0) {
  if (n != 1 && n != 2) throw std::invalid_argument("sphere kernel: n must be 1 or 2");
  if (n == 1 && samples.size() != 2) throw std::invalid_argument("sphere kernel: n = 1 needs exactly 2 samples");
  if (n == 2 && samples.size() < 64) throw std::invalid_argument("sphere kernel: n = 2 needs at least 64 samples");
  if (!(q >= 1)) throw std::invalid_argument("sphere kernel: q must be >= 1");
  for (double s : samples)
    if (!std::isfinite(s)) throw std::invalid_argument("sphere kernel: non-finite sample");
  SphereKernel k;
  k.n = n;
  k.q = q;
  k.samples = std::move(samples);
  const double w = k.node_weight();
  double sq = 0;
  for (double s : k.samples) {
    k.integral += s * w;
    k.l1 += std::abs(s) * w;
    sq += std::pow(std::abs(s), q) * w;
  }
  k.lq = std::pow(sq, 1.0 / q);
  k.cancellation_defect = std::abs(k.integral);
  for (int kappa = 1; kappa <= 3; ++kappa) k.llogl[kappa - 1] = detail::luxemburg(k.samples, w, kappa);
  return k;
}

// Sphere descriptors. `resolution` is the angular sample count for n = 2.

struct OddSign {
  std::size_t resolution = 256;
};
struct CosK {
  int k = 1;
  std::size_t resolution = 256;
};
struct ConstantOmega {
  double value = 1.0;
  std::size_t resolution = 256;
};
/// c0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta).
struct Trig {
  double c0 = 0.0;
  std::vector<double> cos;
  std::vector<double> sin;
  std::size_t resolution = 256;
};
/// n = 1 only: Omega(+1) = plus, Omega(-1) = minus.
struct Pair {
  double plus = 1.0;
  double minus = -1.0;
};
/// Odd spike s(theta) - s(theta - pi), s(theta) = 1 / (|theta| (1 + c log(1/|theta|))^(kappa+2))
/// on |theta| <= 1, with |theta| floored at half the angular spacing.
struct LloglSpike {
  int kappa = 3;
  double c = 0.1;
  std::size_t resolution = 4096;
};

using OmegaSpec = std::variant<OddSign, CosK, ConstantOmega, Trig, Pair, LloglSpike>;

/// Spike profile for |theta| in (0, 1]; zero beyond.
inline double spike_profile(double abs_theta, int kappa, double c) {
  if (abs_theta > 1.0) return 0.0;
  return 1.0 / (abs_theta * std::pow(1.0 + c * std::log(1.0 / abs_theta), kappa + 2));
}

inline SphereKernel make_omega(const OmegaSpec& spec, int n) {
  return std::visit(
      [n](const auto& d) -> SphereKernel {
        using T = std::decay_t<decltype(d)>;
        auto angular = [&](std::size_t q_s, auto&& fn) {
          if (q_s < 64) throw std::invalid_argument("omega: resolution must be at least 64");
          std::vector<double> s(q_s);
          for (std::size_t k = 0; k < q_s; ++k) s[k] = fn(two_pi * double(k) / double(q_s));
          return s;
        };
        if constexpr (std::is_same_v<T, OddSign>) {
          if (n == 1) return make_sphere_kernel(1, {1.0, -1.0});
          return make_sphere_kernel(2, angular(d.resolution, [](double th) {
                                      const double c = std::cos(th);
                                      return std::abs(c) < 1e-12 ? 0.0 : (c > 0 ? 1.0 : -1.0);
                                    }));
        } else if constexpr (std::is_same_v<T, CosK>) {
          if (n != 2) throw std::invalid_argument("cos_k: defined for n = 2");
          return make_sphere_kernel(2, angular(d.resolution, [&](double th) { return std::cos(d.k * th); }));
        } else if constexpr (std::is_same_v<T, ConstantOmega>) {
          if (n == 1) return make_sphere_kernel(1, {d.value, d.value});
          return make_sphere_kernel(2, angular(d.resolution, [&](double) { return d.value; }));
        } else if constexpr (std::is_same_v<T, Trig>) {
          if (n != 2) throw std::invalid_argument("trig: defined for n = 2");
          return make_sphere_kernel(2, angular(d.resolution, [&](double th) {
                                      double v = d.c0;
                                      for (std::size_t k = 0; k < d.cos.size(); ++k) v += d.cos[k] * std::cos((k + 1.0) * th);
                                      for (std::size_t k = 0; k < d.sin.size(); ++k) v += d.sin[k] * std::sin((k + 1.0) * th);
                                      return v;
                                    }));
        } else if constexpr (std::is_same_v<T, Pair>) {
          if (n != 1) throw std::invalid_argument("pair: defined for n = 1");
          return make_sphere_kernel(1, {d.plus, d.minus});
        } else if constexpr (std::is_same_v<T, LloglSpike>) {
          if (n != 2) throw std::invalid_argument("llogl_spike: defined for n = 2");
          if (d.kappa < 0) throw std::invalid_argument("llogl_spike: kappa must be nonnegative");
          if (d.resolution < 64 || d.resolution % 2 != 0)
            throw std::invalid_argument("llogl_spike: resolution must be even and at least 64");
          if (!(d.c > 0) || d.c * (d.kappa + 2) >= 1)
            throw std::invalid_argument("llogl_spike: need 0 < c (kappa + 2) < 1");
          const std::size_t q_s = d.resolution, half = q_s / 2;
          const double floor_theta = std::numbers::pi / double(q_s);
          auto s = [&](double th) {
            th = std::remainder(th, two_pi);
            return spike_profile(std::max(std::abs(th), floor_theta), d.kappa, d.c);
          };
          std::vector<double> v(q_s);
          for (std::size_t k = 0; k < half; ++k) {
            const double th = two_pi * double(k) / double(q_s);
            v[k] = s(th) - s(th - std::numbers::pi);
            v[k + half] = -v[k];
          }
          return make_sphere_kernel(2, std::move(v));
        }
      },
      spec);
}

inline SphereKernel make_omega(const OmegaSpec& spec, const Grid& g) { return make_omega(spec, g.n); }

inline std::string describe(const OmegaSpec& spec) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, OddSign>) return "odd_sign";
        else if constexpr (std::is_same_v<T, CosK>) return "cos_" + std::to_string(d.k);
        else if constexpr (std::is_same_v<T, ConstantOmega>) return "constant(" + std::to_string(d.value) + ")";
        else if constexpr (std::is_same_v<T, Trig>) return "trig";
        else if constexpr (std::is_same_v<T, Pair>) return "pair";
        else return "llogl_spike(" + std::to_string(d.kappa) + ")";
      },
      spec);
}

struct MeanSplit {
  SphereKernel omega0;
  double c = 0.0;
};

/// Omega = Omega_0 + c with c the sphere mean and Omega_0 mean-zero.
inline MeanSplit mean_split(const SphereKernel& omega) {
  const double w = omega.node_weight();
  const double c = omega.integral / omega.measure();
  std::vector<double> s = omega.samples;
  for (auto& v : s) v -= c;
  double resid = 0;
  for (double v : s) resid += v * w;
  const double c2 = resid / omega.measure();
  for (auto& v : s) v -= c2;
  return {make_sphere_kernel(omega.n, std::move(s), omega.q), c + c2};
}

struct LevelDecomposition {
  std::vector<SphereKernel> pieces;
  /// Sphere measure of each level set E_d.
  std::vector<double> level_measure;
  /// Integral of Omega over E_d before recentring.
  std::vector<double> level_integral;
  /// Integral of |Omega| over {|Omega| >= 2^(d_max + 1)}, lumped into the last piece.
  double tail_mass = 0.0;
  int d_max = 0;
};

/// Level index of a value: 0 for |v| < 2, d for 2^d <= |v| < 2^(d+1), capped at d_max.
inline int level_of(double v, int d_max) {
  const double a = std::abs(v);
  if (a < 2.0) return 0;
  const int d = static_cast<int>(std::floor(std::log2(a)));
  int dd = d;
  if (std::ldexp(1.0, dd) > a) --dd;
  if (std::ldexp(1.0, dd + 1) <= a) ++dd;
  return std::min(std::max(dd, 1), d_max);
}

inline LevelDecomposition levelset_decompose(const SphereKernel& omega, int d_max) {
  if (d_max < 0) throw std::invalid_argument("levelset_decompose: d_max must be nonnegative");
  if (!omega.cancelling()) throw std::invalid_argument("levelset_decompose: non-cancelling kernel");
  LevelDecomposition out;
  out.d_max = d_max;
  const std::size_t levels = static_cast<std::size_t>(d_max) + 1;
  const double w = omega.node_weight();
  std::vector<std::vector<double>> raw(levels, std::vector<double>(omega.samples.size(), 0.0));
  out.level_measure.assign(levels, 0.0);
  out.level_integral.assign(levels, 0.0);
  const double tail_threshold = std::ldexp(1.0, d_max + 1);
  for (std::size_t k = 0; k < omega.samples.size(); ++k) {
    const double v = omega.samples[k];
    const auto d = static_cast<std::size_t>(level_of(v, d_max));
    raw[d][k] = v;
    out.level_measure[d] += w;
    out.level_integral[d] += v * w;
    if (std::abs(v) >= tail_threshold) out.tail_mass += std::abs(v) * w;
  }
  for (std::size_t d = 0; d < levels; ++d) {
    const double shift = out.level_integral[d] / omega.measure();
    for (auto& v : raw[d]) v -= shift;
    out.pieces.push_back(make_sphere_kernel(omega.n, std::move(raw[d]), omega.q));
  }
  return out;
}

// Sampled pieces.

enum class PieceKind { annulus, leveled, short_annulus, mollifier };

inline std::string to_string(PieceKind k) {
  switch (k) {
    case PieceKind::annulus: return "annulus";
    case PieceKind::leveled: return "leveled";
    case PieceKind::short_annulus: return "short";
    case PieceKind::mollifier: return "mollifier";
  }
  return "?";
}

struct KernelPiece {
  PieceKind kind = PieceKind::annulus;
  int scale = 0;
  std::optional<int> level;
  std::optional<double> t;
  SampledFunction field;
  /// Mean of Omega removed by the discrete repair (0 when none was applied).
  double repair_shift = 0.0;
};

/// Fraction of the radial cell of a point at radius r lying inside [a, b).
inline double radial_weight(double r, double h, double a, double b) {
  const double lo = std::max(r - h / 2, 0.0), hi = r + h / 2;
  const double ov = std::max(0.0, std::min(hi, b) - std::max(lo, a));
  return ov / (hi - lo);
}

struct ShellSample {
  std::vector<double> values;
  double repair_shift = 0.0;
};

/// Omega(y') |y|^-homogeneity on the shell a <= |y| < b, radial cells weighted
/// by their overlap, angular cells by the mean of Omega across them. With repair set, Omega is shifted on the sampled shell so
/// the discrete integral vanishes. The origin (only reachable when a < h/2)
/// takes the sphere mean of Omega and requires homogeneity 0.
inline ShellSample shell_sample(const Grid& g, const SphereKernel& omega, double a, double b, int homogeneity,
                                bool repair) {
  if (omega.n != g.n) throw std::invalid_argument("kernel and grid dimensions differ");
  ShellSample out;
  out.values.assign(g.size(), 0.0);
  if (!(b > a)) return out;
  const long span_cells = static_cast<long>(std::ceil((b + g.h) / g.h)) + 1;
  const long c = static_cast<long>(g.m / 2);
  const long lo = std::max(0L, c - span_cells), hi = std::min(static_cast<long>(g.m) - 1, c + span_cells);
  std::vector<std::size_t> idx;
  std::vector<double> dens;  // w / |y|^homogeneity
  bool has_origin = false;
  const std::vector<double> cum = g.n == 2 ? omega.cumulative() : std::vector<double>{};
  auto visit = [&](std::size_t id, std::array<double, 2> y, double r) {
    const double w = radial_weight(r, g.h, a, b);
    if (w <= 0) return;
    if (r == 0) {
      if (homogeneity != 0) throw std::invalid_argument("shell includes the origin of a singular kernel");
      out.values[id] = w * omega.mean();
      has_origin = true;
      return;
    }
    const double d = w / std::pow(r, homogeneity);
    // In 2-D each cell sees the angular mean of Omega over its width h / r.
    out.values[id] = d * (g.n == 1 ? omega.at(y) : omega.cell_average(std::atan2(y[1], y[0]), g.h / (2 * r), cum));
    idx.push_back(id);
    dens.push_back(d);
  };
  if (g.n == 1) {
    for (long i = lo; i <= hi; ++i) {
      const double x = g.coord(i);
      visit(static_cast<std::size_t>(i), {x, 0.0}, std::abs(x));
    }
  } else {
    for (long i = lo; i <= hi; ++i)
      for (long j = lo; j <= hi; ++j) {
        const double x = g.coord(i), y = g.coord(j);
        visit(static_cast<std::size_t>(i) * g.m + static_cast<std::size_t>(j), {x, y}, std::hypot(x, y));
      }
  }
  if (repair && !has_origin && !idx.empty()) {
    double sv = 0, sd = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      sv += out.values[idx[k]];
      sd += dens[k];
    }
    const double shift = sv / sd;
    for (std::size_t k = 0; k < idx.size(); ++k) out.values[idx[k]] -= shift * dens[k];
    out.repair_shift = shift;
  }
  return out;
}

inline void require_resolvable_annulus(int j, const Grid& g) {
  if (std::ldexp(1.0, j + 1) > g.L / 2 * (1 + 1e-12) || std::ldexp(1.0, j) < g.h * (1 - 1e-12))
    throw std::invalid_argument("annulus unresolvable at this grid (need h <= 2^j and 2^(j+1) <= L/2)");
}

/// nu_j (or nu_{j,t}, nu_{j,d}) sampled on the grid.
inline KernelPiece annulus_kernel(const SphereKernel& omega, int j, const Grid& g, std::optional<double> t = {},
                                  std::optional<int> d = {}) {
  require_resolvable_annulus(j, g);
  if (t && !(*t >= 1.0 && *t < 2.0)) throw std::invalid_argument("annulus_kernel: t must lie in [1, 2)");
  KernelPiece piece;
  piece.scale = j;
  piece.t = t;
  piece.level = d;
  piece.kind = t ? PieceKind::short_annulus : (d ? PieceKind::leveled : PieceKind::annulus);
  const SphereKernel* om = &omega;
  LevelDecomposition levels;
  if (d) {
    if (*d < 0) throw std::invalid_argument("annulus_kernel: negative level");
    levels = levelset_decompose(omega, *d + 1);
    om = &levels.pieces[static_cast<std::size_t>(*d)];
  }
  const double a = std::ldexp(t.value_or(1.0), j), b = std::ldexp(1.0, j + 1);
  auto s = shell_sample(g, *om, a, b, g.n, om->cancelling());
  piece.field = SampledFunction::from_real(g, s.values);
  piece.repair_shift = s.repair_shift;
  return piece;
}

/// Cosine-tapered mollifier profile: 1 on [0, 2], 0 on [4, inf).
inline double mollifier_profile(double rho) {
  if (rho <= 2.0) return 1.0;
  if (rho >= 4.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (rho - 2.0) / 2.0));
}

inline bool mollifier_representable(int k, const Grid& g) {
  return std::ldexp(1.0, 2 - k) <= g.nyquist() * (1 + 1e-12) && std::ldexp(1.0, 1 - k) >= g.fundamental() * (1 - 1e-12);
}

inline std::vector<grid::cplx> mollifier_symbol(int k, const Grid& g) {
  return grid::radial_symbol(g, [k](double xi) { return mollifier_profile(std::ldexp(xi, k)); });
}

inline KernelPiece mollifier(int k, const Grid& g) {
  if (!mollifier_representable(k, g)) throw std::invalid_argument("mollifier band outside representable frequencies");
  KernelPiece piece;
  piece.kind = PieceKind::mollifier;
  piece.scale = k;
  piece.field = SampledFunction::from_real(g, grid::kernel_from_symbol(g, mollifier_symbol(k, g)));
  return piece;
}

struct DyadicBand {
  int lo = 0;  // first bin [2^lo, 2^(lo+1))
  int hi = 0;  // bins up to [2^(hi-1), 2^hi)
};

struct PowerFit {
  double C = 0.0;
  double exponent = 0.0;
  double r2 = 0.0;
  std::size_t bins = 0;
  bool conclusive = false;
};

struct DecayReport {
  /// High-frequency fit |S| ~ C |2^j xi|^-gamma.
  double C = 0.0;
  double gamma = 0.0;
  double r2 = 0.0;
  bool conclusive = false;
  /// Low-frequency fit |S| ~ C |2^j xi|^slope.
  PowerFit low;
  DyadicBand band;
  /// Frequency and value of the maximal |S| in each nonempty bin.
  std::vector<std::pair<double, double>> bins;
  bool mollifier = false;
  double passband_error = 0.0;
  double stopband_max = 0.0;
};

inline PowerFit fit_power(const std::vector<std::pair<double, double>>& pts) {
  PowerFit f;
  std::vector<std::pair<double, double>> lp;
  for (auto [x, y] : pts)
    if (x > 0 && y > 0) lp.emplace_back(std::log2(x), std::log2(y));
  f.bins = lp.size();
  if (lp.size() < 3) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : lp) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double N = double(lp.size());
  const double den = N * sxx - sx * sx;
  f.exponent = (N * sxy - sx * sy) / den;
  const double icpt = (sy - f.exponent * sx) / N;
  f.C = std::exp2(icpt);
  double ss_res = 0, ss_tot = 0;
  const double my = sy / N;
  for (auto [x, y] : lp) {
    ss_res += std::pow(y - (icpt + f.exponent * x), 2);
    ss_tot += std::pow(y - my, 2);
  }
  f.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
  f.conclusive = f.r2 >= 0.9;
  return f;
}

/// Dyadic envelope of the piece's Fourier symbol and power-law fits of its
/// low-frequency growth and high-frequency decay.
inline DecayReport symbol_decay(const KernelPiece& piece, DyadicBand band) {
  if (band.hi - band.lo < 3) throw std::invalid_argument("symbol_decay: band narrower than 3 dyadic steps");
  const Grid& g = piece.field.grid;
  const auto S = grid::kernel_symbol(g, piece.field.real_part());
  const std::size_t nb = static_cast<std::size_t>(band.hi - band.lo);
  std::vector<double> env(nb, -1.0), at(nb, 0.0);
  for (std::size_t k = 0; k < S.size(); ++k) {
    const double xi = g.frequency_norm(k);
    if (xi <= 0) continue;
    const int b = static_cast<int>(std::floor(std::log2(xi)));
    if (b < band.lo || b >= band.hi) continue;
    const auto i = static_cast<std::size_t>(b - band.lo);
    if (std::abs(S[k]) > env[i]) {
      env[i] = std::abs(S[k]);
      at[i] = xi;
    }
  }
  DecayReport rep;
  rep.band = band;
  for (std::size_t i = 0; i < nb; ++i)
    if (env[i] >= 0) rep.bins.emplace_back(at[i], env[i]);
  if (piece.kind == PieceKind::mollifier) {
    rep.mollifier = true;
    for (std::size_t k = 0; k < S.size(); ++k) {
      const double rho = std::ldexp(g.frequency_norm(k), piece.scale);
      if (rho <= 2.0) rep.passband_error = std::max(rep.passband_error, std::abs(S[k] - 1.0));
      if (rho >= 4.0) rep.stopband_max = std::max(rep.stopband_max, std::abs(S[k]));
    }
    return rep;
  }
  const double s = std::ldexp(1.0, piece.scale);
  std::vector<std::pair<double, double>> lo_pts, hi_pts;
  for (auto [x, y] : rep.bins) {
    const double floor_xi = std::exp2(std::floor(std::log2(x)));
    if (2 * floor_xi * s <= 1.0 / 16) lo_pts.emplace_back(x * s, y);
    if (floor_xi * s >= 1.0) hi_pts.emplace_back(x * s, y);
  }
  rep.low = fit_power(lo_pts);
  const PowerFit high = fit_power(hi_pts);
  rep.C = high.C;
  rep.gamma = -high.exponent;
  rep.r2 = high.r2;
  rep.conclusive = high.conclusive;
  return rep;
}

}  // namespace roughvar::kernels
