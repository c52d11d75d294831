#pragma once

// Truncated rough singular integrals, rough averages, their commutators with
// a symbol b, and families of them indexed by a truncation ladder.

#include "roughvar/kernels.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <string>
#include <variant>

namespace roughvar::operators {

using grid::cplx;
using grid::Grid;
using grid::SampledFunction;
using kernels::KernelPiece;
using kernels::SphereKernel;

struct Sio {
  SphereKernel omega;
  double eps = 0.0;
};
struct Avg {
  SphereKernel omega;
  double t = 0.0;
};
struct Mollifier {
  int k = 0;
};
struct Piece {
  KernelPiece piece;
};

using OperatorSpec = std::variant<Sio, Avg, Mollifier, Piece>;

/// Outer truncation radius of every singular kernel.
inline double outer_radius(const Grid& g) { return g.L / 2; }

inline bool is_dyadic(double r) {
  int e;
  return std::frexp(r, &e) == 0.5;
}

/// {a} plus every power of two strictly inside (a, b), plus {b}.
inline std::vector<double> dyadic_breakpoints(double a, double b) {
  std::vector<double> bp{a};
  int k = static_cast<int>(std::floor(std::log2(a))) + 1;
  while (std::ldexp(1.0, k) <= a) ++k;
  for (; std::ldexp(1.0, k) < b; ++k) bp.push_back(std::ldexp(1.0, k));
  bp.push_back(b);
  return bp;
}

/// Singular kernel on a <= |y| < b, split at dyadic radii, each part repaired.
inline std::vector<double> sio_shell(const Grid& g, const SphereKernel& omega, double a, double b) {
  std::vector<double> k(g.size(), 0.0);
  const auto bp = dyadic_breakpoints(a, b);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    auto s = kernels::shell_sample(g, omega, bp[i], bp[i + 1], g.n, true);
    for (std::size_t p = 0; p < k.size(); ++p) k[p] += s.values[p];
  }
  return k;
}

/// Unnormalized average kernel Omega(y') on a <= |y| < b.
inline std::vector<double> ball_shell(const Grid& g, const SphereKernel& omega, double a, double b) {
  return kernels::shell_sample(g, omega, a, b, 0, false).values;
}

inline void require_cancelling(const SphereKernel& omega) {
  if (!omega.cancelling())
    throw std::invalid_argument("kernel does not satisfy the cancellation condition (defect " +
                                std::to_string(omega.cancellation_defect) + ")");
}

inline void require_radius(const Grid& g, double r, const char* what) {
  if (!(r >= g.h * (1 - 1e-12) && r <= outer_radius(g) * (1 + 1e-12)))
    throw std::invalid_argument(std::string(what) + " out of range [h, L/2]");
}

inline std::vector<cplx> sio_symbol(const Grid& g, const SphereKernel& omega, double eps) {
  require_cancelling(omega);
  require_radius(g, eps, "truncation radius");
  return grid::kernel_symbol(g, sio_shell(g, omega, eps, outer_radius(g)));
}

inline std::vector<cplx> avg_symbol(const Grid& g, const SphereKernel& omega, double t) {
  require_radius(g, t, "averaging radius");
  auto k = ball_shell(g, omega, 0.0, t);
  const double s = std::pow(t, -g.n);
  for (auto& v : k) v *= s;
  return grid::kernel_symbol(g, k);
}

/// Half-spectrum symbol of a convolution operator.
inline std::vector<cplx> symbol(const OperatorSpec& spec, const Grid& g) {
  return std::visit(
      [&](const auto& op) -> std::vector<cplx> {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, Sio>) {
          return sio_symbol(g, op.omega, op.eps);
        } else if constexpr (std::is_same_v<T, Avg>) {
          return avg_symbol(g, op.omega, op.t);
        } else if constexpr (std::is_same_v<T, Mollifier>) {
          if (!kernels::mollifier_representable(op.k, g))
            throw std::invalid_argument("mollifier band outside representable frequencies");
          return kernels::mollifier_symbol(op.k, g);
        } else {
          if (!(op.piece.field.grid == g)) throw std::invalid_argument("grid mismatch");
          return grid::kernel_symbol(g, op.piece.field.real_part());
        }
      },
      spec);
}

inline SampledFunction apply(const OperatorSpec& spec, const SampledFunction& f) {
  return grid::apply_symbol(f, symbol(spec, f.grid));
}

inline SampledFunction truncated_sio(const SampledFunction& f, const SphereKernel& omega, double eps) {
  return apply(Sio{omega, eps}, f);
}

inline SampledFunction averaging(const SampledFunction& f, const SphereKernel& omega, double t) {
  return apply(Avg{omega, t}, f);
}

inline double binomial(int u, int i) {
  double c = 1;
  for (int k = 1; k <= i; ++k) c = c * (u - i + k) / k;
  return c;
}

inline void require_real_symbol(const SampledFunction& b) {
  if (!b.is_real()) throw std::invalid_argument("commutator symbol b must be real-tagged");
}

/// T((b(x) - b(.))^u f)(x) by binomial expansion, for a precomputed symbol.
inline SampledFunction commutator_with_symbol(std::span<const cplx> S, const SampledFunction& f,
                                              const SampledFunction& b, int u) {
  if (u < 0) throw std::invalid_argument("commutator order must be nonnegative");
  require_real_symbol(b);
  grid::require_same_grid(f, b);
  SampledFunction out = SampledFunction::zeros(f.grid, f.tag);
  SampledFunction bif = f;  // b^i f
  for (int i = 0; i <= u; ++i) {
    if (i > 0) bif = bif * b;
    const auto Tbif = grid::apply_symbol(bif, S);
    const double c = binomial(u, i) * ((i % 2) ? -1.0 : 1.0);
    for (std::size_t p = 0; p < out.size(); ++p)
      out.values[p] += c * std::pow(b.values[p].real(), u - i) * Tbif.values[p];
  }
  return out;
}

inline SampledFunction apply_commutator(const OperatorSpec& spec, const SampledFunction& f,
                                        const SampledFunction& b, int u) {
  if (u < 0) throw std::invalid_argument("commutator order must be nonnegative");
  return commutator_with_symbol(symbol(spec, f.grid), f, b, u);
}

// Truncation ladders.

struct TruncationLadder {
  std::vector<double> radii;
  /// Indices into radii of exact powers of two.
  std::vector<std::size_t> anchors;
  int fine_per_block = 0;

  std::size_t size() const { return radii.size(); }
};

inline TruncationLadder ladder_from_radii(std::vector<double> radii, int fine_per_block = 0) {
  if (radii.empty()) throw std::invalid_argument("ladder must be nonempty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0) || !std::isfinite(radii[i])) throw std::invalid_argument("ladder radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("ladder radii must be strictly increasing");
  }
  TruncationLadder l;
  l.radii = std::move(radii);
  l.fine_per_block = fine_per_block;
  for (std::size_t i = 0; i < l.radii.size(); ++i)
    if (is_dyadic(l.radii[i])) l.anchors.push_back(i);
  return l;
}

/// Radii 2^(k + i/fine) for k_min <= k < k_max, 0 <= i < fine, plus 2^k_max.
inline TruncationLadder make_ladder(int k_min, int k_max, int fine_per_block) {
  if (k_max < k_min) throw std::invalid_argument("ladder: k_max < k_min");
  if (fine_per_block < 1) throw std::invalid_argument("ladder: fine_per_block must be >= 1");
  std::vector<double> r;
  for (int k = k_min; k < k_max; ++k)
    for (int i = 0; i < fine_per_block; ++i)
      r.push_back(i == 0 ? std::ldexp(1.0, k) : std::exp2(k + double(i) / fine_per_block));
  r.push_back(std::ldexp(1.0, k_max));
  return ladder_from_radii(std::move(r), fine_per_block);
}

inline void validate_ladder(const TruncationLadder& l, const Grid& g) {
  if (l.radii.empty()) throw std::invalid_argument("ladder must be nonempty");
  if (l.radii.front() < g.h * (1 - 1e-12) || l.radii.back() > outer_radius(g) * (1 + 1e-12))
    throw std::invalid_argument("ladder radii must lie in [h, L/2] for this grid");
}

enum class FamilyKind { sio, avg };

inline std::string to_string(FamilyKind k) { return k == FamilyKind::sio ? "sio" : "avg"; }

/// Values T_{t_r; b, u} f(x) for every point x and ladder radius t_r, point-major.
struct FamilySample {
  Grid grid;
  TruncationLadder ladder;
  FamilyKind kind = FamilyKind::sio;
  int u = 0;
  std::string provenance;
  std::vector<double> re;
  std::vector<double> im;  // empty for real data

  std::size_t points() const { return grid.size(); }
  std::size_t length() const { return ladder.size(); }
  bool is_complex() const { return !im.empty(); }
  cplx at(std::size_t p, std::size_t r) const {
    const std::size_t k = p * length() + r;
    return {re[k], im.empty() ? 0.0 : im[k]};
  }
  SampledFunction column(std::size_t r) const {
    SampledFunction c = SampledFunction::zeros(grid, is_complex() ? grid::Tag::complex : grid::Tag::real);
    for (std::size_t p = 0; p < points(); ++p) c.values[p] = at(p, r);
    return c;
  }
};

/// Cumulative symbols of a family, built once and reusable across inputs.
class FamilyPlan {
 public:
  FamilyPlan(FamilyKind kind, const SphereKernel& omega, const TruncationLadder& ladder, const Grid& g)
      : kind_(kind), grid_(g), ladder_(ladder) {
    validate_ladder(ladder, g);
    if (kind == FamilyKind::sio) require_cancelling(omega);
    const std::size_t R = ladder.size();
    symbols_.resize(R);
    std::vector<cplx> acc(g.spectrum_size(), 0.0);
    if (kind == FamilyKind::sio) {
      // From the outside in: [t_r, L/2) = [t_r, t_{r+1}) + [t_{r+1}, L/2).
      double upper = outer_radius(g);
      for (std::size_t r = R; r-- > 0;) {
        const auto shell = grid::kernel_symbol(g, sio_shell(g, omega, ladder.radii[r], upper));
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += shell[k];
        symbols_[r] = acc;
        upper = ladder.radii[r];
      }
    } else {
      double lower = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        const auto shell = grid::kernel_symbol(g, ball_shell(g, omega, lower, ladder.radii[r]));
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += shell[k];
        const double s = std::pow(ladder.radii[r], -g.n);
        symbols_[r].resize(acc.size());
        for (std::size_t k = 0; k < acc.size(); ++k) symbols_[r][k] = acc[k] * s;
        lower = ladder.radii[r];
      }
    }
  }

  const Grid& grid() const { return grid_; }
  const TruncationLadder& ladder() const { return ladder_; }
  FamilyKind kind() const { return kind_; }
  const std::vector<cplx>& symbol(std::size_t r) const { return symbols_[r]; }

  FamilySample evaluate(const SampledFunction& f, const SampledFunction* b = nullptr, int u = 0) const {
    FamilySample fam;
    evaluate_into(fam, f, b, u);
    return fam;
  }

  /// As evaluate, reusing the storage already held by fam.
  void evaluate_into(FamilySample& fam, const SampledFunction& f, const SampledFunction* b = nullptr, int u = 0) const {
    if (!(f.grid == grid_)) throw std::invalid_argument("grid mismatch");
    if (u < 0) throw std::invalid_argument("commutator order must be nonnegative");
    if (u > 0 && b == nullptr) throw std::invalid_argument("commutator order > 0 needs a symbol b");
    if (b) {
      require_real_symbol(*b);
      grid::require_same_grid(f, *b);
    }
    const std::size_t N = grid_.size(), R = ladder_.size();
    fam.grid = grid_;
    fam.ladder = ladder_;
    fam.kind = kind_;
    fam.u = u;
    fam.re.assign(N * R, 0.0);
    if (!f.is_real()) fam.im.assign(N * R, 0.0);
    else fam.im.clear();

    std::vector<std::vector<double>> coef(static_cast<std::size_t>(u) + 1, std::vector<double>(N));
    for (int i = 0; i <= u; ++i) {
      const double c = binomial(u, i) * ((i % 2) ? -1.0 : 1.0);
      for (std::size_t p = 0; p < N; ++p)
        coef[i][p] = u == i ? c : c * std::pow(b->values[p].real(), u - i);
    }
    constexpr std::size_t block = 8;
    std::vector<std::vector<double>> cols(std::min(block, R), std::vector<double>(N));
    std::vector<cplx> X(grid_.spectrum_size());
    SampledFunction bif = f;
    for (int i = 0; i <= u; ++i) {
      if (i > 0) bif = bif * *b;
      auto accumulate = [&](const std::vector<double>& part, std::vector<double>& dest) {
        const auto F = fft::forward(grid_.n, grid_.m, part);
        std::vector<double> cf(coef[i]);
        for (auto& v : cf) v /= static_cast<double>(N);
        for (std::size_t r0 = 0; r0 < R; r0 += block) {
          const std::size_t nb = std::min(block, R - r0);
          for (std::size_t q = 0; q < nb; ++q) {
            const auto& S = symbols_[r0 + q];
            for (std::size_t k = 0; k < X.size(); ++k) X[k] = fft::mul(F[k], S[k]);
            fft::inverse_unscaled(grid_.n, grid_.m, X, cols[q]);
          }
          for (std::size_t p = 0; p < N; ++p) {
            double* d = dest.data() + p * R + r0;
            for (std::size_t q = 0; q < nb; ++q) d[q] += cf[p] * cols[q][p];
          }
        }
      };
      accumulate(bif.real_part(), fam.re);
      if (!f.is_real()) accumulate(bif.imag_part(), fam.im);
    }
  }

 private:
  FamilyKind kind_;
  Grid grid_;
  TruncationLadder ladder_;
  std::vector<std::vector<cplx>> symbols_;
};

inline FamilySample evaluate_family(FamilyKind kind, const SampledFunction& f, const SampledFunction* b, int u,
                                    const SphereKernel& omega, const TruncationLadder& ladder) {
  FamilyPlan plan(kind, omega, ladder, f.grid);
  return plan.evaluate(f, b, u);
}

/// sup over the ladder of |T_t f|, pointwise.
inline SampledFunction maximal(const FamilySample& fam) {
  if (fam.length() == 0) throw std::invalid_argument("maximal: empty ladder");
  SampledFunction out = SampledFunction::zeros(fam.grid);
  for (std::size_t p = 0; p < fam.points(); ++p) {
    double mx = 0;
    for (std::size_t r = 0; r < fam.length(); ++r) mx = std::max(mx, std::abs(fam.at(p, r)));
    out.values[p] = mx;
  }
  return out;
}

// Mollifier decomposition of the truncated operator.

struct ScaleRange {
  int j_min = 0;
  int j_max = -1;
};

/// Annulus scales j with h <= 2^j and 2^(j+1) <= L/2.
inline ScaleRange resolvable_scales(const Grid& g) {
  ScaleRange s;
  s.j_min = static_cast<int>(std::ceil(std::log2(g.h) - 1e-12));
  s.j_max = static_cast<int>(std::floor(std::log2(outer_radius(g)) + 1e-12)) - 1;
  return s;
}

/// Relative L2 distance between T_{Omega,2^k} f and the mollified
/// decomposition truncated to |s| <= s_range.
inline double decomposition_residual(const SampledFunction& f, const SphereKernel& omega, int k, int s_range) {
  const Grid& g = f.grid;
  require_cancelling(omega);
  if (s_range < 0) throw std::invalid_argument("s_range must be nonnegative");
  const auto J = resolvable_scales(g);
  if (k < J.j_min || k > J.j_max) throw std::invalid_argument("scale k unresolvable at this grid");
  if (!kernels::mollifier_representable(k, g)) throw std::invalid_argument("mollifier scale k unrepresentable");
  const auto phi = kernels::mollifier_symbol(k, g);
  const std::size_t K = g.spectrum_size();
  std::vector<std::vector<cplx>> nu;
  for (int j = J.j_min; j <= J.j_max; ++j)
    nu.push_back(grid::kernel_symbol(g, kernels::annulus_kernel(omega, j, g).field.real_part()));
  auto nu_at = [&](int j) -> const std::vector<cplx>& { return nu[static_cast<std::size_t>(j - J.j_min)]; };
  std::vector<cplx> full(K, 0.0), lhs(K, 0.0), rhs(K, 0.0);
  for (int j = J.j_min; j <= J.j_max; ++j)
    for (std::size_t q = 0; q < K; ++q) {
      full[q] += nu_at(j)[q];
      if (j >= k) lhs[q] += nu_at(j)[q];
    }
  for (std::size_t q = 0; q < K; ++q) rhs[q] = phi[q] * full[q];
  for (int s = 0; s <= s_range; ++s) {
    if (k + s <= J.j_max)
      for (std::size_t q = 0; q < K; ++q) rhs[q] += (1.0 - phi[q]) * nu_at(k + s)[q];
    if (s > 0 && k - s >= J.j_min)
      for (std::size_t q = 0; q < K; ++q) rhs[q] -= phi[q] * nu_at(k - s)[q];
  }
  const auto L = grid::apply_symbol(f, lhs);
  const auto Rr = grid::apply_symbol(f, rhs);
  const double nl = grid::lp_norm(L, 2);
  if (nl == 0) return 0.0;
  return grid::lp_norm(L - Rr, 2) / nl;
}

// Contour representation of the first-order commutator.

inline double oscillation(const SampledFunction& b) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : b.values) {
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  return hi - lo;
}

/// Trapezoidal value of (1 / 2 pi eps) int_0^{2pi} exp(eps e^{i th} delta) e^{-i th} d th, which equals delta.
inline cplx contour_difference(double delta, double eps, int n_theta) {
  if (!(eps > 0) || n_theta < 8) throw std::invalid_argument("contour: need eps > 0 and n_theta >= 8");
  cplx acc = 0;
  for (int k = 0; k < n_theta; ++k) {
    const double th = kernels::two_pi * k / n_theta;
    const cplx z = eps * std::polar(1.0, th);
    acc += std::exp(z * delta) * std::polar(1.0, -th);
  }
  return acc / (double(n_theta) * eps);
}

inline SampledFunction cauchy_commutator(const OperatorSpec& spec, const SampledFunction& f, const SampledFunction& b,
                                         double eps_c, int n_theta) {
  if (!(eps_c > 0)) throw std::invalid_argument("contour radius must be positive");
  if (n_theta < 8) throw std::invalid_argument("contour quadrature needs at least 8 nodes");
  require_real_symbol(b);
  grid::require_same_grid(f, b);
  if (eps_c * oscillation(b) > 50) throw std::domain_error("contour radius times oscillation of b exceeds 50");
  const auto S = symbol(spec, f.grid);
  SampledFunction acc = SampledFunction::zeros(f.grid, grid::Tag::complex);
  SampledFunction h = f;
  h.tag = grid::Tag::complex;
  for (int k = 0; k < n_theta; ++k) {
    const double th = kernels::two_pi * k / n_theta;
    const cplx z = eps_c * std::polar(1.0, th);
    for (std::size_t p = 0; p < h.size(); ++p) h.values[p] = f.values[p] * std::exp(-z * b.values[p].real());
    const auto Th = grid::apply_symbol(h, S);
    const cplx rot = std::polar(1.0, -th);
    for (std::size_t p = 0; p < acc.size(); ++p) acc.values[p] += Th.values[p] * std::exp(z * b.values[p].real()) * rot;
  }
  const double scale = 1.0 / (double(n_theta) * eps_c);
  for (auto& v : acc.values) v *= scale;
  if (f.is_real()) return acc.as_real();
  return acc;
}

// Spherical means at radius 2^j t.

namespace detail {

inline std::vector<std::pair<std::array<double, 2>, double>> sphere_nodes(const SphereKernel& omega) {
  std::vector<std::pair<std::array<double, 2>, double>> nodes;
  if (omega.n == 1) {
    nodes.push_back({{1.0, 0.0}, omega.samples[0]});
    nodes.push_back({{-1.0, 0.0}, omega.samples[1]});
  } else {
    for (std::size_t k = 0; k < omega.samples.size(); ++k) {
      const double th = omega.angle(k);
      nodes.push_back({{std::cos(th), std::sin(th)}, omega.samples[k]});
    }
  }
  return nodes;
}

inline SampledFunction sphere_mean_impl(const SampledFunction& f, const SphereKernel& omega, int j, double t,
                                        bool absolute) {
  const Grid& g = f.grid;
  if (omega.n != g.n) throw std::invalid_argument("kernel and grid dimensions differ");
  if (!(t >= 1.0 && t < 2.0)) throw std::invalid_argument("t must lie in [1, 2)");
  const double r = std::ldexp(t, j);
  if (r > outer_radius(g) * (1 + 1e-12)) throw std::invalid_argument("sphere radius exceeds L/2");
  SampledFunction out = SampledFunction::zeros(g, absolute ? grid::Tag::real : f.tag);
  const double w = omega.node_weight();
  const SampledFunction src = absolute ? grid::map(f, [](cplx v) { return cplx(std::abs(v)); }) : f;
  for (const auto& [y, om] : sphere_nodes(omega)) {
    if (om == 0) continue;
    const auto s = grid::shifted(src, {r * y[0], r * y[1]});
    const double c = (absolute ? std::abs(om) : om) * w;
    for (std::size_t p = 0; p < out.size(); ++p) out.values[p] += c * s.values[p];
  }
  const double sc = (absolute ? 1.0 : -1.0) / t;
  for (auto& v : out.values) v *= sc;
  return out;
}

}  // namespace detail

/// d/dt of the short truncation T_{j,t} f: -(1/t) int Omega(y') f(x - 2^j t y') d sigma.
inline SampledFunction sphere_mean_derivative(const SampledFunction& f, const SphereKernel& omega, int j, double t) {
  return detail::sphere_mean_impl(f, omega, j, t, false);
}

/// Companion positive mean (1/t) int |Omega(y')| |f(x - 2^j t y')| d sigma.
inline SampledFunction sphere_mean_abs(const SampledFunction& f, const SphereKernel& omega, int j, double t) {
  return detail::sphere_mean_impl(f, omega, j, t, true);
}

}  // namespace roughvar::operators
