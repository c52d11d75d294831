#pragma once

// Periodic sampled fields on the flat torus [-L, L)^n, n in {1, 2}.
//
// Points sit at x_i = -L + i h with h = 2L/m, so the origin is index m/2 on
// every axis. Convolutions are periodic and scaled by h^n, i.e. they are the
// midpoint quadrature of the continuum convolution on the torus.

#include "roughvar/fft.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughvar::grid {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

struct Grid {
  int n = 1;
  std::size_t m = 0;
  double L = 1.0;
  double h = 0.0;

  std::size_t size() const { return fft::real_size(n, m); }
  std::size_t spectrum_size() const { return fft::half_size(n, m); }
  double cell_volume() const { return n == 1 ? h : h * h; }
  double volume() const { return n == 1 ? 2 * L : 4 * L * L; }
  double coord(std::size_t i) const { return -L + static_cast<double>(i) * h; }
  std::size_t origin_index() const { return n == 1 ? m / 2 : (m / 2) * m + m / 2; }

  /// Cartesian coordinates of flat index idx (row-major, axis 0 slowest).
  std::array<double, 2> point(std::size_t idx) const {
    if (n == 1) return {coord(idx), 0.0};
    return {coord(idx / m), coord(idx % m)};
  }
  double radius(std::size_t idx) const {
    auto p = point(idx);
    return std::hypot(p[0], p[1]);
  }

  /// Lowest nonzero and highest representable per-axis frequencies,
  /// in cycles per unit length.
  double fundamental() const { return 1.0 / (2.0 * L); }
  double nyquist() const { return static_cast<double>(m) / (4.0 * L); }

  /// Frequency vector of a half-spectrum index.
  std::array<double, 2> frequency(std::size_t k) const {
    if (n == 1) return {static_cast<double>(k) * fundamental(), 0.0};
    const std::size_t half = m / 2 + 1;
    return {static_cast<double>(fft::signed_index(k / half, m)) * fundamental(),
            static_cast<double>(k % half) * fundamental()};
  }
  double frequency_norm(std::size_t k) const {
    auto xi = frequency(k);
    return std::hypot(xi[0], xi[1]);
  }
  /// Multiplicity of a half-spectrum coefficient in the full spectrum.
  double spectral_multiplicity(std::size_t k) const {
    const std::size_t half = m / 2 + 1;
    const std::size_t last = n == 1 ? k : k % half;
    return (last == 0 || last == m / 2) ? 1.0 : 2.0;
  }

  bool operator==(const Grid& o) const { return n == o.n && m == o.m && L == o.L; }
};

inline Grid make_grid(int n, std::size_t m, double L) {
  if (n != 1 && n != 2) throw std::invalid_argument("unsupported dimension (n must be 1 or 2)");
  if (!is_power_of_two(m)) throw std::invalid_argument("non-power-of-two axis count");
  if (m < 8) throw std::invalid_argument("axis count must be at least 8");
  if (!(L > 0) || !std::isfinite(L)) throw std::invalid_argument("half-width must be positive");
  return Grid{n, m, L, 2.0 * L / static_cast<double>(m)};
}

enum class Tag { real, complex };

struct SampledFunction {
  Grid grid;
  std::vector<cplx> values;
  Tag tag = Tag::real;

  static SampledFunction zeros(const Grid& g, Tag t = Tag::real) {
    return {g, std::vector<cplx>(g.size()), t};
  }
  static SampledFunction from_real(const Grid& g, std::span<const double> v) {
    if (v.size() != g.size()) throw std::invalid_argument("value count does not match grid");
    SampledFunction f{g, std::vector<cplx>(v.begin(), v.end()), Tag::real};
    return f;
  }
  static SampledFunction from_complex(const Grid& g, std::vector<cplx> v) {
    if (v.size() != g.size()) throw std::invalid_argument("value count does not match grid");
    return {g, std::move(v), Tag::complex};
  }

  bool is_real() const { return tag == Tag::real; }
  std::size_t size() const { return values.size(); }
  const cplx& operator[](std::size_t i) const { return values[i]; }
  cplx& operator[](std::size_t i) { return values[i]; }

  std::vector<double> real_part() const {
    std::vector<double> r(values.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = values[i].real();
    return r;
  }
  std::vector<double> imag_part() const {
    std::vector<double> r(values.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = values[i].imag();
    return r;
  }
  double max_imag() const {
    double mx = 0;
    for (const auto& v : values) mx = std::max(mx, std::abs(v.imag()));
    return mx;
  }
  /// Drops imaginary parts and marks the field real.
  SampledFunction as_real() const {
    SampledFunction r{grid, values, Tag::real};
    for (auto& v : r.values) v = v.real();
    return r;
  }
};

inline void require_same_grid(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grid mismatch");
}

// Pointwise arithmetic.

inline SampledFunction map(const SampledFunction& f, const std::function<cplx(cplx)>& fn) {
  SampledFunction r = f;
  for (auto& v : r.values) v = fn(v);
  return r;
}

inline SampledFunction combine(const SampledFunction& a, const SampledFunction& b,
                               const std::function<cplx(cplx, cplx)>& fn) {
  require_same_grid(a, b);
  SampledFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = fn(a.values[i], b.values[i]);
  r.tag = (a.is_real() && b.is_real()) ? Tag::real : Tag::complex;
  return r;
}

inline SampledFunction operator+(const SampledFunction& a, const SampledFunction& b) {
  return combine(a, b, [](cplx x, cplx y) { return x + y; });
}
inline SampledFunction operator-(const SampledFunction& a, const SampledFunction& b) {
  return combine(a, b, [](cplx x, cplx y) { return x - y; });
}
inline SampledFunction operator*(const SampledFunction& a, const SampledFunction& b) {
  return combine(a, b, [](cplx x, cplx y) { return x * y; });
}
inline SampledFunction operator*(double c, const SampledFunction& a) {
  SampledFunction r = a;
  for (auto& v : r.values) v *= c;
  return r;
}
inline SampledFunction scaled(const SampledFunction& a, cplx c) {
  SampledFunction r = a;
  for (auto& v : r.values) v *= c;
  if (c.imag() != 0) r.tag = Tag::complex;
  return r;
}

// Spectral layer. A symbol is a half-spectrum array of a real kernel; it
// multiplies the spectrum of real and imaginary parts separately.

inline std::vector<double> apply_symbol_real(const Grid& g, std::span<const double> x,
                                             std::span<const cplx> symbol) {
  auto X = fft::forward(g.n, g.m, x);
  for (std::size_t k = 0; k < X.size(); ++k) X[k] = fft::mul(X[k], symbol[k]);
  return fft::inverse(g.n, g.m, X);
}

inline SampledFunction apply_symbol(const SampledFunction& f, std::span<const cplx> symbol) {
  if (symbol.size() != f.grid.spectrum_size()) throw std::invalid_argument("symbol size mismatch");
  auto re = apply_symbol_real(f.grid, f.real_part(), symbol);
  SampledFunction r = SampledFunction::from_real(f.grid, re);
  if (!f.is_real()) {
    auto im = apply_symbol_real(f.grid, f.imag_part(), symbol);
    for (std::size_t i = 0; i < im.size(); ++i) r.values[i] += cplx(0, im[i]);
    r.tag = Tag::complex;
  }
  return r;
}

/// Rolls a field centred at the origin index to FFT layout (origin at 0).
inline std::vector<double> roll_to_fft_layout(const Grid& g, std::span<const double> k) {
  std::vector<double> r(k.size());
  const std::size_t m = g.m, s = m / 2;
  if (g.n == 1) {
    for (std::size_t l = 0; l < m; ++l) r[l] = k[(l + s) % m];
  } else {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) r[a * m + b] = k[((a + s) % m) * m + (b + s) % m];
  }
  return r;
}

inline std::vector<double> roll_from_fft_layout(const Grid& g, std::span<const double> k) {
  std::vector<double> r(k.size());
  const std::size_t m = g.m, s = m / 2;
  if (g.n == 1) {
    for (std::size_t l = 0; l < m; ++l) r[(l + s) % m] = k[l];
  } else {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) r[((a + s) % m) * m + (b + s) % m] = k[a * m + b];
  }
  return r;
}

/// Symbol of convolution (scaled by h^n) against a real kernel field.
inline std::vector<cplx> kernel_symbol(const Grid& g, std::span<const double> kernel) {
  auto S = fft::forward(g.n, g.m, roll_to_fft_layout(g, kernel));
  const double hv = g.cell_volume();
  for (auto& s : S) s *= hv;
  return S;
}

/// Kernel field whose symbol is the given one (inverse of kernel_symbol).
inline std::vector<double> kernel_from_symbol(const Grid& g, std::span<const cplx> symbol) {
  auto k = fft::inverse(g.n, g.m, symbol);
  const double inv = 1.0 / g.cell_volume();
  for (auto& v : k) v *= inv;
  return roll_from_fft_layout(g, k);
}

/// Half-spectrum array of a radial profile evaluated at |xi|.
inline std::vector<cplx> radial_symbol(const Grid& g, const std::function<double(double)>& profile) {
  std::vector<cplx> S(g.spectrum_size());
  for (std::size_t k = 0; k < S.size(); ++k) S[k] = profile(g.frequency_norm(k));
  return S;
}

inline SampledFunction convolve(const SampledFunction& f, const SampledFunction& k) {
  require_same_grid(f, k);
  auto out = apply_symbol(f, kernel_symbol(f.grid, k.real_part()));
  if (!k.is_real()) {
    auto im = apply_symbol(f, kernel_symbol(f.grid, k.imag_part()));
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += cplx(0, 1) * im.values[i];
    out.tag = Tag::complex;
  }
  return out;
}

inline double lp_norm(const SampledFunction& f, double p) {
  if (!(p >= 1) || !std::isfinite(p)) throw std::invalid_argument("lp_norm: p must satisfy 1 <= p < inf");
  double s = 0;
  for (const auto& v : f.values) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

inline double lp_norm(const SampledFunction& f, double p, const SampledFunction& w) {
  if (!(p >= 1) || !std::isfinite(p)) throw std::invalid_argument("lp_norm: p must satisfy 1 <= p < inf");
  require_same_grid(f, w);
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wi = w.values[i].real();
    if (wi < 0 || w.values[i].imag() != 0) throw std::invalid_argument("lp_norm: negative weight");
    s += std::pow(std::abs(f.values[i]), p) * wi;
  }
  return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

/// h^n / m^n * sum |F_k|^2, the frequency-side form of lp_norm(f,2)^2.
inline double spectral_energy(const SampledFunction& f) {
  const Grid& g = f.grid;
  double e = 0;
  auto add = [&](const std::vector<double>& part) {
    auto F = fft::forward(g.n, g.m, part);
    for (std::size_t k = 0; k < F.size(); ++k) e += g.spectral_multiplicity(k) * std::norm(F[k]);
  };
  add(f.real_part());
  if (!f.is_real()) add(f.imag_part());
  return e * g.cell_volume() / static_cast<double>(g.size());
}

/// Value at an arbitrary point by periodic (bi)linear interpolation.
inline cplx interpolate(const SampledFunction& f, std::array<double, 2> x) {
  const Grid& g = f.grid;
  const double m = static_cast<double>(g.m);
  auto locate = [&](double c, std::size_t& i0, double& a) {
    double u = (c + g.L) / g.h;
    u -= m * std::floor(u / m);
    double fl = std::floor(u);
    a = u - fl;
    i0 = static_cast<std::size_t>(fl) % g.m;
  };
  std::size_t i0, j0;
  double a, b;
  locate(x[0], i0, a);
  const std::size_t i1 = (i0 + 1) % g.m;
  if (g.n == 1) return (1 - a) * f.values[i0] + a * f.values[i1];
  locate(x[1], j0, b);
  const std::size_t j1 = (j0 + 1) % g.m;
  const std::size_t m_ = g.m;
  return (1 - a) * (1 - b) * f.values[i0 * m_ + j0] + a * (1 - b) * f.values[i1 * m_ + j0] +
         (1 - a) * b * f.values[i0 * m_ + j1] + a * b * f.values[i1 * m_ + j1];
}

/// g(x) = f(x - v) for every grid point, by periodic (bi)linear interpolation.
inline SampledFunction shifted(const SampledFunction& f, std::array<double, 2> v) {
  const Grid& g = f.grid;
  SampledFunction r = f;
  const double m = static_cast<double>(g.m);
  auto split = [&](double shift, long& q, double& a) {
    double u = -shift / g.h;
    u -= m * std::floor(u / m);
    double fl = std::floor(u);
    q = static_cast<long>(fl);
    a = u - fl;
  };
  long q0, q1 = 0;
  double a0, a1 = 0;
  split(v[0], q0, a0);
  const long M = static_cast<long>(g.m);
  auto wrap = [M](long i) { return static_cast<std::size_t>(((i % M) + M) % M); };
  if (g.n == 1) {
    for (long i = 0; i < M; ++i)
      r.values[i] = (1 - a0) * f.values[wrap(i + q0)] + a0 * f.values[wrap(i + q0 + 1)];
    return r;
  }
  split(v[1], q1, a1);
  for (long i = 0; i < M; ++i) {
    const std::size_t r0 = wrap(i + q0) * g.m, r1 = wrap(i + q0 + 1) * g.m;
    for (long j = 0; j < M; ++j) {
      const std::size_t c0 = wrap(j + q1), c1 = wrap(j + q1 + 1);
      r.values[i * M + j] = (1 - a0) * (1 - a1) * f.values[r0 + c0] + a0 * (1 - a1) * f.values[r1 + c0] +
                            (1 - a0) * a1 * f.values[r0 + c1] + a0 * a1 * f.values[r1 + c1];
    }
  }
  return r;
}

// Serialization. Header (n, m, L, tag) followed by row-major values.

inline void write_binary(const SampledFunction& f, std::ostream& os) {
  const std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
  const std::uint64_t m = f.grid.m;
  const double L = f.grid.L;
  const std::uint8_t tag = f.is_real() ? 0 : 1;
  os.write("RVFIELD1", 8);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&m), sizeof m);
  os.write(reinterpret_cast<const char*>(&L), sizeof L);
  os.write(reinterpret_cast<const char*>(&tag), sizeof tag);
  for (const auto& v : f.values) {
    const double re = v.real(), im = v.imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    if (tag) os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
  if (!os) throw std::runtime_error("write_binary: stream failure");
}

inline SampledFunction read_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != "RVFIELD1") throw std::runtime_error("read_binary: bad magic");
  std::uint32_t n;
  std::uint64_t m;
  double L;
  std::uint8_t tag;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&m), sizeof m);
  is.read(reinterpret_cast<char*>(&L), sizeof L);
  is.read(reinterpret_cast<char*>(&tag), sizeof tag);
  if (!is) throw std::runtime_error("read_binary: truncated header");
  Grid g = make_grid(static_cast<int>(n), m, L);
  SampledFunction f = SampledFunction::zeros(g, tag ? Tag::complex : Tag::real);
  for (auto& v : f.values) {
    double re = 0, im = 0;
    is.read(reinterpret_cast<char*>(&re), sizeof re);
    if (tag) is.read(reinterpret_cast<char*>(&im), sizeof im);
    v = {re, im};
  }
  if (!is) throw std::runtime_error("read_binary: truncated values");
  return f;
}

inline void write_csv(const SampledFunction& f, std::ostream& os) {
  os << "n,m,L,tag\n"
     << f.grid.n << ',' << f.grid.m << ',' << std::setprecision(17) << f.grid.L << ','
     << (f.is_real() ? "real" : "complex") << '\n';
  os << (f.grid.n == 1 ? "i" : "i,j") << (f.is_real() ? ",value\n" : ",re,im\n");
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (f.grid.n == 1)
      os << idx;
    else
      os << idx / f.grid.m << ',' << idx % f.grid.m;
    os << ',' << f.values[idx].real();
    if (!f.is_real()) os << ',' << f.values[idx].imag();
    os << '\n';
  }
}

inline SampledFunction read_csv(std::istream& is) {
  std::string line;
  std::getline(is, line);
  if (line != "n,m,L,tag") throw std::runtime_error("read_csv: bad header");
  std::getline(is, line);
  std::istringstream hs(line);
  std::string tok;
  std::vector<std::string> head;
  while (std::getline(hs, tok, ',')) head.push_back(tok);
  if (head.size() != 4) throw std::runtime_error("read_csv: bad header values");
  Grid g = make_grid(std::stoi(head[0]), std::stoull(head[1]), std::stod(head[2]));
  const bool cx = head[3] == "complex";
  SampledFunction f = SampledFunction::zeros(g, cx ? Tag::complex : Tag::real);
  std::getline(is, line);  // column names
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (!std::getline(is, line)) throw std::runtime_error("read_csv: truncated values");
    std::istringstream ls(line);
    std::vector<std::string> cols;
    while (std::getline(ls, tok, ',')) cols.push_back(tok);
    const std::size_t off = g.n == 1 ? 1 : 2;
    if (cols.size() < off + (cx ? 2 : 1)) throw std::runtime_error("read_csv: short row");
    f.values[idx] = {std::stod(cols[off]), cx ? std::stod(cols[off + 1]) : 0.0};
  }
  return f;
}

}  // namespace roughvar::grid
