#pragma once

// Real-to-complex transforms on periodic grids, backed by FFTW.
//
// For a grid of m points per axis in n dimensions the half spectrum holds
// m^(n-1) * (m/2 + 1) coefficients in row-major order, the last axis halved.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace roughvar::fft {

using cplx = std::complex<double>;

/// Plain complex product, without the C99 infinity recovery of operator*.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline std::size_t real_size(int n, std::size_t m) { return n == 1 ? m : m * m; }
inline std::size_t half_size(int n, std::size_t m) {
  return n == 1 ? m / 2 + 1 : m * (m / 2 + 1);
}

namespace detail {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, std::size_t, bool, bool>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  /// Aligned plans use SIMD codelets and need SIMD-aligned arrays at execution.
  fftw_plan get(int n, std::size_t m, bool forward, bool aligned) {
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(n, m, forward, aligned);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    double* r = fftw_alloc_real(real_size(n, m));
    fftw_complex* cp = fftw_alloc_complex(half_size(n, m));
    const int mi = static_cast<int>(m);
    const unsigned flags = aligned ? FFTW_ESTIMATE : FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (n == 1) {
      plan = forward ? fftw_plan_dft_r2c_1d(mi, r, cp, flags) : fftw_plan_dft_c2r_1d(mi, cp, r, flags);
    } else {
      plan = forward ? fftw_plan_dft_r2c_2d(mi, mi, r, cp, flags) : fftw_plan_dft_c2r_2d(mi, mi, cp, r, flags);
    }
    fftw_free(r);
    fftw_free(cp);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans.emplace(key, plan);
    return plan;
  }

  fftw_plan get(int n, std::size_t m, bool forward, const void* in, const void* out) {
    const bool aligned = fftw_alignment_of(static_cast<double*>(const_cast<void*>(in))) == 0 &&
                         fftw_alignment_of(static_cast<double*>(const_cast<void*>(out))) == 0;
    return get(n, m, forward, aligned);
  }
};

inline PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace detail

/// Unnormalized forward transform: F_k = sum_j x_j exp(-2 pi i k.j / m).
inline std::vector<cplx> forward(int n, std::size_t m, std::span<const double> x) {
  if (x.size() != real_size(n, m)) throw std::invalid_argument("fft: size mismatch");
  std::vector<double> in(x.begin(), x.end());
  std::vector<cplx> out(half_size(n, m));
  fftw_execute_dft_r2c(detail::cache().get(n, m, true, in.data(), out.data()), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

/// Normalized inverse transform (divides by m^n), so inverse(forward(x)) == x.
inline std::vector<double> inverse(int n, std::size_t m, std::span<const cplx> X) {
  if (X.size() != half_size(n, m)) throw std::invalid_argument("fft: size mismatch");
  std::vector<cplx> in(X.begin(), X.end());  // c2r overwrites its input
  std::vector<double> out(real_size(n, m));
  fftw_execute_dft_c2r(detail::cache().get(n, m, false, in.data(), out.data()),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

/// Unnormalized inverse into a caller buffer; X is overwritten.
inline void inverse_unscaled(int n, std::size_t m, std::span<cplx> X, std::span<double> out) {
  if (X.size() != half_size(n, m) || out.size() != real_size(n, m)) throw std::invalid_argument("fft: size mismatch");
  fftw_execute_dft_c2r(detail::cache().get(n, m, false, X.data(), out.data()), reinterpret_cast<fftw_complex*>(X.data()),
                       out.data());
}

/// Signed integer frequency of FFT index i on an axis of m points.
inline long signed_index(std::size_t i, std::size_t m) {
  return i <= m / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(m);
}

}  // namespace roughvar::fft
