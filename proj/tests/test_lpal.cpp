#include "roughvar/lpal.hpp"
#include "roughvar/weights.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace roughvar;
using namespace roughvar::lpal;
using grid::sample;

namespace {

double max_diff(const SampledFunction& a, const SampledFunction& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

double max_abs(const SampledFunction& a) {
  double d = 0;
  for (const auto& v : a.values) d = std::max(d, std::abs(v));
  return d;
}

SampledFunction random_field(const Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N;
  auto f = SampledFunction::zeros(g);
  for (auto& v : f.values) v = N(rng);
  return f;
}

// Band-limited field with spectrum in the interior of the bank.
SampledFunction interior_field(const FilterBank& bank, std::uint64_t seed) {
  return sample(grid::BandLimitedRandom{seed, bank.interior_high(), bank.interior_low()}, bank.grid);
}

SampledFunction cosine(const Grid& g, double xi) {
  auto f = SampledFunction::zeros(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = std::cos(2 * std::numbers::pi * xi * g.point(i)[0]);
  return f;
}

}  // namespace

TEST(Profiles, PlateauAndSupport) {
  EXPECT_EQ(varpi(0.0), 1.0);
  EXPECT_EQ(varpi(0.5), 1.0);
  EXPECT_EQ(varpi(1.0), 0.0);
  EXPECT_EQ(psi(0.0), 0.0);
  EXPECT_EQ(psi(0.49), 0.0);
  EXPECT_EQ(psi(2.0), 0.0);
  EXPECT_EQ(psi(1.0), 1.0);
  for (int i = 0; i <= 400; ++i) {
    const double xi = 0.01 * i;
    double s = 0;
    for (int l = -12; l <= 12; ++l) s += std::pow(phi(std::ldexp(xi, -l)), 2);
    if (xi > 0) EXPECT_NEAR(s, 1.0, 1e-14) << xi;
  }
}

TEST(FilterBank, PartitionDefectAndRange) {
  for (int n : {1, 2})
    for (std::size_t m : {std::size_t(16), std::size_t(64), std::size_t(256)}) {
      const auto bank = make_filter_bank(grid::make_grid(n, m, 3.0));
      EXPECT_LE(bank.partition_defect, 1e-12);
      EXPECT_LE(std::ldexp(1.0, bank.l_min), bank.grid.fundamental());
      EXPECT_GE(std::ldexp(1.0, bank.l_max), bank.grid.nyquist() * std::sqrt(double(n)));
    }
  const auto bank = make_filter_bank(grid::make_grid(1, 64, 1.0));
  EXPECT_THROW(bank.symbol(bank.l_min - 1, BandKind::delta), std::invalid_argument);
  EXPECT_THROW(bank.symbol(bank.l_max + 1, BandKind::theta), std::invalid_argument);
  EXPECT_NO_THROW(bank.symbol(bank.l_max + 1, BandKind::lowpass));
}

TEST(Bandpass, ConstantsAndPureFrequencies) {
  const Grid g = grid::make_grid(1, 256, 4.0);
  const auto bank = make_filter_bank(g);
  const auto c = sample(grid::Constant{2.5}, g);
  for (int l = bank.l_min; l <= bank.l_max; ++l) {
    EXPECT_LT(max_diff(bandpass(bank, c, l, BandKind::lowpass), c), 1e-13);
    EXPECT_LT(max_abs(bandpass(bank, c, l, BandKind::theta)), 1e-13);
    EXPECT_LT(max_abs(bandpass(bank, c, l, BandKind::delta)), 1e-13);
  }
  // xi0 = 1 sits on the plateau of Theta_0 and Delta_0 (psi(1) = 1) and of G_l for l >= 1.
  const auto f = cosine(g, 1.0);
  EXPECT_LT(max_diff(bandpass(bank, f, 0, BandKind::theta), f), 1e-12);
  EXPECT_LT(max_diff(bandpass(bank, f, 0, BandKind::delta), f), 1e-12);
  EXPECT_LT(max_diff(bandpass(bank, f, 1, BandKind::lowpass), f), 1e-12);
  EXPECT_LT(max_abs(bandpass(bank, f, 0, BandKind::lowpass)), 1e-12);
  EXPECT_LT(max_abs(bandpass(bank, f, 2, BandKind::theta)), 1e-12);
}

TEST(Bank, Telescoping) {
  for (int n : {1, 2}) {
    const Grid g = grid::make_grid(n, n == 1 ? 512 : 64, 2.0);
    const auto bank = make_filter_bank(g);
    const auto f = random_field(g, 17);
    for (int a = bank.l_min; a <= bank.l_max; a += 2)
      for (int b = a; b <= bank.l_max; b += 3) {
        auto sum = SampledFunction::zeros(g);
        for (int j = a; j <= b; ++j) sum = sum + bandpass(bank, f, j, BandKind::theta);
        const auto rhs = bandpass(bank, f, b + 1, BandKind::lowpass) - bandpass(bank, f, a, BandKind::lowpass);
        EXPECT_LT(max_diff(sum, rhs), 1e-12);
      }
  }
}

TEST(Bank, DeltaReconstruction) {
  for (int n : {1, 2}) {
    const Grid g = grid::make_grid(n, n == 1 ? 1024 : 128, 4.0);
    const auto bank = make_filter_bank(g);
    const auto f = interior_field(bank, 5);
    auto sum = SampledFunction::zeros(g);
    for (int l = bank.l_min; l <= bank.l_max; ++l)
      sum = sum + bandpass(bank, bandpass(bank, f, l, BandKind::delta), l, BandKind::delta);
    EXPECT_LT(max_diff(sum, f), 1e-10);
  }
}

TEST(SquareFunction, PlancherelOnInteriorField) {
  for (int n : {1, 2}) {
    const Grid g = grid::make_grid(n, n == 1 ? 1024 : 128, 4.0);
    const auto bank = make_filter_bank(g);
    const auto f = interior_field(bank, 8);
    const auto S = square_function(bank, f);
    EXPECT_NEAR(grid::lp_norm(S, 2), grid::lp_norm(f, 2), 1e-10 * grid::lp_norm(f, 2));
    const auto S2 = square_function(bank, f, {bank.l_min, bank.l_max}, nullptr, 0, true);
    EXPECT_TRUE(std::isfinite(grid::lp_norm(S2, 2)));
  }
}

TEST(SquareFunction, CommutatorReductions) {
  const Grid g = grid::make_grid(1, 512, 4.0);
  const auto bank = make_filter_bank(g);
  const auto f = sample(grid::Gaussian{0.3, {0.2, 0}}, g);
  const auto b = sample(grid::LogAbs{}, g);
  const ScaleBand all{bank.l_min, bank.l_max};
  EXPECT_EQ(max_diff(square_function(bank, f, all, &b, 0), square_function(bank, f, all)), 0.0);
  const auto c = sample(grid::Constant{3.0}, g);
  EXPECT_LT(max_abs(square_function(bank, f, all, &c, 1)), 1e-12 * max_abs(square_function(bank, f)));
  const auto S1 = square_function(bank, f, all, &b, 1);
  EXPECT_TRUE(std::isfinite(grid::lp_norm(S1, 2)));
  EXPECT_GT(grid::lp_norm(S1, 2), 0.0);
  EXPECT_THROW(square_function(bank, f, all, nullptr, 1), std::invalid_argument);
  EXPECT_THROW(square_function(bank, f, all, &b, -1), std::invalid_argument);
  EXPECT_THROW(square_function(bank, f, {bank.l_min - 1, bank.l_max}), std::invalid_argument);
}

TEST(Paraproduct, AgainstConstants) {
  const Grid g = grid::make_grid(1, 1024, 4.0);
  const auto bank = make_filter_bank(g);
  const auto f = interior_field(bank, 21);
  const auto one = sample(grid::Constant{1.0}, g);
  const auto zero = SampledFunction::zeros(g);
  EXPECT_LT(max_diff(paraproduct(bank, f, one), f), 1e-10);
  EXPECT_LT(max_abs(paraproduct(bank, one, f)), 1e-10);
  EXPECT_EQ(max_abs(paraproduct(bank, zero, f)), 0.0);
  const auto parts = bony_decompose(bank, f, one);
  EXPECT_TRUE(parts.interior);
  EXPECT_LT(max_diff(parts.pi_fg, f), 1e-10);
  EXPECT_LT(max_abs(parts.pi_gf), 1e-10);
  EXPECT_LT(max_abs(parts.remainder), 1e-10);
  EXPECT_LE(parts.residual, 1e-10);
  const auto zparts = bony_decompose(bank, f, zero);
  EXPECT_EQ(zparts.residual, 0.0);
  EXPECT_EQ(max_abs(zparts.remainder), 0.0);
}

TEST(Bony, RandomInteriorFields) {
  const Grid g = grid::make_grid(1, 4096, 8.0);
  const auto bank = make_filter_bank(g);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto parts = bony_decompose(bank, interior_field(bank, 100 + s), interior_field(bank, 200 + s));
    EXPECT_TRUE(parts.interior);
    EXPECT_LE(parts.residual, 1e-9);
  }
  const Grid g2 = grid::make_grid(2, 128, 4.0);
  const auto bank2 = make_filter_bank(g2);
  const auto p2 = bony_decompose(bank2, interior_field(bank2, 1), interior_field(bank2, 2));
  EXPECT_LE(p2.residual, 1e-9);
  // Rough inputs are reported as non-interior.
  EXPECT_FALSE(bony_decompose(bank, random_field(g, 1), random_field(g, 2)).interior);
}

TEST(LowpassOscillation, Preconditions) {
  const Grid g = grid::make_grid(1, 1024, 8.0);
  const auto c = sample(grid::Constant{1.0}, g);
  const double bmo = weights::bmo_norm(c, weights::make_cube_family(g, 8));
  EXPECT_EQ(bmo, 0.0);
  EXPECT_THROW(lowpass_oscillation(c, 0, 0.25, 100, 1, bmo), std::invalid_argument);
  const auto b = sample(grid::LogAbs{}, g);
  EXPECT_THROW(lowpass_oscillation(b, 0, 0.5, 100, 1, 1.0), std::invalid_argument);
  EXPECT_THROW(lowpass_oscillation(b, 0, 0.0, 100, 1, 1.0), std::invalid_argument);
}

TEST(LowpassOscillation, ConstantIndependentOfScale) {
  const Grid g = grid::make_grid(1, 16384, 32.0);
  const auto b = sample(grid::LogAbs{}, g);
  const double bmo = weights::bmo_norm(b, weights::make_cube_family(g, 12));
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int k = -3; k <= 3; ++k) {
    const auto fit = lowpass_oscillation(b, k, 0.25, 4000, 42, bmo);
    EXPECT_GT(fit.C, 0.0);
    lo = std::min(lo, fit.C);
    hi = std::max(hi, fit.C);
  }
  EXPECT_LE(hi / lo, 2.0);
  const double c1 = lowpass_oscillation(b, 0, 0.1, 4000, 42, bmo).C;
  const double c4 = lowpass_oscillation(b, 0, 0.4, 4000, 42, bmo).C;
  EXPECT_TRUE(std::isfinite(c1) && c1 > 0);
  EXPECT_TRUE(std::isfinite(c4) && c4 > 0);
}
