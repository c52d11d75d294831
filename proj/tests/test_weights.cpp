#include "roughvar/weights.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace roughvar;
using namespace roughvar::weights;
using grid::sample;

namespace {

// Independent scan: explicit cube bounds in index space, no shared helpers.
double brute_ap(const SampledFunction& w, double p, int depth) {
  const Grid& g = w.grid;
  double best = 0;
  for (int k = 0; k <= depth; ++k) {
    const std::size_t per = std::size_t(1) << k, side = g.m / per;
    for (std::size_t a = 0; a < per; ++a)
      for (std::size_t b = 0; b < (g.n == 2 ? per : 1); ++b) {
        double sw = 0, sd = 0, mn = 1e300, N = 0;
        for (std::size_t i = a * side; i < (a + 1) * side; ++i)
          for (std::size_t j = b * side; j < (g.n == 2 ? (b + 1) * side : 1); ++j) {
            const double v = w.values[g.n == 2 ? i * g.m + j : i].real();
            sw += v;
            sd += p > 1 ? std::pow(v, -1 / (p - 1)) : 0;
            mn = std::min(mn, v);
            N += 1;
          }
        best = std::max(best, p > 1 ? sw / N * std::pow(sd / N, p - 1) : sw / N / mn);
      }
  }
  return best;
}

SampledFunction random_weight(const Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::lognormal_distribution<double> LN(0, 1);
  auto w = SampledFunction::zeros(g);
  for (auto& v : w.values) v = LN(rng);
  return w;
}

}  // namespace

TEST(CubeFamily, CountAndValidation) {
  EXPECT_EQ(make_cube_family(grid::make_grid(1, 64, 1.0), 3).count(), 15u);
  EXPECT_EQ(make_cube_family(grid::make_grid(2, 64, 1.0), 2).count(), 21u);
  EXPECT_THROW(make_cube_family(grid::make_grid(1, 16, 1.0), 5), std::invalid_argument);
  EXPECT_THROW(make_cube_family(grid::make_grid(1, 16, 1.0), -1), std::invalid_argument);
}

TEST(Ap, UnitWeightIsOne) {
  for (int n : {1, 2}) {
    const Grid g = grid::make_grid(n, 32, 1.0);
    const auto one = sample(grid::Constant{1.0}, g);
    for (double p : {1.0, 1.5, 2.0, 5.0}) EXPECT_EQ(ap_characteristic(one, p, make_cube_family(g, 4)), 1.0);
  }
}

TEST(Ap, MatchesBruteForceScan) {
  for (int n : {1, 2}) {
    const Grid g = grid::make_grid(n, 32, 1.0);
    const auto w = random_weight(g, 3 + n);
    for (double p : {1.0, 1.5, 2.0, 3.0})
      EXPECT_NEAR(ap_characteristic(w, p, make_cube_family(g, 4)), brute_ap(w, p, 4), 1e-12 * brute_ap(w, p, 4));
  }
}

TEST(Ap, RejectsNonpositiveWeights) {
  const Grid g = grid::make_grid(1, 16, 1.0);
  auto w = sample(grid::Constant{1.0}, g);
  w.values[4] = 0.0;
  EXPECT_THROW(ap_characteristic(w, 2, make_cube_family(g, 2)), std::invalid_argument);
  w.values[4] = -1.0;
  EXPECT_THROW(ap_characteristic(w, 2, make_cube_family(g, 2)), std::invalid_argument);
  EXPECT_THROW(ap_characteristic(sample(grid::Constant{1.0}, g), 0.5, make_cube_family(g, 2)), std::invalid_argument);
}

TEST(Ap, Properties) {
  for (int n : {1, 2}) {
    const Grid g = grid::make_grid(n, 64, 1.0);
    for (unsigned seed = 0; seed < 5; ++seed) {
      const auto w = random_weight(g, seed);
      double prev_depth = 0;
      for (int d = 0; d <= 6; ++d) {
        const auto cubes = make_cube_family(g, d);
        double prev_p = std::numeric_limits<double>::infinity();
        for (double p : {1.0, 1.25, 2.0, 3.0, 6.0}) {
          const double v = ap_characteristic(w, p, cubes);
          EXPECT_GE(v, 1.0 - 1e-12);
          EXPECT_LE(v, prev_p * (1 + 1e-12));
          prev_p = v;
        }
        const double v2 = ap_characteristic(w, 2, cubes);
        EXPECT_GE(v2, prev_depth);
        prev_depth = v2;
      }
    }
  }
}

TEST(Ap, PowerWeightInsideA2IsStable) {
  const Grid g = grid::make_grid(1, 4096, 1.0);
  const auto w = sample(grid::PowerAbs{0.5}, g);
  const double v7 = ap_characteristic(w, 2, make_cube_family(g, 7));
  const double v8 = ap_characteristic(w, 2, make_cube_family(g, 8));
  EXPECT_GE(v8, 1.0);
  EXPECT_TRUE(std::isfinite(v8));
  EXPECT_LE(std::abs(v8 / v7 - 1), 0.10);
  const auto prof = ap_refinement_profile(grid::PowerAbs{0.5}, 2, 1, 1.0, {6, 7, 8, 9});
  EXPECT_TRUE(prof.stable);
  EXPECT_FALSE(prof.growing);
}

TEST(Ap, PowerWeightOutsideA2Grows) {
  const auto prof = ap_refinement_profile(grid::PowerAbs{-2.0}, 2, 1, 1.0, {4, 5, 6, 7, 8});
  EXPECT_TRUE(prof.growing);
  EXPECT_FALSE(prof.stable);
  for (std::size_t i = 1; i < prof.points.size(); ++i) EXPECT_GT(prof.points[i].value, prof.points[i - 1].value);
}

TEST(Bmo, Examples) {
  const Grid g = grid::make_grid(1, 4096, 1.0);
  EXPECT_EQ(bmo_norm(sample(grid::Constant{4.0}, g), make_cube_family(g, 8)), 0.0);
  // Sawtooth x on [-1, 1): the full torus cube gives avg|x| = 1/2.
  const auto saw = sample(grid::Coordinate{0}, g);
  const double bs = bmo_norm(saw, make_cube_family(g, 8));
  EXPECT_NEAR(bs, 0.5, 1e-6);
  EXPECT_NEAR(bmo_level(saw, make_cube_family(g, 8), 0), bs, 1e-15);
  const auto b = sample(grid::LogAbs{}, g);
  const double b7 = bmo_norm(b, make_cube_family(g, 7)), b8 = bmo_norm(b, make_cube_family(g, 8));
  EXPECT_LE(std::abs(b8 / b7 - 1), 0.15);
  EXPECT_GE(b8, b7);
  EXPECT_THROW(bmo_norm(grid::SampledFunction::from_complex(g, std::vector<grid::cplx>(g.size(), {0, 1})),
                        make_cube_family(g, 2)),
               std::invalid_argument);
}

TEST(ExpWeight, Identities) {
  const Grid g = grid::make_grid(1, 2048, 1.0);
  const auto cubes = make_cube_family(g, 8);
  const auto b = sample(grid::LogAbs{}, g);
  const auto zero = exp_weight_characteristic(b, 0.0, 2, cubes);
  EXPECT_EQ(zero.value, 1.0);
  EXPECT_TRUE(zero.admissible);
  for (double lambda : {0.5, -0.3, 0.8}) {
    const auto r = exp_weight_characteristic(b, lambda, 2, cubes);
    const double direct = ap_characteristic(sample(grid::PowerAbs{lambda}, g), 2, cubes);
    EXPECT_NEAR(r.value, direct, 1e-10 * direct);
  }
  double prev = 1.0;
  for (double lambda = 0.05; lambda <= 0.95; lambda += 0.05) {
    const double v = exp_weight_characteristic(b, lambda, 2, cubes).value;
    EXPECT_GE(v, prev * (1 - 1e-12));
    prev = v;
  }
  const auto bmo = bmo_norm(b, cubes);
  const auto r = exp_weight_characteristic(b, 0.5, 3, cubes);
  EXPECT_NEAR(r.admissible_radius, 0.01 * 0.5 / bmo, 1e-15);
  EXPECT_FALSE(r.admissible);
  EXPECT_THROW(exp_weight_characteristic(b, 100.0, 2, cubes), std::domain_error);
}

TEST(TheoremRadius, Formula) {
  EXPECT_DOUBLE_EQ(theorem1_radius(1, 1, 1, 1, 2), 0.01);
  EXPECT_DOUBLE_EQ(theorem1_radius(1, 1, 1, 2, 2), 0.005);
  EXPECT_DOUBLE_EQ(theorem1_radius(0.5, 2, 3, 0.7, 4), 0.01 / (3 * 0.5 * 2 * 3 * 0.7));
  EXPECT_DOUBLE_EQ(theorem1_radius(1, 1, 1, 1, 1.5), 0.01);
  EXPECT_THROW(theorem1_radius(0, 1, 1, 1, 2), std::invalid_argument);
  EXPECT_THROW(theorem1_radius(1, 1, 1, 0, 2), std::invalid_argument);
  EXPECT_THROW(theorem1_radius(1, 1, 1, 1, 1), std::invalid_argument);
}

TEST(WeightProfile, CollectsCharacteristics) {
  const Grid g = grid::make_grid(1, 256, 1.0);
  const auto b = sample(grid::LogAbs{}, g);
  const auto w = sample(grid::PowerAbs{0.3}, g);
  const auto cubes = make_cube_family(g, 6);
  const auto prof = make_weight_profile(w, {1.5, 2, 3}, cubes);
  EXPECT_EQ(prof.characteristics.size(), 3u);
  EXPECT_FALSE(prof.bmo.has_value());
  for (const auto& [p, v] : prof.characteristics) EXPECT_GE(v, 1.0);
  const auto sym = make_weight_profile(grid::map(b, [](grid::cplx v) { return std::exp(v); }), {2}, cubes, true);
  EXPECT_TRUE(sym.bmo.has_value());
}
