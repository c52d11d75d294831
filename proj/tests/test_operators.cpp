#include "roughvar/operators.hpp"
#include "roughvar/sample.hpp"
#include "roughvar/variation.hpp"
#include "roughvar/weights.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace roughvar;
using namespace roughvar::operators;
using grid::make_grid;
using grid::sample;
using kernels::make_omega;

namespace {

double max_abs(const SampledFunction& f) {
  double m = 0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double max_diff(const SampledFunction& a, const SampledFunction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

std::size_t index_of(const Grid& g, double x) { return static_cast<std::size_t>(std::llround((x + g.L) / g.h)); }

SampledFunction random_field(const Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N;
  auto f = SampledFunction::zeros(g);
  for (auto& v : f.values) v = N(rng);
  return f;
}

// Direct quadrature of int_{a <= |y| < b} Omega(y')/|y|^n f(x - y) dy with the
// library's weighting convention, evaluated pointwise by brute force.
SampledFunction direct_shell(const SampledFunction& f, const kernels::SphereKernel& om, double a, double b) {
  const Grid& g = f.grid;
  auto k = sio_shell(g, om, a, b);
  SampledFunction out = SampledFunction::zeros(g);
  const long M = long(g.m), c = M / 2;
  for (long i = 0; i < M; ++i)
    for (long j = 0; j < M; ++j) {
      const double kv = k[((i - j + c) % M + M) % M];
      if (kv != 0) out.values[i] += f.values[j] * kv * g.h;
    }
  return out;
}

}  // namespace

TEST(TruncatedSio, AnnihilatesConstants) {
  for (int n : {1, 2}) {
    const auto g = make_grid(n, n == 1 ? 1024 : 128, 4.0);
    const auto om = make_omega(n == 1 ? kernels::OmegaSpec{kernels::OddSign{}} : kernels::OmegaSpec{kernels::CosK{1}}, n);
    const auto out = truncated_sio(sample(grid::Constant{1.0}, g), om, 2 * g.h);
    EXPECT_LT(max_abs(out), 1e-12);
  }
}

TEST(TruncatedSio, LogTwoClosedForm) {
  const auto g = make_grid(1, 8192, 8.0);
  const auto f = sample(grid::Indicator{{0, 0}, {1, 0}}, g);
  const auto out = truncated_sio(f, make_omega(kernels::OddSign{}, 1), 0.1);
  EXPECT_NEAR(out.values[index_of(g, 2.0)].real(), std::log(2.0), 1e-3);
}

TEST(TruncatedSio, OddKernelEvenInputGivesOddOutput) {
  const auto g = make_grid(1, 1024, 4.0);
  const auto f = sample(grid::Gaussian{0.3}, g);
  const auto out = truncated_sio(f, make_omega(kernels::OddSign{}, 1), 0.05);
  double err = 0;
  for (std::size_t i = 1; i < g.m; ++i) err = std::max(err, std::abs(out.values[i] + out.values[g.m - i]));
  EXPECT_LT(err, 1e-10);
}

TEST(TruncatedSio, Preconditions) {
  const auto g = make_grid(1, 256, 4.0);
  const auto f = sample(grid::Gaussian{0.3}, g);
  EXPECT_THROW(truncated_sio(f, make_omega(kernels::OddSign{}, 1), g.h / 2), std::invalid_argument);
  EXPECT_THROW(truncated_sio(f, make_omega(kernels::OddSign{}, 1), 2.5), std::invalid_argument);
  EXPECT_THROW(truncated_sio(f, make_omega(kernels::ConstantOmega{1.0}, 1), 0.1), std::invalid_argument);
}

TEST(Averaging, ClosedForms) {
  const auto g = make_grid(1, 4096, 4.0);
  const auto one = sample(grid::Constant{1.0}, g);
  EXPECT_LT(max_abs(averaging(one, make_omega(kernels::OddSign{}, 1), 0.5)), 1e-12);
  const auto two = averaging(one, make_omega(kernels::ConstantOmega{1.0}, 1), 0.5);
  for (const auto& v : two.values) EXPECT_NEAR(v.real(), 2.0, 1e-12);
  const auto sq = averaging(sample(grid::Monomial{0, 2}, g), make_omega(kernels::ConstantOmega{1.0}, 1), 0.5);
  EXPECT_NEAR(sq.values[g.origin_index()].real(), 1.0 / 6.0, 1e-4);
  EXPECT_THROW(averaging(one, make_omega(kernels::OddSign{}, 1), 3.0), std::invalid_argument);
}

TEST(Averaging, TwoDimensionalMass) {
  const auto g = make_grid(2, 256, 4.0);
  const auto one = sample(grid::Constant{1.0}, g);
  const auto out = averaging(one, make_omega(kernels::ConstantOmega{1.0}, 2), 1.0);
  // t^-2 |B(0,1)| = pi, up to O(h) boundary error.
  EXPECT_NEAR(out.values[0].real(), std::numbers::pi, 0.02);
}

TEST(Commutator, TrivialCases) {
  const auto g = make_grid(1, 1024, 4.0);
  const auto f = sample(grid::Gaussian{0.3, {0.2, 0}}, g);
  const OperatorSpec op = Sio{make_omega(kernels::OddSign{}, 1), 0.05};
  EXPECT_LT(max_abs(apply_commutator(op, f, sample(grid::Constant{3.0}, g), 1)), 1e-12);
  EXPECT_LT(max_diff(apply_commutator(op, f, sample(grid::LogAbs{}, g), 0), operators::apply(op, f)), 1e-15);
  auto cx = f;
  cx.tag = grid::Tag::complex;
  EXPECT_THROW(apply_commutator(op, f, cx, 1), std::invalid_argument);
}

TEST(Commutator, ClosedFormPointNine) {
  const auto g = make_grid(1, 8192, 8.0);
  const auto f = sample(grid::Indicator{{0, 0}, {1, 0}}, g);
  const auto b = sample(grid::Coordinate{0}, g);
  const auto out = apply_commutator(Sio{make_omega(kernels::OddSign{}, 1), 0.1}, f, b, 1);
  EXPECT_NEAR(out.values[g.origin_index()].real(), 0.9, 1e-3);
}

TEST(Commutator, FirstOrderIsBTfMinusTbf) {
  const auto g = make_grid(2, 64, 4.0);
  const auto f = random_field(g, 4), b = sample(grid::LogAbs{}, g);
  for (const OperatorSpec& op : {OperatorSpec{Sio{make_omega(kernels::CosK{1}, 2), 0.2}},
                                 OperatorSpec{Avg{make_omega(kernels::ConstantOmega{1.0}, 2), 0.5}},
                                 OperatorSpec{Mollifier{0}}}) {
    const auto lhs = apply_commutator(op, f, b, 1);
    const auto rhs = b * operators::apply(op, f) - operators::apply(op, b * f);
    EXPECT_LT(max_diff(lhs, rhs) / max_abs(rhs), 1e-12);
  }
}

TEST(Commutator, SecondOrderMatchesDefinition) {
  // T_{b,2} f(x) = sum_y k(x - y) (b(x) - b(y))^2 f(y) h, by brute force.
  const auto g = make_grid(1, 64, 4.0);
  const auto om = make_omega(kernels::OddSign{}, 1);
  const auto f = random_field(g, 8), b = sample(grid::SinLogAbs{}, g);
  const auto k = sio_shell(g, om, 0.25, outer_radius(g));
  const long M = long(g.m), c = M / 2;
  const auto out = apply_commutator(Sio{om, 0.25}, f, b, 2);
  for (long i = 0; i < M; ++i) {
    double s = 0;
    for (long j = 0; j < M; ++j) {
      const double d = b.values[i].real() - b.values[j].real();
      s += k[((i - j + c) % M + M) % M] * d * d * f.values[j].real() * g.h;
    }
    EXPECT_NEAR(out.values[i].real(), s, 1e-12 * (1 + std::abs(s)));
  }
}

TEST(Operators, Linearity) {
  const auto g = make_grid(2, 64, 4.0);
  const auto f1 = random_field(g, 1), f2 = random_field(g, 2);
  for (const OperatorSpec& op : {OperatorSpec{Sio{make_omega(kernels::CosK{2}, 2), 0.2}},
                                 OperatorSpec{Avg{make_omega(kernels::OddSign{}, 2), 0.7}},
                                 OperatorSpec{Mollifier{1}},
                                 OperatorSpec{Piece{kernels::annulus_kernel(make_omega(kernels::CosK{1}, 2), -1, g)}}}) {
    const auto lhs = operators::apply(op, 2.5 * f1 + f2);
    const auto rhs = 2.5 * operators::apply(op, f1) + operators::apply(op, f2);
    EXPECT_LT(max_diff(lhs, rhs) / max_abs(lhs), 1e-12);
  }
}

TEST(Operators, ShellAdditivity) {
  const auto g = make_grid(1, 512, 4.0);
  const auto om = make_omega(kernels::OddSign{}, 1);
  const auto f = random_field(g, 3);
  for (auto [e1, e2] : {std::pair{0.05, 0.3}, std::pair{0.1, 1.0}, std::pair{0.7, 1.9}}) {
    const auto diff = truncated_sio(f, om, e1) - truncated_sio(f, om, e2);
    const auto shell = direct_shell(f, om, e1, e2);
    EXPECT_LT(max_diff(diff, shell), 1e-10 * (1 + max_abs(shell)));
  }
}

TEST(Family, SingleRadiusMatchesOperator) {
  const auto g = make_grid(2, 64, 4.0);
  const auto om = make_omega(kernels::CosK{1}, 2);
  const auto f = random_field(g, 6), b = sample(grid::LogAbs{}, g);
  const auto ladder = ladder_from_radii({0.5});
  for (int u : {0, 1, 2}) {
    const auto fam = evaluate_family(FamilyKind::sio, f, &b, u, om, ladder);
    EXPECT_EQ(fam.length(), 1u);
    const auto direct = apply_commutator(Sio{om, 0.5}, f, b, u);
    EXPECT_LT(max_diff(fam.column(0), direct), 1e-12 * (1 + max_abs(direct)));
    const auto avg = evaluate_family(FamilyKind::avg, f, &b, u, om, ladder);
    const auto davg = apply_commutator(Avg{om, 0.5}, f, b, u);
    EXPECT_LT(max_diff(avg.column(0), davg), 1e-12 * (1 + max_abs(davg)));
  }
}

TEST(Family, ConstantInputGivesZero) {
  const auto g = make_grid(2, 64, 4.0);
  const auto fam = evaluate_family(FamilyKind::sio, sample(grid::Constant{1.0}, g), nullptr, 0,
                                   make_omega(kernels::OddSign{}, 2), make_ladder(-2, 0, 3));
  for (double v : fam.re) EXPECT_LT(std::abs(v), 1e-12);
}

TEST(Family, IncrementalColumnsMatchFromScratch) {
  const auto g = make_grid(1, 1024, 4.0);
  const auto om = make_omega(kernels::OddSign{}, 1);
  const auto f = random_field(g, 7);
  const auto ladder = make_ladder(-3, 1, 4);
  const auto fam = evaluate_family(FamilyKind::sio, f, nullptr, 0, om, ladder);
  for (std::size_t r = 0; r < ladder.size(); ++r) {
    const auto direct = truncated_sio(f, om, ladder.radii[r]);
    EXPECT_LT(max_diff(fam.column(r), direct), 1e-10);
  }
  for (std::size_t r = 0; r + 1 < ladder.size(); ++r) {
    const auto shell = direct_shell(f, om, ladder.radii[r], ladder.radii[r + 1]);
    EXPECT_LT(max_diff(fam.column(r) - fam.column(r + 1), shell), 1e-10);
  }
  const auto avg = evaluate_family(FamilyKind::avg, f, nullptr, 0, make_omega(kernels::ConstantOmega{1.0}, 1), ladder);
  for (std::size_t r = 0; r < ladder.size(); ++r)
    EXPECT_LT(max_diff(avg.column(r), averaging(f, make_omega(kernels::ConstantOmega{1.0}, 1), ladder.radii[r])), 1e-10);
}

TEST(Family, LadderValidation) {
  EXPECT_THROW(ladder_from_radii({}), std::invalid_argument);
  EXPECT_THROW(ladder_from_radii({1.0, 0.5}), std::invalid_argument);
  const auto g = make_grid(1, 64, 4.0);
  const auto f = sample(grid::Gaussian{0.3}, g);
  EXPECT_THROW(evaluate_family(FamilyKind::sio, f, nullptr, 0, make_omega(kernels::OddSign{}, 1), make_ladder(-1, 2, 2)),
               std::invalid_argument);
  const auto l = make_ladder(-2, 1, 3);
  EXPECT_EQ(l.size(), 10u);
  EXPECT_EQ(l.anchors, (std::vector<std::size_t>{0, 3, 6, 9}));
}

TEST(Maximal, BasicContracts) {
  const auto g = make_grid(1, 512, 4.0);
  const auto om = make_omega(kernels::OddSign{}, 1);
  const auto f = random_field(g, 9);
  const auto one = evaluate_family(FamilyKind::sio, f, nullptr, 0, om, ladder_from_radii({0.25}));
  const auto mx = maximal(one);
  for (std::size_t p = 0; p < g.size(); ++p) EXPECT_EQ(mx.values[p].real(), std::abs(one.at(p, 0)));
  const auto zero = evaluate_family(FamilyKind::sio, SampledFunction::zeros(g), nullptr, 0, om, make_ladder(-2, 0, 2));
  EXPECT_EQ(max_abs(maximal(zero)), 0.0);
}

TEST(Maximal, DominatedByVariationPlusOneColumn) {
  const auto g = make_grid(1, 512, 4.0);
  const auto om = make_omega(kernels::OddSign{}, 1);
  const auto b = sample(grid::LogAbs{}, g);
  const auto fam = evaluate_family(FamilyKind::sio, random_field(g, 10), &b, 1, om, make_ladder(-4, 1, 3));
  const auto mx = maximal(fam);
  for (double rho : {1.0, 2.0, 3.0}) {
    const auto V = variation::pointwise_variation(fam, rho);
    for (std::size_t r = 0; r < fam.length(); ++r)
      for (std::size_t p = 0; p < g.size(); ++p)
        EXPECT_LE(mx.values[p].real(), V.values[p] + std::abs(fam.at(p, r)) + 1e-12);
  }
}

TEST(Decomposition, ResidualContracts) {
  const auto g = make_grid(1, 2048, 16.0);
  const auto om = make_omega(kernels::OddSign{}, 1);
  EXPECT_EQ(decomposition_residual(SampledFunction::zeros(g), om, 0, 3), 0.0);
  const auto f = sample(grid::BandLimitedRandom{1, 8.0}, g);
  const auto J = resolvable_scales(g);
  const int full = J.j_max - J.j_min;
  EXPECT_LE(decomposition_residual(f, om, 0, full), 1e-8);
  double prev = decomposition_residual(f, om, 0, 0);
  for (int s = 1; s <= full; ++s) {
    const double r = decomposition_residual(f, om, 0, s);
    EXPECT_LE(r, prev + 1e-12) << "s_range = " << s;
    prev = r;
  }
  EXPECT_THROW(decomposition_residual(f, om, J.j_max + 1, 1), std::invalid_argument);
}

TEST(Decomposition, TwoDimensional) {
  const auto g = make_grid(2, 128, 8.0);
  const auto om = make_omega(kernels::CosK{1}, 2);
  const auto f = sample(grid::BandLimitedRandom{2, 3.0}, g);
  const auto J = resolvable_scales(g);
  EXPECT_LE(decomposition_residual(f, om, 0, J.j_max - J.j_min), 1e-8);
}

TEST(Cauchy, ScalarIdentity) {
  EXPECT_NEAR(std::abs(contour_difference(1.0, 0.5, 64) - 1.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(contour_difference(-2.5, 0.1, 32) + 2.5), 0.0, 1e-10);
}

TEST(Cauchy, ConstantSymbolVanishes) {
  const auto g = make_grid(1, 256, 4.0);
  const auto f = random_field(g, 12);
  const auto out = cauchy_commutator(Mollifier{0}, f, sample(grid::Constant{2.0}, g), 0.1, 64);
  EXPECT_LT(max_abs(out), 1e-12);
}

TEST(Cauchy, MatchesBinomialCommutator) {
  const auto g = make_grid(1, 1024, 8.0);
  const auto b = sample(grid::LogAbs{}, g);
  const double bmo = weights::bmo_norm(b, weights::make_cube_family(g, 8));
  const auto f = sample(grid::BandLimitedRandom{4, 4.0}, g);
  const auto direct = apply_commutator(Mollifier{0}, f, b, 1);
  const auto contour = cauchy_commutator(Mollifier{0}, f, b, 0.1 / bmo, 128);
  EXPECT_LE(grid::lp_norm(contour - direct, 2) / grid::lp_norm(direct, 2), 1e-8);
  EXPECT_THROW(cauchy_commutator(Mollifier{0}, f, b, 100.0, 128), std::domain_error);
}

TEST(SphereMean, TrivialCases) {
  const auto g = make_grid(1, 1024, 4.0);
  const auto one = sample(grid::Constant{1.0}, g);
  EXPECT_LT(max_abs(sphere_mean_derivative(one, make_omega(kernels::OddSign{}, 1), 0, 1.5)), 1e-14);
  const auto f = sample(grid::Gaussian{0.4, {0.1, 0}}, g);
  const auto out = sphere_mean_derivative(f, make_omega(kernels::ConstantOmega{1.0}, 1), -1, 1.25);
  const double r = 0.625;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(i);
    const double expect = -(grid::interpolate(f, {x - r, 0}).real() + grid::interpolate(f, {x + r, 0}).real()) / 1.25;
    EXPECT_NEAR(out.values[i].real(), expect, 1e-12);
  }
  EXPECT_THROW(sphere_mean_derivative(f, make_omega(kernels::OddSign{}, 1), 1, 1.5), std::invalid_argument);
  const auto pos = sphere_mean_abs(f, make_omega(kernels::OddSign{}, 1), -1, 1.25);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(pos.values[i].real(), std::abs(out.values[i].real()) - 1e-15);
}

TEST(SphereMean, MatchesCentralDifferences) {
  const auto g = make_grid(1, 32768, 4.0);
  const auto om = make_omega(kernels::OddSign{}, 1);
  const auto f = sample(grid::Gaussian{0.5, {0.3, 0}}, g);
  const double t = 1.5, delta = 1e-3;
  const auto fam = evaluate_family(FamilyKind::sio, f, nullptr, 0, om, ladder_from_radii({t - delta, t + delta}));
  const auto fd = (1.0 / (2 * delta)) * (fam.column(1) - fam.column(0));
  const auto exact = sphere_mean_derivative(f, om, 0, t);
  EXPECT_LE(grid::lp_norm(fd - exact, 2) / grid::lp_norm(exact, 2), 1e-3);
}

TEST(SphereMean, TwoDimensionalCentralDifferences) {
  const auto g = make_grid(2, 512, 4.0);
  const auto om = make_omega(kernels::CosK{1}, 2);
  const auto f = sample(grid::Gaussian{0.5, {0.2, -0.1}}, g);
  const double t = 1.5, delta = 1e-2;
  const auto fam = evaluate_family(FamilyKind::sio, f, nullptr, 0, om, ladder_from_radii({t - delta, t + delta}));
  const auto fd = (1.0 / (2 * delta)) * (fam.column(1) - fam.column(0));
  const auto exact = sphere_mean_derivative(f, om, 0, t);
  EXPECT_LE(grid::lp_norm(fd - exact, 2) / grid::lp_norm(exact, 2), 3e-2);
}
