#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spheremean/field.hpp"
#include "spheremean/symbol.hpp"
#include "spheremean/verify/oracle.hpp"

using namespace spheremean;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(OperatorSpec, SurfaceConstant) {
  EXPECT_EQ(OperatorSpec(1, 3.0, 0).c_r(), 0.5);
  EXPECT_NEAR(OperatorSpec(2, 2.0, 0).c_r(), 1.0 / (2.0 * kPi * 2.0), 1e-16);
  EXPECT_NEAR(OperatorSpec(3, 2.0, 1).c_r(), 1.0 / (4.0 * kPi * 4.0), 1e-16);
}

TEST(OperatorSpec, Validation) {
  EXPECT_THROW(OperatorSpec(0, 1.0, 0), ConfigurationError);
  EXPECT_THROW(OperatorSpec(4, 1.0, 0), ConfigurationError);
  EXPECT_THROW(OperatorSpec(2, 0.0, 0), ConfigurationError);
  EXPECT_THROW(OperatorSpec(2, -1.0, 0), ConfigurationError);
  EXPECT_THROW(OperatorSpec(2, 1.0, -1), ConfigurationError);
  EXPECT_THROW(OperatorSpec(2, std::nan(""), 0), ConfigurationError);
}

TEST(OperatorSpec, CarriesRecomputedConstant) {
  const OperatorSpec s(3, 0.7, 0);
  EXPECT_EQ(s.with_radius(1.3).c_r(), surface_constant(3, 1.3));
  EXPECT_EQ(s.with_ell(2).ell(), 2);
  EXPECT_EQ(s.order().nu(), 0.5);
}

TEST(Symbol, Examples) {
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(symbol(OperatorSpec(n, 2.5, 0), 0.0), 1.0);
  EXPECT_NEAR(symbol(OperatorSpec(3, 1.0, 0), kPi), 0.0, 1e-12);
  EXPECT_EQ(symbol(OperatorSpec(2, 1.0, 1), 0.0), 0.0);
}

TEST(SymbolExpanded, FirstOrderClosedFormAtPi) {
  // -(pi^2/3) j_{3/2}(pi) with j_{3/2}(x) = 3 (sin x - x cos x) / x^3, i.e. -1
  EXPECT_NEAR(symbol_expanded(OperatorSpec(3, 1.0, 1), kPi), -1.0, 1e-12);
  EXPECT_NEAR(symbol(OperatorSpec(3, 1.0, 1), kPi), -1.0, 1e-12);
}

TEST(SymbolExpanded, OrderZeroIsTheSingleTerm) {
  for (double rho : {0.0, 0.4, 5.0, 77.0})
    EXPECT_EQ(symbol_expanded(OperatorSpec(2, 1.3, 0), rho), eval_j(BesselOrder(0.0), 1.3 * rho));
}

TEST(SymbolExpanded, SecondOrderInTheAxisymmetricPlane) {
  const OperatorSpec spec(2, 2.0, 2);
  const double ref = -0.5 * oracle::j(1.0, 2.0) + 0.125 * 4.0 * oracle::j(2.0, 2.0);
  EXPECT_NEAR(symbol_expanded(spec, 1.0), ref, 1e-14);
  EXPECT_NEAR(symbol(spec, 1.0), ref, 1e-14);
}

TEST(SymbolExpanded, AgreesWithDirectFormOnRandomDraws) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> n_dist(1, 3), ell_dist(0, 4);
  std::uniform_real_distribution<double> r_dist(0.3, 2.0), rho_dist(0.0, 200.0);
  for (int i = 0; i < 1000; ++i) {
    const OperatorSpec spec(n_dist(rng), r_dist(rng), ell_dist(rng));
    const double rho = rho_dist(rng);
    const double a = symbol(spec, rho);
    const double b = symbol_expanded(spec, rho);
    ASSERT_LE(std::fabs(a - b), 1e-10 * (1.0 + std::fabs(a))) << spec.describe() << " rho=" << rho;
  }
}

TEST(Symbol, LatticeEvennessIsBitExact) {
  const Grid grid = Grid::cube(2, 16, 3.7);
  const SymbolEvaluator sym(OperatorSpec(2, 0.8, 1));
  for (std::size_t b = 0; b < grid.size(); ++b) {
    auto k = grid.wavenumbers(b);
    if (k[0] == -8 || k[1] == -8) continue;
    const std::size_t mirrored = grid.ravel({grid.index_of_wavenumber(0, -k[0]), grid.index_of_wavenumber(1, -k[1]), 0});
    EXPECT_EQ(sym(grid.frequency_norm(b)), sym(grid.frequency_norm(mirrored)));
  }
}

TEST(Symbol, DilationLawIsExact) {
  for (int n = 1; n <= 3; ++n)
    for (double r : {0.3, 1.7})
      for (double rho : {0.5, 3.0, 41.0})
        EXPECT_EQ(symbol(OperatorSpec(n, r, 0), rho), symbol(OperatorSpec(n, 1.0, 0), r * rho));
}

TEST(SymbolZeros, Examples) {
  const auto a = symbol_zeros(OperatorSpec(3, 1.0, 0), 5);
  for (int m = 1; m <= 5; ++m) EXPECT_NEAR(a[m - 1], m * kPi, 1e-12);
  const auto b = symbol_zeros(OperatorSpec(1, 1.0, 0), 5);
  for (int m = 1; m <= 5; ++m) EXPECT_NEAR(b[m - 1], (m - 0.5) * kPi, 1e-12);
  const auto c = symbol_zeros(OperatorSpec(2, 1.0, 1), 2);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_NEAR(c[1], oracle::bisect_series_zero(1.0, 3.7, 3.9), 1e-11);
  EXPECT_NEAR(c[2], oracle::bisect_series_zero(1.0, 6.9, 7.1), 1e-11);
}

TEST(SymbolZeros, ScaleWithRadius) {
  const auto one = symbol_zeros(OperatorSpec(2, 1.0, 0), 4);
  const auto two = symbol_zeros(OperatorSpec(2, 2.0, 0), 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(two[i], one[i] / 2.0);
}

TEST(SymbolZeros, SymbolVanishesThere) {
  for (int n = 1; n <= 3; ++n)
    for (int ell = 0; ell <= 2; ++ell)
      for (double r : {0.5, 1.0}) {
        const OperatorSpec spec(n, r, ell);
        for (double rho : symbol_zeros(spec, 20))
          EXPECT_LE(std::fabs(symbol(spec, rho)), 1e-10 * std::max(1.0, std::pow(rho, ell))) << spec.describe();
      }
}

TEST(InvertibilityParams, Validation) {
  EXPECT_THROW((InvertibilityParams{0.0, 10.0, {20.0}, 64}).validate(), ConfigurationError);
  EXPECT_THROW((InvertibilityParams{1.0, -1.0, {20.0}, 64}).validate(), ConfigurationError);
  EXPECT_THROW((InvertibilityParams{1.0, 10.0, {20.0}, 8}).validate(), ConfigurationError);
  EXPECT_THROW((InvertibilityParams{1.0, 10.0, {10.0}, 64}).validate(), ConfigurationError);
  EXPECT_NO_THROW((InvertibilityParams{1.0, 10.0, {10.5}, 16}).validate());
}

TEST(InvertibilityParams, LogSpacingEndsAtMaximum) {
  const auto p = InvertibilityParams::log_spaced(2.0, 10.0, 1000.0, 200);
  ASSERT_EQ(p.xi_samples.size(), 200u);
  EXPECT_GT(p.xi_samples.front(), 10.0);
  EXPECT_EQ(p.xi_samples.back(), 1000.0);
  for (std::size_t i = 1; i < p.xi_samples.size(); ++i) EXPECT_GT(p.xi_samples[i], p.xi_samples[i - 1]);
}

TEST(InvertibilityScan, SincWindowAtHundred) {
  const auto rep = invertibility_scan(OperatorSpec(3, 1.0, 0), InvertibilityParams{5.0, 10.0, {100.0}, 64});
  ASSERT_EQ(rep.windows.size(), 1u);
  const auto& w = rep.windows[0];
  EXPECT_TRUE(w.pass);
  EXPECT_GE(w.sup, 0.9 / w.window_hi);
  EXPECT_NEAR(w.threshold, std::pow(105.0, -5.0), 1e-22);
}

TEST(InvertibilityScan, WindowCentredOnAZeroStillPasses) {
  const OperatorSpec spec(2, 1.0, 0);
  const double zero = symbol_zeros(spec, 8).back();
  const auto rep = invertibility_scan(spec, InvertibilityParams{1.0, 10.0, {zero}, 64});
  EXPECT_TRUE(rep.all_pass());
  EXPECT_GT(rep.windows[0].sup, 100.0 * std::fabs(symbol(spec, zero)));
}

TEST(InvertibilityScan, NeumannPlaneCase) {
  const auto p = InvertibilityParams::log_spaced(6.0, 20.0, 1000.0, 50);
  const auto rep = invertibility_scan(OperatorSpec(2, 1.0, 1), p);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_TRUE(rep.failures().empty());
}

TEST(InvertibilityScan, ReportIsSortedAndReportsFailures) {
  // A threshold of (A + s)^-A with tiny A cannot be met by a decaying symbol.
  const auto rep = invertibility_scan(OperatorSpec(3, 1.0, 0), InvertibilityParams{0.01, 10.0, {900.0, 20.0, 300.0}, 32});
  ASSERT_EQ(rep.windows.size(), 3u);
  EXPECT_EQ(rep.windows[0].s, 20.0);
  EXPECT_EQ(rep.windows[2].s, 900.0);
  EXPECT_FALSE(rep.all_pass());
  EXPECT_EQ(rep.failures().size(), 3u);
}

TEST(InvertibilityScan, RecordedConstantsPass) {
  for (int n = 1; n <= 3; ++n)
    for (int ell = 0; ell <= 1; ++ell) {
      const auto c = recorded_invertibility_constants(n, ell);
      EXPECT_LE(c.A, 10.0);
      EXPECT_LE(c.B, 50.0);
      const auto rep =
          invertibility_scan(OperatorSpec(n, 1.0, ell), InvertibilityParams::log_spaced(c.A, c.B, 1000.0, 200));
      EXPECT_TRUE(rep.all_pass()) << n << " " << ell;
    }
  EXPECT_THROW(recorded_invertibility_constants(2, 2), ConfigurationError);
}

TEST(InvertibilityScan, SearchFindsConstants) {
  const auto c = search_invertibility_constants(OperatorSpec(2, 1.0, 0), 1000.0, 50);
  ASSERT_TRUE(c.has_value());
  EXPECT_LE(c->A, 10.0);
  EXPECT_LE(c->B, 50.0);
}
