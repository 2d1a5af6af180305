#include <gtest/gtest.h>

#include <cmath>

#include "spheremean/random_field.hpp"
#include "spheremean/solver.hpp"

using namespace spheremean;

namespace {

struct Case {
  int n;
  int ell;
  double r;
};

std::vector<Case> supported_cases() {
  std::vector<Case> out;
  for (double r : {0.3, 1.0}) {
    out.push_back({1, 0, r});
    for (int n = 2; n <= 3; ++n)
      for (int ell = 0; ell <= 1; ++ell) out.push_back({n, ell, r});
  }
  return out;
}

Grid grid_for(int n) { return Grid::cube(n, n == 3 ? 16 : 32, 16.0); }

/// Random field whose spectrum avoids bins where |symbol| < 1e-3 max|symbol|.
Field regular_field(const SpectralOperator& op, std::uint64_t seed) {
  double top = 0.0;
  for (const auto& v : op.table()) top = std::max(top, std::abs(v));
  return random_band_limited(op.grid(), seed, 2.0 / 3.0,
                             [&](std::size_t b) { return std::fabs(op.multiplier(b)) >= 1e-3 * top; });
}

/// Plane wave along the first axis at the first symbol zero, exactly on-lattice.
struct KernelSetup {
  OperatorSpec spec;
  Grid grid;
  Field wave;
};

KernelSetup kernel_setup(int n, int ell) {
  const OperatorSpec spec(n, 1.0, ell);
  const Grid grid = kernel_grid(spec, 1, 32);
  std::vector<long> k(static_cast<std::size_t>(n), 0);
  k[0] = 1;
  return {spec, grid, plane_wave(grid, k)};
}

}  // namespace

TEST(RangeTest, ImagesOfTheOperatorAreInRange) {
  for (const auto& c : supported_cases()) {
    const OperatorSpec spec(c.n, c.r, c.ell);
    const SpectralOperator op(spec, grid_for(c.n));
    const double eps_sym = default_eps_sym(op);
    for (int i = 0; i < 100; ++i) {
      const Field w = op.apply(random_band_limited(op.grid(), 1000u * c.n + 100u * c.ell + i));
      const RangeReport rep = range_test(op, w, eps_sym, 1e-10);
      ASSERT_TRUE(rep.in_range()) << spec.describe() << " field " << i;
      ASSERT_LE(rep.obstruction_mass, 1e-12 * rep.w_hat_l2);
      EXPECT_EQ(rep.count(BinClass::obstructed), 0u);
    }
  }
}

TEST(RangeTest, KernelPlaneWaveIsObstructedAtItsBin) {
  for (auto [n, ell] : std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}}) {
    const auto ks = kernel_setup(n, ell);
    const SpectralOperator op(ks.spec, ks.grid);
    const RangeReport rep = range_test(op, ks.wave, default_eps_sym(op));
    EXPECT_FALSE(rep.in_range());
    std::array<std::size_t, 3> idx{0, 0, 0};
    idx[0] = ks.grid.index_of_wavenumber(0, 1);
    const std::size_t bin = ks.grid.ravel(idx);
    EXPECT_EQ(rep.bins[bin], BinClass::obstructed);
    EXPECT_LE(std::fabs(op.multiplier(bin)), 1e-10);
    EXPECT_NEAR(rep.obstruction_mass, rep.w_hat_l2, 1e-12 * rep.w_hat_l2);
    EXPECT_EQ(rep.count(BinClass::obstructed), 1u);
  }
}

TEST(RangeTest, ZeroFieldIsInRange) {
  const OperatorSpec spec(2, 1.0, 1);
  const Grid g = grid_for(2);
  const Field zero(g, Space::physical);
  const RangeReport rep = range_test(spec, zero, 1e-8);
  EXPECT_TRUE(rep.in_range());
  EXPECT_EQ(rep.obstruction_mass, 0.0);
  EXPECT_EQ(sup_norm(deconvolve(spec, zero, 1e-8).values), 0.0);
}

TEST(RangeTest, ClassificationRules) {
  const auto ks = kernel_setup(2, 0);
  const SpectralOperator op(ks.spec, ks.grid);
  Field w = op.apply(random_band_limited(ks.grid, 3));
  // below eps_data * ||w^||_inf at the zero bin: degenerate but consistent
  const double sup_hat = sup_norm(forward_transform(w).values);
  for (std::size_t i = 0; i < w.values.size(); ++i)
    w.values[i] += 1e-3 * 1e-8 * sup_hat / ks.grid.volume() * ks.wave.values[i];
  const RangeReport rep = range_test(op, w, default_eps_sym(op));
  EXPECT_TRUE(rep.in_range());
  EXPECT_EQ(rep.count(BinClass::obstructed), 0u);
  EXPECT_GE(rep.count(BinClass::degenerate_consistent), 1u);
  EXPECT_EQ(rep.obstruction_mass, 0.0);
  for (const auto& d : rep.degenerate) {
    EXPECT_LT(std::fabs(d.symbol), rep.eps_sym);
    EXPECT_FALSE(d.obstructed);
  }
}

TEST(RangeTest, LargerSymbolThresholdCanOnlyAddObstruction) {
  const auto ks = kernel_setup(3, 1);
  const SpectralOperator op(ks.spec, ks.grid);
  Field w = op.apply(random_band_limited(ks.grid, 17));
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += 1e-6 * ks.wave.values[i];
  double top = 0.0;
  for (const auto& v : op.table()) top = std::max(top, std::abs(v));
  double previous_mass = -1.0;
  bool previous_in_range = true;
  for (double rel : {1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0, 2.0}) {
    const RangeReport rep = range_test(op, w, rel * top);
    EXPECT_GE(rep.obstruction_mass, previous_mass) << rel;
    // once obstructed at some eps_sym, every larger eps_sym is obstructed too
    if (!previous_in_range) {
      EXPECT_FALSE(rep.in_range()) << rel;
    }
    previous_mass = rep.obstruction_mass;
    previous_in_range = rep.in_range();
  }
  EXPECT_FALSE(previous_in_range);
  EXPECT_TRUE(range_test(op, w, 1e-14 * top).in_range());
}

TEST(RangeTest, LargerDataThresholdNeverAddsObstruction) {
  const auto ks = kernel_setup(2, 1);
  const SpectralOperator op(ks.spec, ks.grid);
  Field w = op.apply(random_band_limited(ks.grid, 23));
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += 1e-5 * ks.wave.values[i];
  bool was_in_range = false;
  for (double eps_data : {1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
    const bool in = range_test(op, w, default_eps_sym(op), eps_data).in_range();
    if (was_in_range) {
      EXPECT_TRUE(in) << eps_data;
    }
    was_in_range = in;
  }
  EXPECT_TRUE(was_in_range);
}

TEST(RangeTest, UnsupportedOrders) {
  const Field w(grid_for(2), Space::physical);
  EXPECT_THROW(range_test(OperatorSpec(2, 1.0, 2), w, 1e-8), UnsupportedOrderError);
  EXPECT_THROW(range_test(OperatorSpec(1, 1.0, 1), Field(grid_for(1), Space::physical), 1e-8), UnsupportedOrderError);
  EXPECT_THROW(deconvolve(OperatorSpec(3, 1.0, 3), Field(grid_for(3), Space::physical), 1e-8), UnsupportedOrderError);
}

TEST(RangeTest, ThresholdsMustBePositive) {
  const Field w(grid_for(2), Space::physical);
  EXPECT_THROW(range_test(OperatorSpec(2, 1.0, 0), w, 0.0), ConfigurationError);
  EXPECT_THROW(range_test(OperatorSpec(2, 1.0, 0), w, 1e-8, -1.0), ConfigurationError);
}

TEST(RangeReport, JsonLayout) {
  const auto ks = kernel_setup(2, 0);
  const RangeReport rep = range_test(ks.spec, ks.wave, 1e-8);
  const auto j = rep.to_json();
  EXPECT_EQ(j.at("verdict"), "obstructed");
  EXPECT_DOUBLE_EQ(j.at("obstruction_mass").get<double>(), rep.obstruction_mass);
  EXPECT_EQ(j.at("eps_sym").get<double>(), 1e-8);
  EXPECT_EQ(j.at("eps_data").get<double>(), kDefaultEpsData);
  ASSERT_FALSE(j.at("degenerate_bins").empty());
  const auto& first = j.at("degenerate_bins")[0];
  EXPECT_TRUE(first.contains("k"));
  EXPECT_TRUE(first.contains("symbol"));
  EXPECT_TRUE(first.contains("w_hat_mag"));
}

TEST(Deconvolve, RoundTripOnRegularSupport) {
  for (const auto& c : supported_cases()) {
    const OperatorSpec spec(c.n, c.r, c.ell);
    const SpectralOperator op(spec, grid_for(c.n));
    for (int i = 0; i < 10; ++i) {
      const Field v = regular_field(op, 500u + i);
      const Field w = op.apply(v);
      const Solution sol = solve(op, w, default_eps_sym(op));
      EXPECT_LE(relative_l2_difference(sol.v, v), 1e-8) << spec.describe();
      EXPECT_LE(relative_l2_difference(op.apply(sol.v), w), 1e-10);
    }
  }
}

TEST(Deconvolve, SingleRegularPlaneWave) {
  const OperatorSpec spec(3, 1.0, 1);
  const Grid g = grid_for(3);
  const Field wave = plane_wave(g, {2, -1, 1});
  const double s = symbol(spec, g.frequency_norm(g.ravel({2, 15, 1})));
  Field w = wave;
  for (auto& v : w.values) v *= s;
  EXPECT_LE(relative_l2_difference(deconvolve(spec, w, 1e-8), wave), 1e-13);
}

TEST(Deconvolve, TinyDegenerateMassIsZeroed) {
  const auto ks = kernel_setup(3, 0);
  const SpectralOperator op(ks.spec, ks.grid);
  Field w = op.apply(regular_field(op, 77));
  const double w_norm = l2_norm(w.values);
  const double sup_hat = sup_norm(forward_transform(w).values);
  for (std::size_t i = 0; i < w.values.size(); ++i)
    w.values[i] += 0.5 * kDefaultEpsData * sup_hat / ks.grid.volume() * ks.wave.values[i];
  const double eps_sym = default_eps_sym(op);
  const Solution sol = solve(op, w, eps_sym);
  EXPECT_GE(sol.report.count(BinClass::degenerate_consistent), 1u);
  const Field v_hat = forward_transform(sol.v);
  std::array<std::size_t, 3> idx{ks.grid.index_of_wavenumber(0, 1), 0, 0};
  EXPECT_LE(std::abs(v_hat.values[ks.grid.ravel(idx)]), 1e-14 * sup_norm(v_hat.values));
  const double residual = relative_l2_difference(op.apply(sol.v), w) * w_norm;
  EXPECT_LE(residual, eps_sym * w_norm + 1e-10 * w_norm);
  EXPECT_GT(residual, 0.0);
}

TEST(Deconvolve, ObstructedInputRaisesRangeError) {
  const auto ks = kernel_setup(2, 1);
  try {
    deconvolve(ks.spec, ks.wave, 1e-8);
    FAIL() << "expected RangeError";
  } catch (const RangeError& e) {
    EXPECT_FALSE(e.report().in_range());
    EXPECT_EQ(e.report().to_json().at("verdict"), "obstructed");
  }
}

TEST(Deconvolve, ReverseInclusion) {
  // Any w with no obstruction is reproduced by applying the operator to its preimage.
  for (const auto& c : supported_cases()) {
    const OperatorSpec spec(c.n, c.r, c.ell);
    const SpectralOperator op(spec, grid_for(c.n));
    const double eps_sym = default_eps_sym(op);
    Field w_hat = forward_transform(random_band_limited(op.grid(), 900u + c.n));
    for (std::size_t b = 0; b < w_hat.values.size(); ++b)
      if (std::fabs(op.multiplier(b)) < eps_sym) w_hat.values[b] = 0.0;
    const Field w = inverse_transform(w_hat);
    const Solution sol = solve(op, w, eps_sym);
    ASSERT_EQ(sol.report.obstruction_mass, 0.0);
    EXPECT_LE(relative_l2_difference(op.apply(sol.v), w), eps_sym + 1e-10) << spec.describe();
  }
}

TEST(Deconvolve, KernelMakesPreimagesNonUnique) {
  for (auto [n, ell] : std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}}) {
    const auto ks = kernel_setup(n, ell);
    const SpectralOperator op(ks.spec, ks.grid);
    const Field w = op.apply(regular_field(op, 55));
    Field v = solve(op, w, default_eps_sym(op)).v;
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] += ks.wave.values[i];
    EXPECT_LE(relative_l2_difference(op.apply(v), w), 1e-10);
  }
}
