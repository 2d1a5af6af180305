#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spheremean/field.hpp"
#include "spheremean/random_field.hpp"

using namespace spheremean;

namespace {

constexpr double kPi = std::numbers::pi;

Grid grid_for(int n) {
  switch (n) {
    case 1:
      return Grid({64}, {5.0});
    case 2:
      return Grid({32, 16}, {3.0, 7.0});
    default:
      return Grid({16, 32, 16}, {2.0, 4.0, 1.5});
  }
}

/// values[x] <- values[x - shift] with periodic wrap (shift in samples per axis)
Field roll(const Field& f, const std::array<long, 3>& shift) {
  Field out(f.grid, f.space);
  for (std::size_t flat = 0; flat < f.grid.size(); ++flat) {
    auto idx = f.grid.unravel(flat);
    for (int a = 0; a < f.grid.n(); ++a) {
      const auto len = static_cast<long>(f.grid.shape()[a]);
      idx[a] = static_cast<std::size_t>(((static_cast<long>(idx[a]) + shift[a]) % len + len) % len);
    }
    out.values[f.grid.ravel(idx)] = f.values[flat];
  }
  return out;
}

}  // namespace

TEST(Grid, Validation) {
  EXPECT_THROW(Grid({24}, {1.0}), ConfigurationError);
  EXPECT_THROW(Grid({8}, {1.0}), ConfigurationError);
  EXPECT_THROW(Grid({16}, {0.0}), ConfigurationError);
  EXPECT_THROW(Grid({16, 16}, {1.0}), ConfigurationError);
  EXPECT_THROW(Grid({16, 16, 16, 16}, {1.0, 1.0, 1.0, 1.0}), ConfigurationError);
  EXPECT_NO_THROW(Grid({16, 32}, {1.0, 2.0}));
}

TEST(Grid, FrequencyLattice) {
  const Grid g({16, 32}, {2.0, 4.0});
  EXPECT_EQ(g.wavenumber(0, 0), 0);
  EXPECT_EQ(g.wavenumber(0, 7), 7);
  EXPECT_EQ(g.wavenumber(0, 8), -8);
  EXPECT_EQ(g.wavenumber(0, 15), -1);
  EXPECT_EQ(g.index_of_wavenumber(1, -3), 29u);
  EXPECT_DOUBLE_EQ(g.frequency(1, 1), 2.0 * kPi / 4.0);
  EXPECT_DOUBLE_EQ(g.spacing(0), 0.125);
  EXPECT_DOUBLE_EQ(g.volume(), 8.0);
  const std::size_t b = g.ravel({3, 30, 0});
  EXPECT_EQ(g.wavenumbers(b), (std::vector<long>{3, -2}));
  EXPECT_DOUBLE_EQ(g.frequency_norm(b), std::hypot(2.0 * kPi * 3 / 2.0, 2.0 * kPi * -2 / 4.0));
}

TEST(Transform, ConstantGoesToDcBin) {
  for (int n = 1; n <= 3; ++n) {
    const Grid g = grid_for(n);
    Field f(g, Space::physical);
    for (auto& v : f.values) v = cplx(2.5, -1.0);
    const Field s = forward_transform(f);
    EXPECT_NEAR(std::abs(s.values[0] - cplx(2.5, -1.0) * g.volume()), 0.0, 1e-12 * g.volume());
    for (std::size_t b = 1; b < g.size(); ++b) ASSERT_LT(std::abs(s.values[b]), 1e-12 * g.volume());
  }
}

TEST(Transform, PlaneWaveGoesToSingleBin) {
  for (int n = 1; n <= 3; ++n) {
    const Grid g = grid_for(n);
    std::vector<long> k(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) k[a] = a % 2 ? -3 : 2;
    const Field s = forward_transform(plane_wave(g, k));
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int a = 0; a < n; ++a) idx[a] = g.index_of_wavenumber(a, k[a]);
    const std::size_t target = g.ravel(idx);
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (b == target)
        EXPECT_NEAR(std::abs(s.values[b] - g.volume()), 0.0, 1e-12 * g.volume());
      else
        ASSERT_LT(std::abs(s.values[b]), 1e-12 * g.volume());
    }
  }
}

TEST(Transform, InverseOfSingleBinIsPlaneWave) {
  const Grid g = grid_for(2);
  Field s(g, Space::frequency);
  s.values[g.ravel({g.index_of_wavenumber(0, 5), g.index_of_wavenumber(1, -2), 0})] = g.volume();
  const Field f = inverse_transform(s);
  EXPECT_LT(relative_l2_difference(f, plane_wave(g, {5, -2})), 1e-13);
}

TEST(Transform, InverseOfDcBinIsConstant) {
  const Grid g = grid_for(3);
  Field s(g, Space::frequency);
  s.values[0] = 3.0 * g.volume();
  for (const auto& v : inverse_transform(s).values) ASSERT_NEAR(std::abs(v - 3.0), 0.0, 1e-13);
}

TEST(Transform, RoundTrip) {
  for (int n = 1; n <= 3; ++n)
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      const Grid g = grid_for(n);
      Field f(g, Space::physical);
      UniformSource rng(seed);
      for (auto& v : f.values) v = cplx(rng.symmetric(), rng.symmetric());
      EXPECT_LE(relative_l2_difference(inverse_transform(forward_transform(f)), f), 1e-12);
      Field s(g, Space::frequency);
      for (auto& v : s.values) v = cplx(rng.symmetric(), rng.symmetric());
      EXPECT_LE(relative_l2_difference(forward_transform(inverse_transform(s)), s), 1e-12);
    }
}

TEST(Transform, Parseval) {
  for (int n = 1; n <= 3; ++n) {
    const Grid g = grid_for(n);
    Field f(g, Space::physical);
    UniformSource rng(7);
    for (auto& v : f.values) v = cplx(rng.symmetric(), rng.symmetric());
    const Field s = forward_transform(f);
    double dxi = 1.0;
    for (int a = 0; a < n; ++a) dxi *= 2.0 * kPi / g.box()[a];
    const double lhs = std::pow(l2_norm(f.values), 2) * g.cell_volume();
    const double rhs = std::pow(l2_norm(s.values), 2) * dxi / std::pow(2.0 * kPi, n);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-12);
  }
}

TEST(Transform, ShiftTheorem) {
  for (int n = 1; n <= 3; ++n) {
    const Grid g = grid_for(n);
    Field f(g, Space::physical);
    UniformSource rng(11);
    for (auto& v : f.values) v = cplx(rng.symmetric(), rng.symmetric());
    const std::array<long, 3> shift{3, -5, 2};
    const Field lhs = forward_transform(roll(f, shift));
    Field rhs = forward_transform(f);
    for (std::size_t b = 0; b < g.size(); ++b) {
      const auto xi = g.frequency_vector(b);
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += shift[a] * g.spacing(a) * xi[a];
      rhs.values[b] *= std::polar(1.0, -phase);
    }
    EXPECT_LE(relative_l2_difference(lhs, rhs), 1e-12);
  }
}

TEST(Transform, Linearity) {
  const Grid g = grid_for(2);
  Field a(g, Space::physical), b(g, Space::physical), c(g, Space::physical);
  UniformSource rng(5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    a.values[i] = cplx(rng.symmetric(), rng.symmetric());
    b.values[i] = cplx(rng.symmetric(), rng.symmetric());
    c.values[i] = 2.0 * a.values[i] - cplx(0, 3) * b.values[i];
  }
  const Field fa = forward_transform(a), fb = forward_transform(b), fc = forward_transform(c);
  Field combo(g, Space::frequency);
  for (std::size_t i = 0; i < g.size(); ++i) combo.values[i] = 2.0 * fa.values[i] - cplx(0, 3) * fb.values[i];
  EXPECT_LE(relative_l2_difference(fc, combo), 1e-13);
}

TEST(Transform, WrongSpaceIsRejected) {
  const Grid g = grid_for(1);
  EXPECT_THROW(forward_transform(Field(g, Space::frequency)), ConfigurationError);
  EXPECT_THROW(inverse_transform(Field(g, Space::physical)), ConfigurationError);
  EXPECT_THROW(Field(g, std::vector<cplx>(3), Space::physical), ConfigurationError);
}

TEST(SpectralShift, OnLatticeShiftIsARoll) {
  const Grid g = grid_for(2);
  const Field u = random_band_limited(g, 3);
  const Field shifted = spectral_shift(u, {2 * g.spacing(0), -g.spacing(1)});
  EXPECT_LE(relative_l2_difference(shifted, roll(u, {-2, 1, 0})), 1e-13);
}

TEST(RandomField, DeterministicAndBandLimited) {
  const Grid g = grid_for(2);
  const Field a = random_band_limited(g, 42);
  const Field b = random_band_limited(g, 42);
  EXPECT_EQ(a.values, b.values);
  const Field s = forward_transform(a);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (band_fraction(g, i) > 2.0 / 3.0) {
      ASSERT_LT(std::abs(s.values[i]), 1e-12);
    }
  EXPECT_NE(random_band_limited(g, 43).values, a.values);
}
