#pragma once

// Seeded band-limited random fields. Uniform variates are taken from raw mt19937_64 output so
// the same seed gives the same field on every standard library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "spheremean/field.hpp"

namespace spheremean {

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [-1, 1).
  double symmetric() { return 2.0 * static_cast<double>(engine_() >> 11) * 0x1.0p-53 - 1.0; }

 private:
  std::mt19937_64 engine_;
};

/// Radial band fraction of a bin: sqrt(sum_a (k_a / (N_a/2))^2).
inline double band_fraction(const Grid& grid, std::size_t flat) {
  const auto idx = grid.unravel(flat);
  double s = 0.0;
  for (int a = 0; a < grid.n(); ++a) {
    const double t = static_cast<double>(grid.wavenumber(a, idx[a])) / (static_cast<double>(grid.shape()[a]) / 2.0);
    s += t * t;
  }
  return std::sqrt(s);
}

/// Random spectrum on bins with band_fraction <= band (default: top third zeroed) and for which
/// keep(flat) holds; returned in physical space.
inline Field random_band_limited(const Grid& grid, std::uint64_t seed, double band = 2.0 / 3.0,
                                 const std::function<bool(std::size_t)>& keep = {}) {
  UniformSource rng(seed);
  Field spectrum(grid, Space::frequency);
  for (std::size_t b = 0; b < grid.size(); ++b) {
    const double re = rng.symmetric();
    const double im = rng.symmetric();
    if (band_fraction(grid, b) <= band && (!keep || keep(b))) spectrum.values[b] = cplx(re, im);
  }
  return inverse_transform(spectrum);
}

}  // namespace spheremean
