#pragma once

// Periodic grids in R^n (n <= 3), complex fields on them, and the discrete
// Fourier transform scaled to approximate
//   u^(xi) = integral u(x) e^{-i<x,xi>} dx,   u(x) = (2 pi)^{-n} integral u^(xi) e^{i<x,xi>} dxi.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "spheremean/errors.hpp"
#include "spheremean/fft.hpp"

namespace spheremean {

enum class Space { physical, frequency };

inline const char* to_string(Space s) { return s == Space::physical ? "physical" : "frequency"; }

/// Sample positions x_j = i_j L_j / N_j, i_j = 0..N_j-1; frequencies xi_j = 2 pi k_j / L_j
/// with k_j in {-N_j/2, .., N_j/2 - 1} stored in FFT order.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  Grid(std::vector<std::size_t> shape, std::vector<double> box) : shape_(std::move(shape)), box_(std::move(box)) {
    if (shape_.empty() || shape_.size() > 3) throw ConfigurationError("grid dimension must be 1, 2 or 3");
    if (box_.size() != shape_.size()) throw ConfigurationError("grid box and shape have different lengths");
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      if (!is_power_of_two(shape_[a]) || shape_[a] < kMinPoints)
        throw ConfigurationError("grid axis " + std::to_string(a) + ": sample count " + std::to_string(shape_[a]) +
                                 " is not a power of two >= 16");
      if (!(box_[a] > 0.0) || !std::isfinite(box_[a]))
        throw ConfigurationError("grid axis " + std::to_string(a) + ": period must be positive");
    }
  }

  /// Cube with N points and period L on every axis.
  static Grid cube(int n, std::size_t points, double length) {
    if (n < 1 || n > 3) throw ConfigurationError("grid dimension must be 1, 2 or 3");
    return Grid(std::vector<std::size_t>(n, points), std::vector<double>(n, length));
  }

  int n() const noexcept { return static_cast<int>(shape_.size()); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const std::vector<double>& box() const noexcept { return box_; }

  std::size_t size() const noexcept {
    std::size_t total = 1;
    for (auto s : shape_) total *= s;
    return total;
  }

  double spacing(int axis) const { return box_[axis] / static_cast<double>(shape_[axis]); }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < n(); ++a) v *= spacing(a);
    return v;
  }

  double volume() const {
    double v = 1.0;
    for (double l : box_) v *= l;
    return v;
  }

  double coordinate(int axis, std::size_t i) const { return static_cast<double>(i) * spacing(axis); }

  /// Signed wavenumber of storage index i on an axis.
  long wavenumber(int axis, std::size_t i) const {
    const auto len = static_cast<long>(shape_[axis]);
    const auto k = static_cast<long>(i);
    return k < len / 2 ? k : k - len;
  }

  std::size_t index_of_wavenumber(int axis, long k) const {
    const auto len = static_cast<long>(shape_[axis]);
    if (k < -len / 2 || k >= len / 2) throw ConfigurationError("wavenumber outside the lattice");
    return static_cast<std::size_t>(k < 0 ? k + len : k);
  }

  double frequency(int axis, std::size_t i) const {
    return 2.0 * std::numbers::pi * static_cast<double>(wavenumber(axis, i)) / box_[axis];
  }

  /// Storage index along each axis (unused trailing entries are 0).
  std::array<std::size_t, 3> unravel(std::size_t flat) const {
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int a = n() - 1; a >= 0; --a) {
      idx[a] = flat % shape_[a];
      flat /= shape_[a];
    }
    return idx;
  }

  std::size_t ravel(const std::array<std::size_t, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < n(); ++a) flat = flat * shape_[a] + idx[a];
    return flat;
  }

  std::array<double, 3> frequency_vector(std::size_t flat) const {
    const auto idx = unravel(flat);
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int a = 0; a < n(); ++a) xi[a] = frequency(a, idx[a]);
    return xi;
  }

  /// |xi| of a bin; depends only on the squares of the components, so xi and -xi agree bitwise.
  double frequency_norm(std::size_t flat) const {
    const auto xi = frequency_vector(flat);
    return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  }

  std::vector<long> wavenumbers(std::size_t flat) const {
    const auto idx = unravel(flat);
    std::vector<long> k(static_cast<std::size_t>(n()));
    for (int a = 0; a < n(); ++a) k[a] = wavenumber(a, idx[a]);
    return k;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> box_;
};

struct Field {
  Grid grid;
  std::vector<cplx> values;
  Space space = Space::physical;

  Field(Grid g, Space s) : grid(std::move(g)), values(grid.size()), space(s) {}
  Field(Grid g, std::vector<cplx> v, Space s) : grid(std::move(g)), values(std::move(v)), space(s) {
    if (values.size() != grid.size()) throw ConfigurationError("field value count does not match grid size");
  }
};

/// Riemann-sum forward transform: cell volume times the unnormalized DFT with kernel e^{-i<x,xi>}.
inline Field forward_transform(const Field& f) {
  if (f.space != Space::physical) throw ConfigurationError("forward_transform expects a physical-space field");
  Field out(f.grid, f.values, Space::frequency);
  fft_nd(out.values, f.grid.shape(), false);
  const double scale = f.grid.cell_volume();
  for (auto& v : out.values) v *= scale;
  return out;
}

/// (2 pi)^{-n} dxi^n sum over the lattice, i.e. 1/volume times the unnormalized inverse DFT.
inline Field inverse_transform(const Field& f) {
  if (f.space != Space::frequency) throw ConfigurationError("inverse_transform expects a frequency-space field");
  Field out(f.grid, f.values, Space::physical);
  fft_nd(out.values, f.grid.shape(), true);
  const double scale = 1.0 / f.grid.volume();
  for (auto& v : out.values) v *= scale;
  return out;
}

inline Field to_space(const Field& f, Space s) {
  if (f.space == s) return f;
  return s == Space::frequency ? forward_transform(f) : inverse_transform(f);
}

inline double l2_norm(std::span<const cplx> v) {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  return std::sqrt(sum);
}

inline double sup_norm(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

/// ||a - b||_2 / ||b||_2 (plain sample sums; both fields on the same grid and space).
inline double relative_l2_difference(const Field& a, const Field& b) {
  if (!(a.grid == b.grid) || a.space != b.space) throw ConfigurationError("fields live on different grids/spaces");
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    diff += std::norm(a.values[i] - b.values[i]);
    ref += std::norm(b.values[i]);
  }
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(diff / ref);
}

/// Plane wave e^{i 2 pi <k, x/L>} on the grid, evaluated from integer phases so it is exact on-lattice.
inline Field plane_wave(const Grid& grid, const std::vector<long>& k) {
  if (static_cast<int>(k.size()) != grid.n()) throw ConfigurationError("plane_wave: wavenumber has wrong dimension");
  Field f(grid, Space::physical);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unravel(flat);
    double phase = 0.0;
    for (int a = 0; a < grid.n(); ++a) {
      const auto len = static_cast<long>(grid.shape()[a]);
      const long m = (k[a] * static_cast<long>(idx[a])) % len;
      phase += static_cast<double>(m) / static_cast<double>(len);
    }
    f.values[flat] = std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return f;
}

/// u(x + a) for a band-limited field, by the phase factor e^{i<a, xi>}; a need not be on-lattice.
inline Field spectral_shift(const Field& u, const std::vector<double>& a) {
  if (static_cast<int>(a.size()) != u.grid.n()) throw ConfigurationError("spectral_shift: offset has wrong dimension");
  Field spectrum = to_space(u, Space::frequency);
  for (std::size_t flat = 0; flat < spectrum.values.size(); ++flat) {
    const auto xi = u.grid.frequency_vector(flat);
    double phase = 0.0;
    for (int d = 0; d < u.grid.n(); ++d) phase += a[d] * xi[d];
    spectrum.values[flat] *= std::polar(1.0, phase);
  }
  return to_space(spectrum, u.space);
}

}  // namespace spheremean
