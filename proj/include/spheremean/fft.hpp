#pragma once

// Iterative radix-2 complex FFT along the axes of a row-major array.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "spheremean/errors.hpp"

namespace spheremean {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class Fft1d {
 public:
  explicit Fft1d(std::size_t n) : n_(n), rev_(n), twiddle_(n / 2) {
    if (!is_power_of_two(n)) throw ConfigurationError("FFT length must be a power of two");
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      rev_[i] = r;
    }
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      twiddle_[j] = cplx(std::cos(angle), std::sin(angle));
    }
  }

  std::size_t size() const noexcept { return n_; }

  /// sum_j a_j e^{-2 pi i jk/n}, unnormalized.
  void forward(std::span<cplx> data) const { run(data, false); }
  /// sum_k a_k e^{+2 pi i jk/n}, unnormalized.
  void inverse(std::span<cplx> data) const { run(data, true); }

 private:
  void run(std::span<cplx> a, bool inverse) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const cplx w = inverse ? std::conj(twiddle_[j * stride]) : twiddle_[j * stride];
          const cplx u = a[start + j];
          const cplx v = a[start + j + half] * w;
          a[start + j] = u + v;
          a[start + j + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<cplx> twiddle_;
};

/// Unnormalized transform of every line of a row-major array with the given shape.
inline void fft_nd(std::span<cplx> data, const std::vector<std::size_t>& shape, bool inverse) {
  const std::size_t dims = shape.size();
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (data.size() != total) throw ConfigurationError("fft_nd: data size does not match shape");
  std::vector<cplx> line;
  for (std::size_t axis = 0; axis < dims; ++axis) {
    const std::size_t len = shape[axis];
    const Fft1d plan(len);
    std::size_t stride = 1;
    for (std::size_t a = axis + 1; a < dims; ++a) stride *= shape[a];
    const std::size_t outer = total / (len * stride);
    line.resize(len);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < stride; ++in) {
        const std::size_t base = o * len * stride + in;
        if (stride == 1) {
          std::span<cplx> view = data.subspan(base, len);
          inverse ? plan.inverse(view) : plan.forward(view);
          continue;
        }
        for (std::size_t i = 0; i < len; ++i) line[i] = data[base + i * stride];
        inverse ? plan.inverse(line) : plan.forward(line);
        for (std::size_t i = 0; i < len; ++i) data[base + i * stride] = line[i];
      }
    }
  }
}

}  // namespace spheremean
