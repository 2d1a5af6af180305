#pragma once

// Two realizations of M_r^(l) u = (d^l/dr^l delta_{S(0,r)}) * u on a periodic grid:
//  * quadrature: sum_q w_q (omega_q . grad)^l u(x + r omega_q), with shifts and directional
//    derivatives applied as exact phase/derivative factors on the lattice;
//  * spectral: multiplication of u^ by the radial symbol rho^l j_{n/2-1}^(l)(r rho).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "spheremean/errors.hpp"
#include "spheremean/field.hpp"
#include "spheremean/parallel.hpp"
#include "spheremean/quadrature.hpp"
#include "spheremean/symbol.hpp"

namespace spheremean {

namespace detail {

/// Calls body(flat, idx) for flat in [lo, hi) with idx the per-axis storage index.
template <typename Body>
void for_each_bin(const Grid& grid, std::size_t lo, std::size_t hi, Body&& body) {
  if (lo >= hi) return;
  auto idx = grid.unravel(lo);
  const int n = grid.n();
  for (std::size_t flat = lo; flat < hi; ++flat) {
    body(flat, idx);
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < grid.shape()[a]) break;
      idx[a] = 0;
    }
  }
}

inline Field apply_multiplier(const Grid& grid, const std::vector<cplx>& table, const Field& u) {
  if (!(u.grid == grid)) throw ConfigurationError("field grid does not match the operator grid");
  Field spectrum = to_space(u, Space::frequency);
  for (std::size_t i = 0; i < table.size(); ++i) spectrum.values[i] *= table[i];
  return to_space(spectrum, u.space);
}

}  // namespace detail

/// Spectral route: the symbol evaluated at |xi| of every lattice bin.
class SpectralOperator {
 public:
  SpectralOperator(const OperatorSpec& spec, const Grid& grid) : spec_(spec), grid_(grid), table_(grid.size()) {
    if (spec.n() != grid.n()) throw ConfigurationError("operator dimension does not match grid dimension");
    const SymbolEvaluator sym(spec);
    parallel_blocks(0, grid.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t b = lo; b < hi; ++b) table_[b] = sym(grid_.frequency_norm(b));
    });
  }

  const OperatorSpec& spec() const noexcept { return spec_; }
  const Grid& grid() const noexcept { return grid_; }
  const std::vector<cplx>& table() const noexcept { return table_; }
  double multiplier(std::size_t bin) const { return table_[bin].real(); }

  /// Returns the result in the same space as u.
  Field apply(const Field& u) const { return detail::apply_multiplier(grid_, table_, u); }

 private:
  OperatorSpec spec_;
  Grid grid_;
  std::vector<cplx> table_;
};

/// Quadrature route. The per-node operations (phase shift by r omega_q, l-fold directional
/// derivative, weight) are linear and diagonal on the lattice, so they are accumulated per bin
/// in fixed node order and the inverse transform is applied once.
class QuadratureOperator {
 public:
  QuadratureOperator(const OperatorSpec& spec, const QuadratureRule& rule, const Grid& grid)
      : spec_(spec), grid_(grid), table_(grid.size(), cplx(0.0, 0.0)) {
    if (rule.n != spec.n() || spec.n() != grid.n())
      throw ConfigurationError("quadrature rule, operator and grid dimensions differ");
    const int n = grid.n();
    const int ell = spec.ell();
    const double r = spec.r();
    const std::size_t q_count = rule.size();

    // Per node and axis: projection xi_a omega_a and phase e^{i r xi_a omega_a}.
    std::vector<std::vector<double>> proj(q_count * n);
    std::vector<std::vector<cplx>> phase(q_count * n);
    for (std::size_t q = 0; q < q_count; ++q) {
      for (int a = 0; a < n; ++a) {
        const std::size_t len = grid.shape()[a];
        auto& p = proj[q * n + a];
        auto& e = phase[q * n + a];
        p.resize(len);
        e.resize(len);
        for (std::size_t i = 0; i < len; ++i) {
          p[i] = grid.frequency(a, i) * rule.nodes[q][a];
          e[i] = std::polar(1.0, r * p[i]);
        }
      }
    }
    // w_q i^l
    static constexpr std::array<cplx, 4> i_pow{cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    const cplx unit = i_pow[static_cast<std::size_t>(ell % 4)];

    parallel_blocks(0, grid.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t q = 0; q < q_count; ++q) {
        const cplx scale = rule.weights[q] * unit;
        const double* p[3] = {proj[q * n].data(), n > 1 ? proj[q * n + 1].data() : nullptr,
                              n > 2 ? proj[q * n + 2].data() : nullptr};
        const cplx* e[3] = {phase[q * n].data(), n > 1 ? phase[q * n + 1].data() : nullptr,
                            n > 2 ? phase[q * n + 2].data() : nullptr};
        detail::for_each_bin(grid_, lo, hi, [&](std::size_t flat, const std::array<std::size_t, 3>& idx) {
          double dot = p[0][idx[0]];
          cplx shift = e[0][idx[0]];
          for (int a = 1; a < n; ++a) {
            dot += p[a][idx[a]];
            shift *= e[a][idx[a]];
          }
          double deriv = 1.0;
          for (int k = 0; k < ell; ++k) deriv *= dot;
          table_[flat] += scale * deriv * shift;
        });
      }
    });
  }

  const OperatorSpec& spec() const noexcept { return spec_; }
  const Grid& grid() const noexcept { return grid_; }
  const std::vector<cplx>& table() const noexcept { return table_; }

  /// Returns the result in the same space as u.
  Field apply(const Field& u) const { return detail::apply_multiplier(grid_, table_, u); }

 private:
  OperatorSpec spec_;
  Grid grid_;
  std::vector<cplx> table_;
};

inline Field apply_quadrature(const OperatorSpec& spec, const QuadratureRule& rule, const Field& u) {
  return QuadratureOperator(spec, rule, u.grid).apply(u);
}

inline Field apply_spectral(const OperatorSpec& spec, const Field& u) { return SpectralOperator(spec, u.grid).apply(u); }

// ---------------------------------------------------------------------------
// Kernel elements exp(i a_m x_j / r)

struct KernelReport {
  int m = 0;
  int axis = 0;                 // 1-based
  double target = 0.0;          // a_m / r
  long lattice_k = 0;           // wavenumber of the snapped frequency
  double snapped = 0.0;         // 2 pi lattice_k / L_axis
  double symbol_floor = 0.0;    // |symbol(snapped)|: the best residual the lattice allows
  double spectral_residual = 0.0;
  double quadrature_residual = 0.0;
};

/// Cube whose period puts a_m / r at wavenumber k on every axis.
inline Grid kernel_grid(const OperatorSpec& spec, int m, std::size_t points, long k = 1) {
  if (m < 1) throw ConfigurationError("kernel_grid: m must be >= 1");
  const double a_m = find_zeros(spec.order(), spec.ell(), m).zeros.back();
  const double length = 2.0 * std::numbers::pi * static_cast<double>(k) * spec.r() / a_m;
  return Grid::cube(spec.n(), points, length);
}

/// Applies both operator routes to the plane wave along `axis` (1..n) at the lattice frequency
/// nearest to the m-th positive zero magnitude a_m / r, and reports sup-norm residuals.
inline KernelReport kernel_check(const OperatorSpec& spec, const Grid& grid, int m, int axis,
                                 const QuadratureRule& rule) {
  if (grid.n() != spec.n()) throw ConfigurationError("kernel_check: grid dimension differs from operator");
  if (axis < 1 || axis > spec.n()) throw ConfigurationError("kernel_check: axis must be in 1..n");
  if (m < 1) throw ConfigurationError("kernel_check: m must be >= 1");
  KernelReport rep;
  rep.m = m;
  rep.axis = axis;
  const int a = axis - 1;
  rep.target = find_zeros(spec.order(), spec.ell(), m).zeros.back() / spec.r();
  const double unit = 2.0 * std::numbers::pi / grid.box()[a];
  rep.lattice_k = std::lround(rep.target / unit);
  const auto len = static_cast<long>(grid.shape()[a]);
  rep.snapped = unit * static_cast<double>(rep.lattice_k);
  if (rep.lattice_k >= len / 2 || std::fabs(rep.snapped - rep.target) > 0.01 * rep.target)
    throw GridTooCoarseError("no lattice frequency within 1% of a_m/r = " + std::to_string(rep.target));
  rep.symbol_floor = std::fabs(symbol(spec, rep.snapped));

  std::vector<long> k(static_cast<std::size_t>(spec.n()), 0);
  k[a] = rep.lattice_k;
  const Field wave = plane_wave(grid, k);
  rep.spectral_residual = sup_norm(apply_spectral(spec, wave).values);
  rep.quadrature_residual = sup_norm(apply_quadrature(spec, rule, wave).values);
  return rep;
}

}  // namespace spheremean
