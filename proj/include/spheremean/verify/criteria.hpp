#pragma once

// The ten numbered verification checks run by `spheremean selftest` and the acceptance binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "spheremean/bessel.hpp"
#include "spheremean/field.hpp"
#include "spheremean/operator.hpp"
#include "spheremean/quadrature.hpp"
#include "spheremean/random_field.hpp"
#include "spheremean/solver.hpp"
#include "spheremean/symbol.hpp"
#include "spheremean/verify/oracle.hpp"

namespace spheremean::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

inline Outcome worst_below(double worst, double tol, const std::string& what) {
  return {worst <= tol, what + " " + sci(worst) + " (tol " + sci(tol) + ")"};
}

inline const std::vector<double>& nu_set_small() {
  static const std::vector<double> v{-0.5, 0.0, 0.5, 1.0};
  return v;
}
inline const std::vector<double>& nu_set_wide() {
  static const std::vector<double> v{-0.5, 0.0, 0.5, 1.0, 1.5};
  return v;
}

}  // namespace detail

inline detail::Outcome coefficient_identity() {
  int compared = 0;
  for (double nu : detail::nu_set_small()) {
    const Rational q = exact_rational(nu);
    const auto tables = coeffs_recurrence_all(10, q);
    for (int ell = 0; ell <= 10; ++ell) {
      const CoeffTable closed = coeffs_closed_form(ell, q);
      const CoeffTable& rec = tables[static_cast<std::size_t>(ell)];
      if (rec.entries != closed.entries)
        return {false, "mismatch at ell=" + std::to_string(ell) + " nu=" + detail::sci(nu)};
      compared += static_cast<int>(rec.entries.size());
    }
  }
  return {true, std::to_string(compared) + " entries identical"};
}

inline detail::Outcome first_derivative_formula() {
  double worst = 0.0;
  for (double nu : detail::nu_set_wide()) {
    const BesselOrder order(nu);
    const BesselOrder next(nu + 1.0);
    const DerivativeExpansion d1(order, 1);
    for (int i = 0; i <= 2000; ++i) {
      const double x = 100.0 * i / 2000.0;
      const double defect = std::fabs(d1(x) + x / (2.0 * (nu + 1.0)) * eval_j(next, x));
      worst = std::max(worst, defect / (1.0 + std::fabs(eval_j(order, x))));
    }
  }
  return detail::worst_below(worst, 1e-12, "max normalized defect");
}

/// Orders 1 and 2 difference eval_j itself in double. The order-3 stencil divides by 8 h^3 = 8e-9,
/// which turns double round-off in j into ~5e-7, so its samples come from the 50-digit series.
inline detail::Outcome finite_difference_agreement() {
  constexpr double h = 1e-3;
  double worst = 0.0;
  for (double nu : detail::nu_set_wide()) {
    const BesselOrder order(nu);
    auto j = [&](double x) { return eval_j(order, x); };
    for (int ell = 1; ell <= 3; ++ell) {
      const DerivativeExpansion d(order, ell);
      for (int i = 0; i <= 499; ++i) {
        const double x = 0.1 + 0.1 * i;
        const double fd = ell < 3 ? oracle::central_difference_of(j, ell, x, h) : oracle::central_difference(nu, ell, x, h);
        worst = std::max(worst, std::fabs(d(x) - fd));
      }
    }
  }
  return detail::worst_below(worst, 5e-8, "max |expansion - difference|");
}

inline detail::Outcome operator_equivalence(int fields = 100) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const Grid grid = Grid::cube(n, 64, 16.0);
    const QuadratureRule rule = default_rule(n);
    for (int ell = 0; ell <= 2; ++ell)
      for (double r : {0.3, 1.0}) {
        const OperatorSpec spec(n, r, ell);
        const QuadratureOperator quad(spec, rule, grid);
        const SpectralOperator spectral(spec, grid);
        for (int f = 0; f < fields; ++f) {
          const std::uint64_t seed = 100000u * n + 1000u * ell + (r < 0.5 ? 0u : 500u) + f;
          const Field u = random_band_limited(grid, seed);
          worst = std::max(worst, relative_l2_difference(quad.apply(u), spectral.apply(u)));
        }
      }
  }
  return detail::worst_below(worst, 1e-8, "max relative l2 quadrature vs spectral");
}

inline detail::Outcome two_point_mean(int fields = 100) {
  double worst = 0.0;
  const Grid grid = Grid::cube(1, 64, 16.0);
  for (double r : {0.3, 1.0, 2.7}) {
    const OperatorSpec spec(1, r, 0);
    const SpectralOperator spectral(spec, grid);
    const QuadratureOperator quad(spec, two_point_rule(), grid);
    for (int f = 0; f < fields; ++f) {
      const Field u = random_band_limited(grid, 7000u + f);
      const Field minus = spectral_shift(u, {-r});
      const Field plus = spectral_shift(u, {r});
      Field direct(grid, Space::physical);
      for (std::size_t i = 0; i < grid.size(); ++i) direct.values[i] = 0.5 * (minus.values[i] + plus.values[i]);
      worst = std::max(worst, relative_l2_difference(spectral.apply(u), direct));
      worst = std::max(worst, relative_l2_difference(quad.apply(u), direct));
    }
  }
  return detail::worst_below(worst, 1e-13, "max relative l2 vs (u(x-r)+u(x+r))/2");
}

inline const std::vector<std::pair<int, int>>& kernel_cases() {
  static const std::vector<std::pair<int, int>> v{{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}};
  return v;
}

inline detail::Outcome kernel_elements() {
  double worst = 0.0;
  for (const auto& [n, ell] : kernel_cases()) {
    const OperatorSpec spec(n, 1.0, ell);
    const Grid grid = kernel_grid(spec, 1, 32);
    const QuadratureRule rule = default_rule(n);
    for (int axis = 1; axis <= n; ++axis) {
      const KernelReport rep = kernel_check(spec, grid, 1, axis, rule);
      worst = std::max({worst, rep.spectral_residual, rep.quadrature_residual});
    }
  }
  return detail::worst_below(worst, 1e-10, "max sup residual");
}

inline detail::Outcome range_round_trip(int fields = 100) {
  double worst_rec = 0.0;
  double worst_res = 0.0;
  for (const auto& [n, ell] : kernel_cases()) {
    const OperatorSpec spec(n, 1.0, ell);
    const Grid grid = Grid::cube(n, n == 3 ? 32 : 64, 16.0);
    const SpectralOperator op(spec, grid);
    const double top = default_eps_sym(op) / kDefaultEpsSymRelative;
    auto regular = [&](std::size_t b) { return std::fabs(op.multiplier(b)) >= 1e-3 * top; };
    const double eps_sym = default_eps_sym(op);
    for (int f = 0; f < fields; ++f) {
      const Field v = random_band_limited(grid, 50000u + 1000u * n + 100u * ell + f, 2.0 / 3.0, regular);
      const Field w = op.apply(v);
      const Field rec = solve(op, w, eps_sym).v;
      worst_rec = std::max(worst_rec, relative_l2_difference(rec, v));
      worst_res = std::max(worst_res, relative_l2_difference(op.apply(rec), w));
    }
  }
  return {worst_rec <= 1e-8 && worst_res <= 1e-10, "max recovery error " + detail::sci(worst_rec) +
                                                         " (tol 1e-08), max residual " + detail::sci(worst_res) +
                                                         " (tol 1e-10)"};
}

inline detail::Outcome range_rejection() {
  double worst = std::numeric_limits<double>::infinity();
  bool all_obstructed = true;
  for (const auto& [n, ell] : kernel_cases()) {
    const OperatorSpec spec(n, 1.0, ell);
    const Grid grid = kernel_grid(spec, 1, 32);
    const SpectralOperator op(spec, grid);
    for (int axis = 0; axis < n; ++axis) {
      std::vector<long> k(static_cast<std::size_t>(n), 0);
      k[static_cast<std::size_t>(axis)] = 1;
      const RangeReport rep = range_test(op, plane_wave(grid, k), default_eps_sym(op));
      all_obstructed = all_obstructed && !rep.in_range();
      worst = std::min(worst, rep.relative_obstruction());
    }
  }
  return {all_obstructed && worst >= 0.99,
          std::string(all_obstructed ? "all obstructed" : "NOT all obstructed") +
              ", min obstruction_mass/||w^|| " + detail::sci(worst) + " (need >= 0.99)"};
}

inline detail::Outcome invertibility_condition() {
  double worst_ratio = std::numeric_limits<double>::infinity();
  std::string failures;
  for (int n = 1; n <= 3; ++n)
    for (int ell = 0; ell <= 1; ++ell) {
      const auto c = recorded_invertibility_constants(n, ell);
      const auto params = InvertibilityParams::log_spaced(c.A, c.B, 1000.0, 200);
      const ScanReport rep = invertibility_scan(OperatorSpec(n, 1.0, ell), params);
      if (c.A > 10.0 || c.B > 50.0 || !rep.all_pass())
        failures += " (n=" + std::to_string(n) + ",ell=" + std::to_string(ell) + ")";
      for (const auto& w : rep.windows) worst_ratio = std::min(worst_ratio, w.sup / w.threshold);
    }
  return {failures.empty(), (failures.empty() ? std::string("all windows pass") : "failing:" + failures) +
                                ", min sup/threshold " + detail::sci(worst_ratio)};
}

/// The amplitude of the k = l term, Gamma(nu+l+1) |C_{l,l}| 2^l (2/x)^{nu+1/2} / sqrt(pi), is the
/// leading coefficient; the factor Gamma(nu+l+1) comes from j_{nu+l}.
inline double envelope_coefficient(double nu, int ell) {
  const double c = std::fabs(deriv_coeffs(ell, BesselOrder(nu)).value(ell));
  return std::tgamma(nu + ell + 1.0) * c * std::pow(2.0, ell + nu + 0.5) / std::sqrt(std::numbers::pi);
}

inline detail::Outcome asymptotic_envelope() {
  double worst_ratio = 0.0;
  int fewest_changes = 1 << 30;
  double worst_spacing = 0.0;
  for (double nu : {-0.5, 0.0, 0.5})
    for (int ell = 0; ell <= 3; ++ell) {
      const BesselOrder order(nu);
      const DerivativeExpansion d(order, ell);
      const double bound = 2.0 * envelope_coefficient(nu, ell);
      int changes = 0;
      int prev = 0;
      for (int i = 0; i <= 45000; ++i) {
        const double x = 50.0 + 0.01 * i;
        const double v = d(x);
        worst_ratio = std::max(worst_ratio, std::pow(x, nu + 0.5) * std::fabs(v) / bound);
        const int s = (v > 0.0) - (v < 0.0);
        if (s != 0 && prev != 0 && s != prev) ++changes;
        if (s != 0) prev = s;
      }
      fewest_changes = std::min(fewest_changes, changes);
      const auto zs = find_zeros(order, ell, 101).zeros;
      for (int m = 50; m <= 100; ++m)
        worst_spacing = std::max(worst_spacing, std::fabs(zs[m] - zs[m - 1] - std::numbers::pi));
    }
  const bool pass = worst_ratio <= 1.0 && fewest_changes >= 100 && worst_spacing <= 1e-3;
  return {pass, "max envelope/(2 coefficient) " + detail::sci(worst_ratio) + ", min sign changes " +
                    std::to_string(fewest_changes) + ", max |spacing - pi| " + detail::sci(worst_spacing)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<detail::Outcome()> run;
};

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "coefficient identity", [] { return coefficient_identity(); }},
      {2, "first derivative formula", [] { return first_derivative_formula(); }},
      {3, "expansion vs finite differences", [] { return finite_difference_agreement(); }},
      {4, "quadrature vs spectral operator", [] { return operator_equivalence(); }},
      {5, "n=1 two-point mean", [] { return two_point_mean(); }},
      {6, "kernel plane waves", [] { return kernel_elements(); }},
      {7, "range round trip", [] { return range_round_trip(); }},
      {8, "range rejection", [] { return range_rejection(); }},
      {9, "invertibility window scan", [] { return invertibility_condition(); }},
      {10, "asymptotic envelope and zero spacing", [] { return asymptotic_envelope(); }},
  };
  return list;
}

inline CriterionResult run_criterion(const Criterion& c) {
  CriterionResult out{c.id, c.name, false, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto r = c.run();
    out.pass = r.pass;
    out.detail = r.detail;
  } catch (const std::exception& e) {
    out.detail = std::string("exception: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline CriterionResult run_criterion(int id) {
  for (const auto& c : criteria())
    if (c.id == id) return run_criterion(c);
  throw ConfigurationError("no criterion with id " + std::to_string(id));
}

inline std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %-38s %7.2fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace spheremean::verify
