#pragma once

// Independent reference computations used by the tests and the selftest.
// Nothing here calls into the production evaluation paths.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "spheremean/bessel.hpp"

namespace spheremean::oracle {

namespace mp = boost::multiprecision;
using Float50 = mp::number<mp::cpp_bin_float<50>>;
using Float120 = mp::number<mp::cpp_bin_float<120>>;
using Float500 = mp::number<mp::cpp_bin_float<500>>;

/// Truncated Maclaurin series of j_nu summed in working type Real.
/// nu is taken as the exact dyadic value of the double.
template <typename Real>
Real series_j(double nu, const Real& x) {
  const Real nu_r = Real(exact_rational(nu).convert_to<Real>());
  const Real q = -(x * x) / 4;
  Real term = 1;
  Real sum = 1;
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int k = 1; k < 20000; ++k) {
    term *= q / (Real(k) * (Real(k) + nu_r));
    sum += term;
    if (Real(k) * (Real(k) + nu_r) > -q && abs(term) < eps * abs(sum)) break;
  }
  return sum;
}

/// j_nu(x) in double, from a series in enough digits to absorb the cancellation at |x|.
inline double j(double nu, double x) {
  const double ax = std::fabs(x);
  if (ax <= 40.0) return series_j<Float50>(nu, Float50(ax)).convert_to<double>();
  if (ax <= 200.0) return series_j<Float120>(nu, Float120(ax)).convert_to<double>();
  return series_j<Float500>(nu, Float500(ax)).convert_to<double>();
}

/// Leading asymptotic envelope Gamma(nu+1) (2/x)^{nu+1/2} / sqrt(pi) of |j_nu(x)|.
inline double envelope(double nu, double x) {
  return std::tgamma(nu + 1.0) * std::pow(2.0 / x, nu + 0.5) / std::sqrt(std::numbers::pi);
}

/// Order-4 central difference of the deriv-th derivative (1..3) of j_nu at x, step h,
/// using the 50-digit series so that the difference quotient carries no double round-off.
inline double central_difference(double nu, int deriv, double x, double h) {
  auto f = [&](int i) { return series_j<Float50>(nu, Float50(x) + Float50(h) * i); };
  const Float50 hh(h);
  Float50 value;
  switch (deriv) {
    case 1:
      value = (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * hh);
      break;
    case 2:
      value = (-f(-2) + 16 * f(-1) - 30 * f(0) + 16 * f(1) - f(2)) / (12 * hh * hh);
      break;
    case 3:
      value = (f(-3) - 8 * f(-2) + 13 * f(-1) - 13 * f(1) + 8 * f(2) - f(3)) / (8 * hh * hh * hh);
      break;
    default:
      throw DomainError("central_difference supports derivative orders 1..3");
  }
  return value.convert_to<double>();
}

/// Same stencils applied to an arbitrary double-valued function.
template <typename F>
double central_difference_of(const F& f, int deriv, double x, double h) {
  switch (deriv) {
    case 1:
      return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
    case 2:
      return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
    case 3:
      return (f(x - 3 * h) - 8 * f(x - 2 * h) + 13 * f(x - h) - 13 * f(x + h) + 8 * f(x + 2 * h) - f(x + 3 * h)) /
             (8 * h * h * h);
    default:
      throw DomainError("central_difference_of supports derivative orders 1..3");
  }
}

/// Bisection on the 50-digit series for a sign change of j_nu in [lo, hi].
inline double bisect_series_zero(double nu, double lo, double hi) {
  Float50 a(lo), b(hi);
  Float50 fa = series_j<Float50>(nu, a);
  for (int it = 0; it < 200; ++it) {
    const Float50 mid = (a + b) / 2;
    const Float50 fm = series_j<Float50>(nu, mid);
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return ((a + b) / 2).convert_to<double>();
}

/// Mean of x^alpha over the unit sphere S^{n-1}: 2 prod Gamma(b_i) / Gamma(sum b_i) divided by
/// the surface area 2 pi^{n/2} / Gamma(n/2), where b_i = (alpha_i + 1)/2. Zero if any alpha_i is odd.
/// n = 1 is the two-point set {-1, +1}.
inline double sphere_moment(const std::vector<int>& alpha) {
  const int n = static_cast<int>(alpha.size());
  for (int a : alpha)
    if (a % 2 != 0) return 0.0;
  if (n == 1) return 1.0;
  double log_num = 0.0;
  double sum_b = 0.0;
  for (int a : alpha) {
    const double b = (a + 1) / 2.0;
    log_num += std::lgamma(b);
    sum_b += b;
  }
  const double integral = 2.0 * std::exp(log_num - std::lgamma(sum_b));
  const double area = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  return integral / area;
}

}  // namespace spheremean::oracle
