#pragma once

// Normalized Bessel functions j_nu(x) = Gamma(nu+1) (2/x)^nu J_nu(x), their
// derivatives through the expansion
//   j_nu^(l)(x) = sum_k C_{l,k} x^{2k-l} j_{nu+k}(x),   ceil(l/2) <= k <= l,
// exact coefficient tables, and certified zero sequences of j_nu^(l).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spheremean/errors.hpp"

namespace spheremean {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact value of a finite double as a dyadic rational.
inline Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw DomainError("exact_rational: non-finite value");
  if (v == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{BigInt(scaled)};
  if (exponent > 0) {
    r *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

/// Rising factorial (a)_p = a (a+1) ... (a+p-1), (a)_0 = 1.
inline Rational rising_factorial(const Rational& a, int p) {
  Rational out(1);
  for (int i = 0; i < p; ++i) out *= a + i;
  return out;
}

inline BigInt factorial(int p) {
  BigInt out(1);
  for (int i = 2; i <= p; ++i) out *= i;
  return out;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

class BesselOrder {
 public:
  explicit BesselOrder(double nu) : nu_(nu) {
    if (!std::isfinite(nu) || nu <= -1.0)
      throw DomainError("Bessel order must satisfy nu > -1, got " + std::to_string(nu));
  }

  double nu() const noexcept { return nu_; }
  Rational exact() const { return exact_rational(nu_); }

  /// m such that nu = m + 1/2, when nu is a half-integer (m >= -1).
  std::optional<int> half_integer_index() const noexcept {
    const double m = nu_ - 0.5;
    if (m == std::floor(m) && m >= -1.0 && m < 1e6) return static_cast<int>(m);
    return std::nullopt;
  }

  BesselOrder shifted(int k) const { return BesselOrder(nu_ + k); }

  friend bool operator==(const BesselOrder&, const BesselOrder&) = default;

 private:
  double nu_;
};

// ---------------------------------------------------------------------------
// Evaluation routes for j_nu

/// Series/asymptotic switch point for order nu.
inline double series_cutoff(double nu) { return std::max(15.0, nu * nu); }

/// Maclaurin series, summed in extended precision with Neumaier compensation.
inline double j_series(double nu, double x) {
  const long double ax = std::fabs(static_cast<long double>(x));
  const long double q = -(ax * ax) / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double comp = 0.0L;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<long double>(k) * (k + static_cast<long double>(nu)));
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    const bool past_peak = k * (k + nu) > -q;
    if (past_peak && std::fabs(term) < 1e-17L * std::fabs(sum + comp)) break;
  }
  return static_cast<double>(sum + comp);
}

/// Hankel large-argument expansion truncated at its smallest term.
inline double j_asymptotic(double nu, double x) {
  const long double ax = std::fabs(static_cast<long double>(x));
  const long double mu = 4.0L * nu * nu;
  long double p = 1.0L;
  long double q = 0.0L;
  long double term = 1.0L;
  long double previous = std::numeric_limits<long double>::infinity();
  for (int k = 1; k < 400; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= (mu - odd * odd) / (8.0L * k * ax);
    if (term == 0.0L) break;
    const long double mag = std::fabs(term);
    if (mag >= previous) break;
    previous = mag;
    const bool negate = ((k / 2) % 2) == 1;
    if (k % 2 == 0)
      p += negate ? -term : term;
    else
      q += negate ? -term : term;
  }
  // omega = x - (nu/2 + 1/4) pi, expanded so cos/sin act on the exact argument x.
  const long double phase = (static_cast<long double>(nu) / 2.0L + 0.25L) * std::numbers::pi_v<long double>;
  const long double cx = std::cos(ax);
  const long double sx = std::sin(ax);
  const long double cp = std::cos(phase);
  const long double sp = std::sin(phase);
  const long double cos_omega = cx * cp + sx * sp;
  const long double sin_omega = sx * cp - cx * sp;
  const long double bessel_j =
      std::sqrt(2.0L / (std::numbers::pi_v<long double> * ax)) * (p * cos_omega - q * sin_omega);
  const long double scale = std::tgamma(static_cast<long double>(nu) + 1.0L) *
                            std::pow(2.0L / ax, static_cast<long double>(nu));
  return static_cast<double>(scale * bessel_j);
}

/// Trigonometric closed form for nu = m + 1/2 via upward recurrence
///   j_{nu+1} = 4 nu (nu+1) / x^2 (j_nu - j_{nu-1}),  j_{-1/2} = cos x,  j_{1/2} = sin x / x.
/// Stable for |x| well above m; callers use the series below that.
inline double j_half_integer(int m, double x) {
  if (m < -1) throw DomainError("half-integer order index must be >= -1");
  const long double ax = std::fabs(static_cast<long double>(x));
  const long double c = std::cos(ax);
  if (m == -1) return static_cast<double>(c);
  if (ax == 0.0L) return 1.0;
  long double prev = c;
  long double cur = std::sin(ax) / ax;
  const long double inv_x2 = 1.0L / (ax * ax);
  for (int i = 0; i < m; ++i) {
    const long double nu = i + 0.5L;
    const long double next = 4.0L * nu * (nu + 1.0L) * inv_x2 * (cur - prev);
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

/// j_nu(x); even in x, j_nu(0) = 1.
inline double eval_j(const BesselOrder& order, double x) {
  if (std::isnan(x)) return x;
  const double ax = std::fabs(x);
  if (ax == 0.0) return 1.0;
  const double nu = order.nu();
  const double cutoff = series_cutoff(nu);
  if (const auto m = order.half_integer_index(); m && (*m <= 0 || ax > 15.0)) return j_half_integer(*m, ax);
  if (ax <= cutoff) return j_series(nu, ax);
  return j_asymptotic(nu, ax);
}

/// Generic route only (series or Hankel), used to cross-check the half-integer closed forms.
inline double eval_j_generic(const BesselOrder& order, double x) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return 1.0;
  return ax <= series_cutoff(order.nu()) ? j_series(order.nu(), ax) : j_asymptotic(order.nu(), ax);
}

// ---------------------------------------------------------------------------
// Coefficients C_{l,k}

struct CoeffTable {
  int ell = 0;
  Rational nu;
  std::map<int, Rational> entries;

  static int k_min(int ell) { return (ell + 1) / 2; }

  const Rational& at(int k) const {
    const auto it = entries.find(k);
    if (it == entries.end()) throw DomainError("CoeffTable: k=" + std::to_string(k) + " outside range");
    return it->second;
  }
  double value(int k) const { return to_double(at(k)); }
};

namespace detail {
inline void check_coeff_args(int ell, const Rational& nu) {
  if (ell < 0) throw DomainError("derivative order must be non-negative");
  if (nu <= Rational(-1)) throw DomainError("Bessel order must satisfy nu > -1");
}
}  // namespace detail

/// All tables C_{0,.} .. C_{ell,.} built from C_{0,0} = 1 by the induction step, with the
/// even/odd case split kept as two separate branches.
inline std::vector<CoeffTable> coeffs_recurrence_all(int ell, const Rational& nu) {
  detail::check_coeff_args(ell, nu);
  std::vector<CoeffTable> tables;
  tables.reserve(static_cast<std::size_t>(ell) + 1);
  tables.push_back(CoeffTable{0, nu, {{0, Rational(1)}}});
  for (int l = 0; l < ell; ++l) {
    const auto& cur = tables.back().entries;
    CoeffTable next{l + 1, nu, {}};
    next.entries[l + 1] = -cur.at(l) / (2 * (nu + l + 1));
    if (l % 2 == 0) {
      for (int k = (l + 2) / 2; k <= l; ++k)
        next.entries[k] = (2 * k - l) * cur.at(k) - cur.at(k - 1) / (2 * (nu + k));
    } else {
      for (int k = (l + 1) / 2 + 1; k <= l; ++k)
        next.entries[k] = (2 * k - l) * cur.at(k) - cur.at(k - 1) / (2 * (nu + k));
      next.entries[(l + 1) / 2] = cur.at((l + 1) / 2);
    }
    tables.push_back(std::move(next));
  }
  return tables;
}

inline CoeffTable coeffs_recurrence(int ell, const Rational& nu) { return coeffs_recurrence_all(ell, nu).back(); }

/// C_{l,k} = (-1)^k (2k-l+1)_{2(l-k)} / (2^l (l-k)! (nu+1)_k).
inline CoeffTable coeffs_closed_form(int ell, const Rational& nu) {
  detail::check_coeff_args(ell, nu);
  CoeffTable table{ell, nu, {}};
  for (int k = CoeffTable::k_min(ell); k <= ell; ++k) {
    const Rational numerator = rising_factorial(Rational(2 * k - ell + 1), 2 * (ell - k));
    const Rational denominator =
        Rational(BigInt(1) << ell) * Rational(factorial(ell - k)) * rising_factorial(nu + 1, k);
    Rational c = numerator / denominator;
    if (k % 2 != 0) c = -c;
    table.entries[k] = c;
  }
  return table;
}

/// Coefficient table for j_nu^(ell), computed by recurrence and by closed form; they must match exactly.
inline CoeffTable deriv_coeffs(int ell, const Rational& nu) {
  CoeffTable rec = coeffs_recurrence(ell, nu);
  const CoeffTable closed = coeffs_closed_form(ell, nu);
  if (rec.entries != closed.entries)
    throw ConsistencyError("C_{l,k} recurrence disagrees with closed form at l=" + std::to_string(ell));
  return rec;
}

inline CoeffTable deriv_coeffs(int ell, const BesselOrder& order) { return deriv_coeffs(ell, order.exact()); }

// ---------------------------------------------------------------------------
// Derivatives

/// Precomputed evaluator of j_nu^(ell) for repeated use.
class DerivativeExpansion {
 public:
  DerivativeExpansion(const BesselOrder& order, int ell) : order_(order), ell_(ell) {
    const CoeffTable table = deriv_coeffs(ell, order);
    for (const auto& [k, c] : table.entries) {
      ks_.push_back(k);
      coeffs_.push_back(to_double(c));
      orders_.push_back(order.shifted(k));
    }
  }

  const BesselOrder& order() const noexcept { return order_; }
  int ell() const noexcept { return ell_; }
  const std::vector<int>& ks() const noexcept { return ks_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  double operator()(double x) const {
    const double ax = std::fabs(x);
    double sum = 0.0;
    for (std::size_t i = 0; i < ks_.size(); ++i) {
      double power = 1.0;
      for (int p = 0; p < 2 * ks_[i] - ell_; ++p) power *= ax;
      sum += coeffs_[i] * power * eval_j(orders_[i], ax);
    }
    return (x < 0.0 && ell_ % 2 == 1) ? -sum : sum;
  }

 private:
  BesselOrder order_;
  int ell_;
  std::vector<int> ks_;
  std::vector<double> coeffs_;
  std::vector<BesselOrder> orders_;
};

inline double eval_j_deriv(const BesselOrder& order, int ell, double x) { return DerivativeExpansion(order, ell)(x); }

// ---------------------------------------------------------------------------
// Zeros

struct Bracket {
  double lo;
  double hi;
};

struct ZeroSequence {
  BesselOrder order;
  int ell;
  std::vector<double> zeros;
  std::vector<Bracket> brackets;
};

namespace detail {

inline constexpr double kScanStep = 0.1;
inline constexpr double kBracketWidth = 1e-12;

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Bisects a sign-change bracket down to kBracketWidth (or until it cannot be split).
template <typename F>
Bracket refine_bracket(const F& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (sign_of(flo) * sign_of(fhi) >= 0) throw SearchError("no certified sign change", lo, hi);
  while (hi - lo > kBracketWidth) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) {
      const double a = std::nextafter(mid, lo);
      const double b = std::nextafter(mid, hi);
      if (sign_of(f(a)) * sign_of(f(b)) < 0) return {a, b};
      break;
    }
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return {lo, hi};
}

/// Sign-change subintervals of (lo, hi] found by stepping kScanStep.
template <typename F>
std::vector<Bracket> scan_sign_changes(const F& f, double lo, double hi) {
  std::vector<Bracket> out;
  double x0 = lo;
  double f0 = f(x0);
  while (x0 < hi) {
    const double x1 = std::min(hi, x0 + kScanStep);
    const double f1 = f(x1);
    if (sign_of(f0) * sign_of(f1) < 0) out.push_back({x0, x1});
    x0 = x1;
    f0 = f1;
  }
  return out;
}

}  // namespace detail

/// First m_max positive zeros of j_nu^(ell), each with a certified bracket.
///
/// Brackets beyond x_asym are the intervals between consecutive asymptotic extrema
/// pi (j + (nu+ell)/2 + 1/4); (0, x_asym] is scanned with a fixed step.
inline ZeroSequence find_zeros(const BesselOrder& order, int ell, int m_max) {
  if (m_max < 1) throw DomainError("find_zeros: m_max must be >= 1");
  if (ell < 0) throw DomainError("find_zeros: ell must be >= 0");
  const DerivativeExpansion f(order, ell);
  const double pi = std::numbers::pi;
  const double mu = order.nu() + ell;
  const double shift = mu / 2.0 + 0.25;
  const double x_asym = std::max(10.0, mu * mu);

  auto extremum = [&](long j) { return pi * (static_cast<double>(j) + shift); };
  long j = static_cast<long>(std::ceil(x_asym / pi - shift));
  while (extremum(j) < x_asym) ++j;

  std::vector<Bracket> coarse = detail::scan_sign_changes(f, detail::kScanStep, extremum(j));
  double left = extremum(j);
  double f_left = f(left);
  while (static_cast<int>(coarse.size()) < m_max) {
    const double right = extremum(j + 1);
    const double f_right = f(right);
    if (detail::sign_of(f_left) * detail::sign_of(f_right) < 0) {
      coarse.push_back({left, right});
    } else {
      const auto fine = detail::scan_sign_changes(f, left, right);
      if (fine.empty()) throw SearchError("asymptotically predicted zero of j_nu^(l) not found", left, right);
      coarse.insert(coarse.end(), fine.begin(), fine.end());
    }
    left = right;
    f_left = f_right;
    ++j;
  }

  ZeroSequence out{order, ell, {}, {}};
  for (int m = 0; m < m_max; ++m) {
    const Bracket b = detail::refine_bracket(f, coarse[m].lo, coarse[m].hi);
    out.brackets.push_back(b);
    out.zeros.push_back(b.lo + 0.5 * (b.hi - b.lo));
  }
  return out;
}

}  // namespace spheremean
