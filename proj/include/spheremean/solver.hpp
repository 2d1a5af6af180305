#pragma once

// Lattice version of the range characterization for l in {0, 1}: w is in the range of M_r^(l)
// when w^ vanishes wherever the symbol does. Bins with |symbol| < eps_sym are degenerate;
// a degenerate bin is obstructed when |w^| >= eps_data ||w^||_inf there.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spheremean/errors.hpp"
#include "spheremean/field.hpp"
#include "spheremean/operator.hpp"
#include "spheremean/symbol.hpp"

namespace spheremean {

inline constexpr double kDefaultEpsData = 1e-8;
inline constexpr double kDefaultEpsSymRelative = 1e-8;

enum class BinClass : std::uint8_t { regular, degenerate_consistent, obstructed };

struct DegenerateBin {
  std::vector<long> k;
  double symbol = 0.0;
  double w_hat_mag = 0.0;
  bool obstructed = false;
};

struct RangeReport {
  OperatorSpec spec;
  double eps_sym = 0.0;
  double eps_data = 0.0;
  std::vector<BinClass> bins;
  double obstruction_mass = 0.0;
  double w_hat_l2 = 0.0;
  double w_hat_sup = 0.0;
  std::vector<DegenerateBin> degenerate;

  double relative_obstruction() const { return w_hat_l2 > 0.0 ? obstruction_mass / w_hat_l2 : 0.0; }
  bool in_range() const { return relative_obstruction() <= eps_data; }

  std::size_t count(BinClass c) const {
    std::size_t total = 0;
    for (auto b : bins) total += (b == c);
    return total;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["verdict"] = in_range() ? "in_range" : "obstructed";
    j["obstruction_mass"] = obstruction_mass;
    j["eps_sym"] = eps_sym;
    j["eps_data"] = eps_data;
    j["degenerate_bins"] = nlohmann::json::array();
    for (const auto& d : degenerate)
      j["degenerate_bins"].push_back({{"k", d.k}, {"symbol", d.symbol}, {"w_hat_mag", d.w_hat_mag}});
    return j;
  }
};

class RangeError : public std::runtime_error {
 public:
  explicit RangeError(RangeReport report)
      : std::runtime_error("field is not in the operator range: relative obstruction " +
                           std::to_string(report.relative_obstruction())),
        report_(std::move(report)) {}

  const RangeReport& report() const noexcept { return report_; }

 private:
  RangeReport report_;
};

inline void check_range_order(const OperatorSpec& spec) {
  if (spec.ell() >= 2)
    throw UnsupportedOrderError("range characterization is only available for ell = 0, 1 (got ell = " +
                                std::to_string(spec.ell()) + ")");
  if (spec.n() == 1 && spec.ell() == 1)
    throw UnsupportedOrderError("range characterization for ell = 1 requires n >= 2");
}

/// 1e-8 times the largest |symbol| over the lattice.
inline double default_eps_sym(const SpectralOperator& op) {
  double m = 0.0;
  for (const auto& v : op.table()) m = std::max(m, std::abs(v));
  return kDefaultEpsSymRelative * m;
}

inline RangeReport range_test(const SpectralOperator& op, const Field& w, double eps_sym,
                              double eps_data = kDefaultEpsData) {
  check_range_order(op.spec());
  if (!(eps_sym > 0.0) || !(eps_data > 0.0)) throw ConfigurationError("range_test: thresholds must be positive");
  if (!(w.grid == op.grid())) throw ConfigurationError("range_test: field grid does not match operator grid");
  const Field spectrum = to_space(w, Space::frequency);
  RangeReport rep{op.spec(), eps_sym, eps_data, std::vector<BinClass>(spectrum.values.size(), BinClass::regular),
                  0.0, 0.0, 0.0, {}};
  rep.w_hat_l2 = l2_norm(spectrum.values);
  rep.w_hat_sup = sup_norm(spectrum.values);
  double mass2 = 0.0;
  for (std::size_t b = 0; b < spectrum.values.size(); ++b) {
    const double sym = op.multiplier(b);
    if (std::fabs(sym) >= eps_sym) continue;
    const double mag = std::abs(spectrum.values[b]);
    const bool obstructed = mag > 0.0 && mag >= eps_data * rep.w_hat_sup;
    rep.bins[b] = obstructed ? BinClass::obstructed : BinClass::degenerate_consistent;
    if (obstructed) mass2 += mag * mag;
    rep.degenerate.push_back({w.grid.wavenumbers(b), sym, mag, obstructed});
  }
  rep.obstruction_mass = std::sqrt(mass2);
  return rep;
}

inline RangeReport range_test(const OperatorSpec& spec, const Field& w, double eps_sym,
                              double eps_data = kDefaultEpsData) {
  check_range_order(spec);
  return range_test(SpectralOperator(spec, w.grid), w, eps_sym, eps_data);
}

struct Solution {
  Field v;
  RangeReport report;
};

/// v^ = w^ / symbol on regular bins and 0 on degenerate ones (the minimum-norm preimage).
inline Solution solve(const SpectralOperator& op, const Field& w, double eps_sym, double eps_data = kDefaultEpsData) {
  RangeReport rep = range_test(op, w, eps_sym, eps_data);
  if (!rep.in_range()) throw RangeError(std::move(rep));
  Field spectrum = to_space(w, Space::frequency);
  for (std::size_t b = 0; b < spectrum.values.size(); ++b)
    spectrum.values[b] = rep.bins[b] == BinClass::regular ? spectrum.values[b] / op.multiplier(b) : cplx(0.0, 0.0);
  return Solution{inverse_transform(spectrum), std::move(rep)};
}

inline Field deconvolve(const OperatorSpec& spec, const Field& w, double eps_sym, double eps_data = kDefaultEpsData) {
  check_range_order(spec);
  return solve(SpectralOperator(spec, w.grid), w, eps_sym, eps_data).v;
}

}  // namespace spheremean
