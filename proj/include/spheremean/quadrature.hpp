#pragma once

// Quadrature rules for the normalized surface measure c_1 dS on the unit sphere S^{n-1}.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "spheremean/errors.hpp"

namespace spheremean {

struct QuadratureRule {
  int n = 0;
  std::vector<std::array<double, 3>> nodes;  // unit vectors; unused components are 0
  std::vector<double> weights;               // positive, summing to 1
  int exact_degree = 0;                      // polynomials up to this degree are integrated exactly

  std::size_t size() const noexcept { return nodes.size(); }

  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count) {
  if (count < 1) throw ConfigurationError("gauss_legendre: count must be positive");
  std::vector<double> x(count), w(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (z * p1 - p0) / (z * z - 1.0);
    }
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[count - 1 - i] = z;
    x[i] = -z;
    w[i] = w[count - 1 - i] = weight;
  }
  return {x, w};
}

/// The two points x +- r with weight 1/2 each.
inline QuadratureRule two_point_rule() {
  return QuadratureRule{1, {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}, {0.5, 0.5}, 1};
}

/// Uniform trapezoid rule on the circle.
inline QuadratureRule circle_rule(int nodes = 64) {
  if (nodes < 1) throw ConfigurationError("circle_rule: node count must be positive");
  QuadratureRule rule;
  rule.n = 2;
  rule.exact_degree = nodes - 1;
  for (int j = 0; j < nodes; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / nodes;
    rule.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
    rule.weights.push_back(1.0 / nodes);
  }
  return rule;
}

/// Gauss-Legendre in cos(theta) times uniform azimuth.
inline QuadratureRule sphere_product_rule(int polar = 24, int azimuth = 48) {
  if (polar < 1 || azimuth < 1) throw ConfigurationError("sphere_product_rule: node counts must be positive");
  const auto [t, wt] = gauss_legendre(polar);
  QuadratureRule rule;
  rule.n = 3;
  rule.exact_degree = std::min(2 * polar - 1, azimuth - 1);
  for (int i = 0; i < polar; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
    for (int j = 0; j < azimuth; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / azimuth;
      rule.nodes.push_back({s * std::cos(phi), s * std::sin(phi), t[i]});
      rule.weights.push_back(0.5 * wt[i] / azimuth);
    }
  }
  return rule;
}

inline QuadratureRule default_rule(int n) {
  switch (n) {
    case 1:
      return two_point_rule();
    case 2:
      return circle_rule(64);
    case 3:
      return sphere_product_rule(24, 48);
    default:
      throw ConfigurationError("no quadrature rule for dimension " + std::to_string(n));
  }
}

}  // namespace spheremean
