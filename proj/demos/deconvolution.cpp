// Recover a field from its Neumann spherical means, then show what happens when the data
// contain a kernel component.

#include <cstdio>

#include "spheremean/spheremean.hpp"

int main() {
  using namespace spheremean;
  const OperatorSpec spec(3, 1.0, 1);
  const Grid grid = kernel_grid(spec, 1, 32, 4);
  const SpectralOperator op(spec, grid);

  const Field v = random_band_limited(grid, 2024);
  const Field w = op.apply(v);
  const Solution sol = solve(op, w, default_eps_sym(op));
  std::printf("degenerate bins: %zu, recovery error (kernel part of v is lost): %.3e\n",
              sol.report.degenerate.size(), relative_l2_difference(sol.v, v));
  std::printf("re-application residual: %.3e\n", relative_l2_difference(op.apply(sol.v), w));

  Field polluted = w;
  const Field wave = plane_wave(grid, {4, 0, 0});
  for (std::size_t i = 0; i < polluted.values.size(); ++i) polluted.values[i] += 1e-3 * wave.values[i];
  const RangeReport rep = range_test(op, polluted, default_eps_sym(op));
  std::printf("with a kernel wave added: %s\n", rep.to_json().dump().substr(0, 160).c_str());
}
