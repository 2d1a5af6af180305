// Plane waves at the zeros of the multiplier are annihilated by the spherical mean.

#include <cstdio>

#include "spheremean/spheremean.hpp"

int main() {
  using namespace spheremean;
  for (int n = 1; n <= 3; ++n)
    for (int ell = 0; ell <= 1; ++ell) {
      const OperatorSpec spec(n, 1.0, ell);
      const auto zeros = symbol_zeros(spec, 3);
      std::printf("%s  zeros:", spec.describe().c_str());
      for (double z : zeros) std::printf(" %.12f", z);
      const int m = 2;
      const Grid grid = kernel_grid(spec, m, 32);
      const KernelReport rep = kernel_check(spec, grid, m, 1, default_rule(n));
      std::printf("\n    a_%d/r on lattice, residual spectral %.2e quadrature %.2e\n", m, rep.spectral_residual,
                  rep.quadrature_residual);
    }
}
