#pragma once

#include <cmath>
#include <iostream>
#include <vector>

#include "kimura/density.hpp"
#include "kimura/grid.hpp"
#include "kimura/transport_map.hpp"

namespace kimura {

/// Builds the initial transport map by inverting the CDF of f0 at each grid
/// node: values[i] = inf { x : F(x) > i h }.  On plateaus of F (support gaps
/// of f0) that infimum is the right edge of the plateau, which the bisection
/// below converges to by construction, so densities vanishing on interior
/// intervals are handled without special cases.
inline TransportMap build_initial_map(const InitialDensity& f0, MassGrid grid) {
  std::vector<double> values(grid.N + 1);
  values[0] = 0.0;
  values[grid.N] = 1.0;

  double lo_floor = 0.0;
  for (int i = 1; i < grid.N; ++i) {
    const double target = grid.eta(i);
    // Invariant: F(hi) > target >= F(lo).  Targets increase with i, so the
    // previous lower bound remains valid and the scans stay cheap.
    double lo = lo_floor;
    double hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (f0.cdf(mid) > target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    values[i] = hi;
    lo_floor = lo;
  }

  // Ties can only come from degenerate initial data (atoms or unresolvable
  // plateaus).  Nudge them apart so the interior starts strictly ordered,
  // which the first solver step requires.
  bool repaired = false;
  for (int i = 1; i < grid.N; ++i) {
    if (values[i] <= values[i - 1]) {
      values[i] = values[i - 1] + 1e-12 * grid.h;
      repaired = true;
    }
  }
  if (repaired) {
    for (int i = grid.N - 1; i >= 1; --i) {
      if (values[i] >= values[i + 1]) {
        values[i] = values[i + 1] - 1e-12 * grid.h;
      }
    }
    std::clog << "build_initial_map: tied values for density '" << f0.name()
              << "' perturbed to restore strict ordering\n";
  }
  return TransportMap(grid, std::move(values));
}

}  // namespace kimura
