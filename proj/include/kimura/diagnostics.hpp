#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kimura/model.hpp"
#include "kimura/transport_map.hpp"

namespace kimura {

/// Discrete free energy of a map.  Terms whose argument degenerates (a gap
/// or a mobility that is not strictly positive) are dropped from the sums;
/// dropped_terms reports how many, so callers can tell a genuinely finite
/// energy from one that ignored absorbed nodes.
struct EnergyValue {
  double value = 0.0;
  int dropped_terms = 0;
};

inline EnergyValue discrete_energy(const TransportMap& map, const ModelSpec& model) {
  const MassGrid grid = map.grid();
  const double h = grid.h;
  const auto v = map.values();
  EnergyValue out;
  for (int i = 0; i < grid.N; ++i) {
    const double gap = v[i + 1] - v[i];
    if (gap > 0.0) {
      out.value -= 0.5 * model.kappa * h * std::log(gap / h);
    } else {
      out.dropped_terms += 1;
    }
  }
  for (int i = 1; i < grid.N; ++i) {
    const double mobility = v[i] * (1.0 - v[i]);
    if (mobility > 0.0) {
      out.value += 0.5 * model.kappa * h * std::log(mobility);
    } else {
      out.dropped_terms += 1;
    }
    if (!model.potential.is_zero()) {
      out.value += h * model.potential.value(v[i]);
    }
  }
  return out;
}

/// A priori lower bound for the discrete energy, uniform over maps on the
/// given grid.  Useful as a sanity floor when monitoring dissipation.
inline double discrete_energy_lower_bound(const ModelSpec& model, double h) {
  if (!(h > 0.0 && h < 1.0)) {
    throw std::invalid_argument("discrete_energy_lower_bound: h must lie in (0,1)");
  }
  const double m = model.potential.is_zero()
                       ? 0.0
                       : model.potential.sup_abs_value();
  return 0.5 * model.kappa * (1.0 - h) * std::log(h) - m + m * h -
         0.5 * model.kappa * (1.0 - 2.0 * h) * std::log(2.0);
}

/// h * sum over the interior of (Phi_i + drift_i).  Constant along exact
/// trajectories of the scheme up to clamping and Newton tolerance.
inline double conserved_quantity(const TransportMap& map,
                                 const std::vector<double>& accumulated_drift) {
  const MassGrid grid = map.grid();
  if (static_cast<int>(accumulated_drift.size()) != grid.N + 1) {
    throw std::invalid_argument("conserved_quantity: drift size does not match the grid");
  }
  const auto v = map.values();
  double sum = 0.0;
  for (int i = 1; i < grid.N; ++i) {
    sum += v[i] + accumulated_drift[i];
  }
  return grid.h * sum;
}

/// Long-time limit of pure diffusion in map variables: a step map with m
/// interior nodes at zero, one node at the fractional value a, and the rest
/// at one.  m and a are chosen so the node sum matches the initial map
/// exactly.
struct SteadyMap {
  MassGrid grid;
  int m = 0;      // interior nodes absorbed at zero
  double a = 0.0; // value of the single transitional node, in [0,1)

  TransportMap to_map() const {
    std::vector<double> vals(static_cast<size_t>(grid.N) + 1, 1.0);
    vals[0] = 0.0;
    for (int i = 1; i <= m && i < grid.N; ++i) vals[i] = 0.0;
    if (m + 1 >= 1 && m + 1 <= grid.N - 1) vals[m + 1] = a;
    return TransportMap(grid, std::move(vals));
  }
};

inline SteadyMap steady_state_diffusion(const TransportMap& initial, const ModelSpec& model) {
  if (!model.is_diffusion()) {
    throw std::invalid_argument(
        "steady_state_diffusion: only defined for vanishing selection");
  }
  const MassGrid grid = initial.grid();
  const auto v = initial.values();
  double sum = 0.0;
  for (int i = 0; i <= grid.N; ++i) sum += v[i];
  // Node sums of admissible maps lie in [1, N] (the endpoints are pinned at
  // 0 and 1), so m lands in [-1, N-2] and the transitional index m+1 stays
  // inside the map.
  const double floor_sum = std::floor(sum);
  const int m = grid.N - 1 - static_cast<int>(floor_sum);
  const double a = sum - floor_sum;
  return SteadyMap{grid, m, a};
}

/// Mass absorbed at the two boundary points, estimated by counting nodes
/// within tol of an endpoint.  Each interior node carries mass h.
struct DiracMasses {
  double at_zero = 0.0;
  double at_one = 0.0;
};

inline DiracMasses dirac_masses(const TransportMap& map, double tol) {
  const MassGrid grid = map.grid();
  const auto v = map.values();
  DiracMasses out;
  for (int i = 1; i < grid.N; ++i) {
    if (v[i] <= tol) {
      out.at_zero += grid.h;
    } else if (v[i] >= 1.0 - tol) {
      out.at_one += grid.h;
    }
  }
  return out;
}

/// Trapezoid-rule mass of the region above the map, i.e. the estimated mean
/// of the transported density.  For a step map that jumps at eta0 this
/// recovers 1 - eta0 up to O(h).
inline double numerical_jump(const TransportMap& map) {
  const MassGrid grid = map.grid();
  const auto v = map.values();
  double sum = 0.5 * (1.0 - v[0]) + 0.5 * (1.0 - v[grid.N]);
  for (int i = 1; i < grid.N; ++i) {
    sum += 1.0 - v[i];
  }
  return grid.h * sum;
}

namespace detail {

inline void require_same_grid(const TransportMap& a, const TransportMap& b,
                              const char* who) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument(std::string(who) + ": maps live on different grids");
  }
}

}  // namespace detail

/// Discrete L2 distance over interior nodes, sqrt(h * sum of squared gaps).
inline double l2_distance(const TransportMap& a, const TransportMap& b) {
  detail::require_same_grid(a, b, "l2_distance");
  const MassGrid grid = a.grid();
  const auto va = a.values();
  const auto vb = b.values();
  double sum = 0.0;
  for (int i = 1; i < grid.N; ++i) {
    const double d = va[i] - vb[i];
    sum += d * d;
  }
  return std::sqrt(grid.h * sum);
}

/// Quadratic transport distance between the transported measures, computed
/// nodewise through the angle variable asin(2 Phi - 1).
inline double wasserstein_distance(const TransportMap& a, const TransportMap& b) {
  detail::require_same_grid(a, b, "wasserstein_distance");
  const MassGrid grid = a.grid();
  const auto va = a.values();
  const auto vb = b.values();
  double sum = 0.0;
  for (int i = 1; i < grid.N; ++i) {
    const double d = std::asin(2.0 * va[i] - 1.0) - std::asin(2.0 * vb[i] - 1.0);
    sum += d * d;
  }
  return std::sqrt(grid.h * sum);
}

/// L1 error of a coarse map against a reference on a nested refinement.
/// The reference grid size must be an exact multiple of the coarse one.
inline double l1_error(const TransportMap& coarse, const TransportMap& reference) {
  const MassGrid cg = coarse.grid();
  const MassGrid rg = reference.grid();
  if (rg.N % cg.N != 0) {
    throw std::invalid_argument("l1_error: reference grid is not a refinement");
  }
  const int stride = rg.N / cg.N;
  const auto vc = coarse.values();
  const auto vr = reference.values();
  double sum = 0.0;
  for (int i = 0; i <= cg.N; ++i) {
    sum += std::abs(vc[i] - vr[i * stride]);
  }
  return cg.h * sum;
}

/// Observed order of convergence from two errors on grids refined by two.
inline double estimated_order(double error_coarse, double error_fine) {
  if (!(error_coarse > 0.0) || !(error_fine > 0.0)) {
    throw std::invalid_argument("estimated_order: errors must be positive");
  }
  return std::log2(error_coarse) - std::log2(error_fine);
}

/// Observed orders for a whole refinement sequence of (parameter, error)
/// pairs.  The parameter must halve between consecutive entries, otherwise
/// the log2 ratio would not measure an order.
inline std::vector<double> eoc_orders(const std::vector<std::pair<double, double>>& errors) {
  std::vector<double> orders;
  for (size_t i = 1; i < errors.size(); ++i) {
    const double prev = errors[i - 1].first;
    const double cur = errors[i].first;
    if (!(prev > 0.0) || std::abs(cur - 0.5 * prev) > 1e-9 * prev) {
      throw std::invalid_argument("eoc_orders: parameters must halve between entries");
    }
    orders.push_back(estimated_order(errors[i - 1].second, errors[i].second));
  }
  return orders;
}

}  // namespace kimura
