#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kimura/newton.hpp"
#include "kimura/scheme.hpp"
#include "kimura/solver_config.hpp"
#include "kimura/transport_map.hpp"

namespace kimura {

/// Snaps interior values within clamp_tol of an endpoint onto it and
/// recomputes the window of remaining unknowns.  Monotonicity means snapped
/// nodes always form a prefix (zeros) and a suffix (ones) of the interior,
/// so the window can only shrink over a run; snapped nodes act as frozen
/// Dirichlet data from then on.
inline std::pair<TransportMap, ActiveWindow> clamp_boundary(TransportMap map,
                                                            const SolverConfig& config) {
  const MassGrid grid = map.grid();
  std::vector<double> vals = std::move(map).take_values();
  for (int i = 1; i < grid.N; ++i) {
    if (vals[i] > 0.0 && vals[i] < config.clamp_tol) {
      vals[i] = 0.0;
    } else if (vals[i] < 1.0 && vals[i] > 1.0 - config.clamp_tol) {
      vals[i] = 1.0;
    }
  }
  ActiveWindow w{1, grid.N - 1};
  while (!w.empty() && vals[w.left] == 0.0) ++w.left;
  while (!w.empty() && vals[w.right] == 1.0) --w.right;
  for (int i = w.left; i <= w.right; ++i) {
    if (!(vals[i] > 0.0 && vals[i] < 1.0)) {
      throw std::logic_error("clamp_boundary: degenerate value inside the window");
    }
  }
  return {TransportMap(grid, std::move(vals)), w};
}

/// Mutable trajectory state: the current map, the accumulated drift
///
///   drift_i = tau * sum over accepted steps of  Phi_i (1 - Phi_i) V'(Phi_i),
///
/// the active window, and the step counter.  The conserved quantity of the
/// dynamics is h * sum over the interior of (Phi_i + drift_i).
struct SolverState {
  TransportMap map;
  std::vector<double> accumulated_drift;
  ActiveWindow window;
  long step_count = 0;

  static SolverState from_initial_map(TransportMap initial, const SolverConfig& config) {
    auto [map, window] = clamp_boundary(std::move(initial), config);
    const int nodes = map.size();
    return SolverState{std::move(map), std::vector<double>(nodes, 0.0), window, 0};
  }
};

/// Everything observable about one completed step, handed to the observer
/// before the next step begins.  The split iterate is exposed because the
/// per-step energy dissipation estimate is stated for the splitting scheme.
struct StepTrace {
  long step;                   // 1-based index of the completed step
  const TransportMap& previous;
  const TransportMap& split;    // splitting-scheme iterate
  const TransportMap& accepted; // implicit iterate, before clamping
  const SolverState& state;     // state after drift update and clamping
  ActiveWindow window_before;
  int newton_iterations;
};

using StepObserver = std::function<void(const StepTrace&)>;

/// Advances the state n_steps times: implicit step (with splitting
/// preprocessing), drift accumulation from the accepted pre-clamp values,
/// then boundary clamping.  Once the window is empty the map is stationary
/// and remaining steps only advance the counter.  Step failures are
/// rethrown with the failing step index attached.
inline void advance(SolverState& state, const ModelSpec& model, const SolverConfig& config,
                    long n_steps, const StepObserver& observer = {}) {
  config.validate();
  const MassGrid grid = state.map.grid();
  for (long s = 0; s < n_steps; ++s) {
    const ActiveWindow window_before = state.window;
    try {
      if (state.window.empty()) {
        state.step_count += 1;
        if (observer) {
          observer(StepTrace{state.step_count, state.map, state.map, state.map, state,
                             window_before, 0});
        }
        continue;
      }
      StepSolution sol = solve_euler_step(state.map, state.window, model, config);
      if (!model.is_diffusion()) {
        const auto v = sol.map.values();
        for (int i = 1; i < grid.N; ++i) {
          const double mobility = v[i] * (1.0 - v[i]);
          if (mobility > 0.0) {
            state.accumulated_drift[i] +=
                config.tau * mobility * model.potential.slope(v[i]);
          }
        }
      }
      auto [clamped, window] = clamp_boundary(sol.map, config);
      if (window.left < window_before.left || window.right > window_before.right) {
        throw std::logic_error("advance: active window grew");
      }
      TransportMap previous = std::move(state.map);
      state.map = std::move(clamped);
      state.window = window;
      state.step_count += 1;
      if (observer) {
        observer(StepTrace{state.step_count, previous, sol.split_map, sol.map, state,
                           window_before, sol.newton_iterations()});
      }
    } catch (const std::logic_error&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("advance: step " + std::to_string(state.step_count + 1) +
                               " failed: " + e.what());
    }
  }
}

}  // namespace kimura
