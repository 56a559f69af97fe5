#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kimura/config.hpp"
#include "kimura/diagnostics.hpp"
#include "kimura/initial_map.hpp"
#include "kimura/reference.hpp"
#include "kimura/run_record.hpp"
#include "kimura/solver.hpp"

namespace kimura {

/// Long-time limit used as the comparison point for the record's distance
/// columns.  Pure diffusion admits an exact discrete steady map; with
/// selection we use the step map whose jump sits at the theoretical
/// location, which the discrete trajectory approaches up to O(h).
inline TransportMap steady_reference(const TransportMap& initial, const InitialDensity& f0,
                                     const ModelSpec& model) {
  if (model.is_diffusion()) {
    return steady_state_diffusion(initial, model).to_map();
  }
  const double eta0 = theoretical_jump(f0, model.potential, model.kappa);
  const MassGrid grid = initial.grid();
  std::vector<double> vals(static_cast<size_t>(grid.N) + 1, 1.0);
  vals[0] = 0.0;
  for (int i = 1; i < grid.N; ++i) {
    vals[i] = grid.eta(i) < eta0 ? 0.0 : 1.0;
  }
  return TransportMap(grid, std::move(vals));
}

/// Runs the scheme to the final step and returns only the final map.
inline TransportMap simulate_final_map(TransportMap initial, const ModelSpec& model,
                                       const SolverConfig& solver, long steps) {
  SolverState state = SolverState::from_initial_map(std::move(initial), solver);
  advance(state, model, solver, steps);
  return std::move(state.map);
}

/// Advances with the splitting step alone, clamping after each step, and
/// returns the final map.  The refinement studies use this stepper: their
/// error columns measure the splitting defect, which the corrected solve
/// would otherwise flatten below the refinement signal.
inline TransportMap split_final_map(TransportMap initial, const ModelSpec& model,
                                    const SolverConfig& solver, long steps) {
  auto [map, window] = clamp_boundary(std::move(initial), solver);
  for (long s = 0; s < steps && !window.empty(); ++s) {
    auto [next, report] = solve_split_step(map, window, model, solver);
    auto [clamped, shrunk] = clamp_boundary(next, solver);
    map = std::move(clamped);
    window = shrunk;
  }
  return map;
}

struct SimulationResult {
  SolverState state;
  RunRecord record;
};

/// Runs the scheme and samples the diagnostics every `stride` steps (plus
/// the initial instant and the final step).
inline SimulationResult run_recorded(TransportMap initial, const ModelSpec& model,
                                     const SolverConfig& solver, long steps, int stride,
                                     const TransportMap& reference) {
  const MassGrid grid = initial.grid();
  SolverState state = SolverState::from_initial_map(std::move(initial), solver);
  RunRecord record;
  const auto sample = [&](long step, int newton_iters) {
    RunRow row;
    row.t = static_cast<double>(step) * solver.tau;
    row.energy = discrete_energy(state.map, model).value;
    row.conserved = conserved_quantity(state.map, state.accumulated_drift);
    row.l2 = l2_distance(state.map, reference);
    row.wasserstein = wasserstein_distance(state.map, reference);
    row.clamp_left = state.window.left - 1;
    row.clamp_right = grid.N - 1 - state.window.right;
    row.newton_iters = newton_iters;
    record.append(row);
  };
  sample(0, 0);
  advance(state, model, solver, steps, [&](const StepTrace& trace) {
    if (trace.step % stride == 0 || trace.step == steps) {
      sample(trace.step, trace.newton_iterations);
    }
  });
  return SimulationResult{std::move(state), std::move(record)};
}

inline void write_map_csv(std::ostream& os, const TransportMap& map) {
  os << "i,eta,phi\n";
  const MassGrid grid = map.grid();
  char buf[96];
  for (int i = 0; i <= grid.N; ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.14e,%.14e\n", i, grid.eta(i), map[i]);
    os << buf;
  }
}

namespace detail {

inline std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write output file '" + path.string() + "'");
  }
  return out;
}

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return buf;
}

inline std::string format_coefficients(const std::vector<double>& coeffs) {
  if (coeffs.empty()) return "zero";
  std::string out;
  char buf[40];
  for (size_t i = 0; i < coeffs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%g", coeffs[i]);
    if (i > 0) out += ' ';
    out += buf;
  }
  return out;
}

}  // namespace detail

/// Reference for decay fits.  Diffusion keeps the exact discrete steady
/// map; with selection the comparison point is the final iterate of a run
/// twice as long, a proxy whose residual distance sits below the fit's
/// plateau-exclusion floor.
inline TransportMap decay_reference(const TransportMap& initial, const ModelSpec& model,
                                    const SolverConfig& solver, long steps) {
  if (model.is_diffusion()) {
    return steady_state_diffusion(initial, model).to_map();
  }
  return simulate_final_map(initial, model, solver, 2 * steps);
}

/// Single simulation: writes <label>_record.csv and <label>_map.csv, and in
/// decay mode additionally <label>_decay.csv holding the fitted rate.
inline SimulationResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const MassGrid grid(cfg.n);
  const ModelSpec model = cfg.model();
  const InitialDensity f0 = cfg.initial_density();
  SolverConfig solver;
  solver.tau = cfg.tau;
  TransportMap initial = build_initial_map(f0, grid);
  const TransportMap reference = cfg.mode == RunMode::decay
                                     ? decay_reference(initial, model, solver, cfg.steps())
                                     : steady_reference(initial, f0, model);
  SimulationResult result =
      run_recorded(std::move(initial), model, solver, cfg.steps(), cfg.stride, reference);
  const std::string label = cfg.effective_label();
  {
    std::ofstream out = detail::open_output(cfg.outdir, label + "_record.csv");
    result.record.write_csv(out);
  }
  {
    std::ofstream out = detail::open_output(cfg.outdir, label + "_map.csv");
    write_map_csv(out, result.state.map);
  }
  if (cfg.mode == RunMode::decay) {
    const double rate = decay_rate_fit(result.record, grid.h);
    std::ofstream out = detail::open_output(cfg.outdir, label + "_decay.csv");
    out << "rate\n" << detail::format_number(rate) << "\n";
  }
  return result;
}

/// One line of a convergence table: the discretization parameter, the L1
/// error against the reference run, and the observed order (NaN on the
/// first line, written as an empty field).
struct EocRow {
  double param = 0.0;
  double error = 0.0;
  double eoc = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void write_eoc_csv(std::ostream& os, const char* param_name,
                          const std::vector<EocRow>& rows) {
  os << param_name << ",error,eoc\n";
  for (const EocRow& r : rows) {
    os << format_number(r.param) << ',' << format_number(r.error) << ',';
    if (!std::isnan(r.eoc)) os << format_number(r.eoc);
    os << '\n';
  }
}

}  // namespace detail

/// Grid-refinement study: one reference run on ref_n, one run per level,
/// all sharing the configured time step; writes <label>_table.csv.  The
/// runs are independent and execute concurrently.
inline std::vector<EocRow> eoc_space_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelSpec model = cfg.model();
  const InitialDensity f0 = cfg.initial_density();
  SolverConfig solver;
  solver.tau = cfg.tau;
  const long steps = cfg.steps();
  const auto task = [&f0, &model, &solver, steps](int n) {
    const MassGrid grid(n);
    return split_final_map(build_initial_map(f0, grid), model, solver, steps);
  };
  std::vector<std::future<TransportMap>> futures;
  futures.push_back(std::async(std::launch::async, task, cfg.ref_n));
  for (int n : cfg.levels) {
    futures.push_back(std::async(std::launch::async, task, n));
  }
  const TransportMap reference = futures[0].get();
  std::vector<EocRow> rows;
  for (size_t i = 0; i < cfg.levels.size(); ++i) {
    EocRow row;
    row.param = 1.0 / cfg.levels[i];
    row.error = l1_error(futures[i + 1].get(), reference);
    if (i > 0) row.eoc = estimated_order(rows.back().error, row.error);
    rows.push_back(row);
  }
  std::ofstream out = detail::open_output(cfg.outdir, cfg.effective_label() + "_table.csv");
  detail::write_eoc_csv(out, "h", rows);
  return rows;
}

/// Time-refinement study on a fixed grid: one reference run at ref_tau, one
/// run per entry of taus; writes <label>_table.csv.
inline std::vector<EocRow> eoc_time_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const MassGrid grid(cfg.n);
  const ModelSpec model = cfg.model();
  const InitialDensity f0 = cfg.initial_density();
  const TransportMap initial = build_initial_map(f0, grid);
  const auto task = [&model, &initial, &cfg](double tau) {
    SolverConfig solver;
    solver.tau = tau;
    return split_final_map(initial, model, solver, std::lround(cfg.final_time / tau));
  };
  std::vector<std::future<TransportMap>> futures;
  futures.push_back(std::async(std::launch::async, task, cfg.ref_tau));
  for (double tau : cfg.taus) {
    futures.push_back(std::async(std::launch::async, task, tau));
  }
  const TransportMap reference = futures[0].get();
  std::vector<EocRow> rows;
  for (size_t i = 0; i < cfg.taus.size(); ++i) {
    EocRow row;
    row.param = cfg.taus[i];
    row.error = l1_error(futures[i + 1].get(), reference);
    if (i > 0) row.eoc = estimated_order(rows.back().error, row.error);
    rows.push_back(row);
  }
  std::ofstream out = detail::open_output(cfg.outdir, cfg.effective_label() + "_table.csv");
  detail::write_eoc_csv(out, "tau", rows);
  return rows;
}

struct JumpRow {
  std::string density;
  std::string vprime;
  double theoretical = 0.0;
  double numerical = 0.0;
  double abs_error = 0.0;
};

/// Jump-location benchmark: six fixed (density, selection) pairs run to the
/// configured final time, comparing the computed jump location against the
/// quadrature of the fixation probability.  Writes <label>_table.csv.
inline std::vector<JumpRow> jump_table(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Case {
    const char* density;
    std::vector<double> vprime;
  };
  const std::vector<Case> cases = {
      {"3x2", {2.0}},      {"3x2", {1.0, -3.0}},      {"two-bump", {2.0}},
      {"two-bump", {1.0, -3.0}}, {"indicator", {2.0}}, {"indicator", {1.0, -3.0}},
  };
  const MassGrid grid(cfg.n);
  SolverConfig solver;
  solver.tau = cfg.tau;
  const long steps = cfg.steps();
  const auto task = [&](const Case& c) {
    const InitialDensity f0 = InitialDensity::from_key(c.density);
    const ModelSpec model(cfg.kappa, FitnessPotential(c.vprime));
    JumpRow row;
    row.density = c.density;
    row.vprime = detail::format_coefficients(c.vprime);
    row.theoretical = theoretical_jump(f0, model.potential, model.kappa);
    row.numerical =
        numerical_jump(simulate_final_map(build_initial_map(f0, grid), model, solver, steps));
    row.abs_error = std::abs(row.numerical - row.theoretical);
    return row;
  };
  std::vector<std::future<JumpRow>> futures;
  for (const Case& c : cases) {
    futures.push_back(std::async(std::launch::async, task, std::cref(c)));
  }
  std::vector<JumpRow> rows;
  for (auto& f : futures) rows.push_back(f.get());
  std::ofstream out = detail::open_output(cfg.outdir, cfg.effective_label() + "_table.csv");
  out << "density,vprime,theoretical,numerical,abs_error\n";
  for (const JumpRow& r : rows) {
    out << r.density << ',' << r.vprime << ',' << detail::format_number(r.theoretical)
        << ',' << detail::format_number(r.numerical) << ','
        << detail::format_number(r.abs_error) << '\n';
  }
  return rows;
}

}  // namespace kimura
