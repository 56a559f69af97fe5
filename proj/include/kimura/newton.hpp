#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kimura/scheme.hpp"
#include "kimura/solver_config.hpp"

namespace kimura {

/// Lower edge of the quadratic-convergence region for damped Newton on
/// self-concordant objectives.
inline const double lambda_star = 2.0 - std::sqrt(3.0);

/// Machine floor that stops the damped Newton loop besides the residual
/// tolerance.  Rows of the residual next to nearly clamped nodes mix terms
/// of order 1/gap^2, so once gaps shrink toward the clamp threshold the
/// rounding noise of the residual evaluation can exceed any fixed absolute
/// tolerance even at the exact minimizer.  Two signals stay meaningful
/// there: a decrement this small certifies that no representable progress
/// is left, and a residual that stops improving inside the contraction
/// regime has reached its evaluation floor.
inline const double newton_decrement_floor = 1e-13;

/// Step fraction for the damped Newton update as a function of the Newton
/// decrement lambda.  Full steps are only taken deep inside the quadratic
/// region; larger decrements get fractions that still guarantee a fixed
/// objective decrease per iteration.
inline double damping_alpha(double lambda, double lambda_prime) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("damping_alpha: lambda must be nonnegative");
  if (lambda > lambda_prime) return 1.0 / lambda;
  if (lambda >= lambda_star) return (1.0 - lambda) / (lambda * (3.0 - lambda));
  return 1.0;
}

/// Self-concordance scale of the split objective:
///
///   a0 = 4 h min(1, kappa/2)^3 / max(kappa, mv)^2.
///
/// Dividing the objective by a0 makes it standard self-concordant, which is
/// what certifies global convergence of the damped iteration.  mv must bound
/// |vc'''| <= mv (vc'')^(3/2) on [0, 1]; the claim is checked on a uniform
/// sample and rejected if it fails where vc'' is positive.
inline double self_concordance_a0(const ModelSpec& model, const MassGrid& grid, double mv) {
  if (!(mv >= 0.0)) throw std::invalid_argument("self_concordance_a0: mv must be nonnegative");
  const FitnessPotential& vc = model.split.vc;
  if (!vc.vprime().derivative().derivative().is_zero()) {
    for (int k = 0; k <= 1000; ++k) {
      const double x = static_cast<double>(k) / 1000.0;
      const double curv = vc.curvature(x);
      if (curv > 1e-12 &&
          std::abs(vc.third_derivative(x)) > mv * std::pow(curv, 1.5) * (1.0 + 1e-9)) {
        throw std::invalid_argument(
            "self_concordance_a0: mv does not bound |vc'''| / (vc'')^(3/2) on [0, 1]");
      }
    }
  }
  const double m = std::min(1.0, 0.5 * model.kappa);
  const double denom = std::max(model.kappa, mv);
  return 4.0 * grid.h * m * m * m / (denom * denom);
}

struct NewtonReport {
  int iterations = 0;
  double residual_norm = 0.0;
};

namespace detail {

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// True when the candidate values keep every gap positive across the window,
/// including the gaps to the frozen neighbors.  Positive gaps against the
/// frozen 0/1 data also pin all candidates strictly inside (0, 1).
inline bool feasible(std::span<const double> vals, ActiveWindow w) {
  for (int i = w.left; i <= w.right + 1; ++i) {
    if (!(vals[i] - vals[i - 1] > 0.0)) return false;
  }
  return true;
}

/// True when every component of the proposed update is within a few ulps of
/// the unknown it perturbs.  A value just below 1 has an absolute resolution
/// of about eps, and a stiff Jacobian row turns one ulp of movement into a
/// residual jump far above any practical tolerance, so once the whole update
/// sits below this representation quantum no smaller residual is reachable
/// in doubles and the iterate counts as converged.
inline bool step_below_quantum(std::span<const double> gamma,
                               std::span<const double> vals, ActiveWindow w) {
  constexpr double quantum = 4.0 * std::numeric_limits<double>::epsilon();
  for (int i = w.left; i <= w.right; ++i) {
    if (std::abs(gamma[i - w.left]) > quantum * vals[i]) return false;
  }
  return true;
}

struct EulerAttempt {
  bool converged = false;
  NewtonReport report;
};

/// Plain full-step Newton on residual_euler from the iterate in vals, with
/// the update halved (at most 30 times) whenever it would break the strict
/// ordering.  Reports failure instead of throwing when the iteration budget
/// runs out, the residual turns non-finite, or feasibility cannot be
/// restored, so the caller can retry from a better starting point.
inline EulerAttempt euler_newton(std::span<const double> p, std::vector<double>& vals,
                                 const ModelSpec& model, double tau, ActiveWindow w,
                                 const SolverConfig& config) {
  EulerAttempt out;
  for (int it = 0;; ++it) {
    const std::vector<double> r = residual_euler(p, vals, model, tau, w);
    out.report.iterations = it;
    out.report.residual_norm = sup_norm(r);
    if (!std::isfinite(out.report.residual_norm)) return out;
    if (out.report.residual_norm < config.newton_abs_tol) {
      out.converged = true;
      return out;
    }
    if (it == config.max_newton_iters) return out;

    const Tridiagonal J = jacobian(p, vals, model, tau, w, Scheme::euler);
    std::vector<double> rhs(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) rhs[k] = -r[k];
    std::vector<double> gamma;
    try {
      gamma = J.solve(std::move(rhs));
    } catch (const std::runtime_error&) {
      return out;
    }
    if (step_below_quantum(gamma, vals, w)) {
      out.converged = true;
      return out;
    }

    double alpha = 1.0;
    std::vector<double> candidate(vals);
    for (int halvings = 0;; ++halvings) {
      for (int i = w.left; i <= w.right; ++i) {
        candidate[i] = vals[i] + alpha * gamma[i - w.left];
      }
      if (feasible(candidate, w)) break;
      if (halvings >= 30) return out;
      alpha *= 0.5;
    }
    vals.swap(candidate);
  }
}

}  // namespace detail

/// One step of the convex-splitting scheme: damped Newton on residual_split
/// starting from the previous map, with the decrement
///
///   lambda = sqrt( -h F . gamma / a0 ),   DF gamma = -F,
///
/// and the alpha(lambda) damping rule.  Self-concordance of the (scaled)
/// objective guarantees convergence from the previous map; the feasibility
/// halving below never triggers in exact arithmetic and only guards against
/// floating-point corner cases next to clamped nodes.
inline std::pair<TransportMap, NewtonReport> solve_split_step(const TransportMap& prev,
                                                              ActiveWindow w,
                                                              const ModelSpec& model,
                                                              const SolverConfig& config) {
  config.validate();
  if (w.empty()) return {prev, NewtonReport{}};
  const MassGrid grid = prev.grid();
  const double a0 = self_concordance_a0(model, grid, config.mv);
  const auto p = prev.values();
  std::vector<double> vals(p.begin(), p.end());

  NewtonReport report;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> best_vals;
  for (int it = 0;; ++it) {
    const std::vector<double> r = residual_split(p, vals, model, config.tau, w);
    report.iterations = it;
    report.residual_norm = detail::sup_norm(r);
    if (!std::isfinite(report.residual_norm)) {
      throw std::runtime_error("solve_split_step: non-finite residual");
    }
    if (report.residual_norm < config.newton_abs_tol) break;
    if (it == config.max_newton_iters) {
      throw std::runtime_error("solve_split_step: no convergence after " +
                               std::to_string(it) + " iterations, residual " +
                               std::to_string(report.residual_norm));
    }

    const Tridiagonal J = jacobian(p, vals, model, config.tau, w, Scheme::split);
    std::vector<double> rhs(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) rhs[k] = -r[k];
    const std::vector<double> gamma = J.solve(std::move(rhs));

    double f_dot_gamma = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) f_dot_gamma += r[k] * gamma[k];
    const double lambda = std::sqrt(std::max(0.0, -grid.h * f_dot_gamma) / a0);
    if (!std::isfinite(lambda)) {
      throw std::runtime_error("solve_split_step: non-finite Newton decrement");
    }
    if (lambda <= newton_decrement_floor) break;
    if (lambda < lambda_star) {
      // Full steps contract the residual in this regime, so a residual that
      // fails to beat the best one seen has hit its evaluation floor.
      if (report.residual_norm >= best_residual) {
        vals = std::move(best_vals);
        report.residual_norm = best_residual;
        break;
      }
      best_residual = report.residual_norm;
      best_vals = vals;
    }

    double alpha = damping_alpha(lambda, config.lambda_prime);
    std::vector<double> candidate(vals);
    for (int halvings = 0;; ++halvings) {
      for (int i = w.left; i <= w.right; ++i) {
        candidate[i] = vals[i] + alpha * gamma[i - w.left];
      }
      if (detail::feasible(candidate, w)) break;
      if (halvings >= 30) {
        throw std::runtime_error("solve_split_step: could not keep the iterate feasible");
      }
      alpha *= 0.5;
    }
    vals.swap(candidate);
  }
  return {TransportMap(grid, std::move(vals)), report};
}

/// Outcome of one accepted time step.
struct StepSolution {
  TransportMap map;        // accepted fully implicit iterate, before clamping
  TransportMap split_map;  // preprocessing iterate from the splitting scheme
  NewtonReport split_report;
  NewtonReport euler_report;

  int newton_iterations() const {
    return split_report.iterations + euler_report.iterations;
  }
};

/// One step of the fully implicit scheme: the splitting step provides the
/// initial guess, then plain Newton runs on residual_euler with full steps
/// and feasibility halving.  While a node collapses toward a boundary the
/// value it must reach shrinks by orders of magnitude within one step, and
/// far from that solution the implicit residual (not a convex gradient) can
/// hand Newton unusable directions.  A failed direct solve is therefore
/// retried by continuation in the step size: solve at a tiny step first
/// (seeded by the splitting solution there), then grow the step toward tau,
/// always advancing from the same previous map with each solution seeding
/// the next solve.  The increment doubles after a success and is bisected
/// after a failure, so the continuation adapts to however violently the
/// solution moves with the step size and each solve stays inside the
/// contraction region of plain Newton.
///
/// Near fixation even the ladder can run out of numbers: an edge node of
/// the window being squeezed against a boundary may need a value closer to
/// 0 or 1 than any double, so the residual has no representable root and
/// the full-size attempts stall or wander with that node at the boundary.
/// By then the node sits deep inside the clamp band (the converged ladder
/// rungs walk it there), and the step after this one would clamp it anyway,
/// so when the attempts fail with edge nodes inside the band the nodes are
/// pinned to their boundary early and the solve restarts on the shrunk
/// window.  The perturbation is bounded by clamp_tol per node, the same
/// bound the post-step clamp already imposes.
inline StepSolution solve_euler_step(const TransportMap& prev, ActiveWindow w,
                                     const ModelSpec& model, const SolverConfig& config) {
  auto [guess, split_report] = solve_split_step(prev, w, model, config);
  if (w.empty()) {
    return StepSolution{guess, guess, split_report, NewtonReport{}};
  }
  const MassGrid grid = prev.grid();
  const auto g = guess.values();
  std::vector<double> vals(g.begin(), g.end());

  TransportMap anchor = prev;  // previous map, with nodes pinned as they fixate
  ActiveWindow sw = w;
  int spent = 0;

  // Pins window edge nodes that `evidence` places inside the clamp band,
  // writing the boundary value into the working iterate and the anchor.
  const auto pin_banded_edges = [&](const std::vector<double>& evidence) {
    const auto a = anchor.values();
    std::vector<double> pv(a.begin(), a.end());
    bool any = false;
    while (!sw.empty() && evidence[sw.left] < config.clamp_tol) {
      vals[sw.left] = 0.0;
      pv[sw.left] = 0.0;
      sw.left += 1;
      any = true;
    }
    while (!sw.empty() && 1.0 - evidence[sw.right] < config.clamp_tol) {
      vals[sw.right] = 1.0;
      pv[sw.right] = 1.0;
      sw.right -= 1;
      any = true;
    }
    if (any) anchor = TransportMap(grid, std::move(pv));
    return any;
  };
  const auto all_pinned = [&]() {
    NewtonReport report;
    report.iterations = spent;
    return StepSolution{TransportMap(grid, std::move(vals)), std::move(guess),
                        split_report, report};
  };

  bool first_round = true;
  for (;;) {
    if (!first_round) {
      const auto [restart, restart_report] = solve_split_step(anchor, sw, model, config);
      const auto rv = restart.values();
      for (int i = sw.left; i <= sw.right; ++i) vals[i] = rv[i];
    }
    first_round = false;
    const auto p = anchor.values();

    detail::EulerAttempt direct =
        detail::euler_newton(p, vals, model, config.tau, sw, config);
    spent += direct.report.iterations;
    if (direct.converged) {
      direct.report.iterations = spent;
      return StepSolution{TransportMap(grid, std::move(vals)), std::move(guess),
                          split_report, direct.report};
    }
    if (pin_banded_edges(vals)) {
      if (sw.empty()) return all_pinned();
      continue;
    }

    std::optional<NewtonReport> climbed;
    std::vector<double> probe;  // last converged continuation state
    {
      SolverConfig bottom = config;
      bottom.tau = config.tau / 4096.0;
      const auto [start, start_report] = solve_split_step(anchor, sw, model, bottom);
      const auto sv = start.values();
      for (int i = sw.left; i <= sw.right; ++i) vals[i] = sv[i];
      detail::EulerAttempt attempt =
          detail::euler_newton(p, vals, model, bottom.tau, sw, config);
      spent += attempt.report.iterations;
      if (attempt.converged) {
        double t_ok = bottom.tau;
        double dt = t_ok;
        std::vector<double> vals_ok = vals;
        probe = vals;
        for (int tries = 0; tries < 256; ++tries) {
          const double t_try = std::min(t_ok + dt, config.tau);
          attempt = detail::euler_newton(p, vals, model, t_try, sw, config);
          spent += attempt.report.iterations;
          if (attempt.converged) {
            probe = vals;
            if (t_try == config.tau) {
              climbed = attempt.report;
              break;
            }
            t_ok = t_try;
            vals_ok = vals;
            dt *= 2.0;
          } else {
            dt *= 0.5;
            if (dt < config.tau * 1e-8) break;
            vals = vals_ok;
          }
        }
      }
    }
    if (climbed) {
      climbed->iterations = spent;
      return StepSolution{TransportMap(grid, std::move(vals)), std::move(guess),
                          split_report, *climbed};
    }
    const bool from_last = pin_banded_edges(vals);
    const bool from_probe = !probe.empty() && !sw.empty() && pin_banded_edges(probe);
    if (from_last || from_probe) {
      if (sw.empty()) return all_pinned();
      continue;
    }
    throw std::runtime_error("solve_euler_step: no convergence after " +
                             std::to_string(spent) + " iterations, residual " +
                             std::to_string(direct.report.residual_norm));
  }
}

}  // namespace kimura
