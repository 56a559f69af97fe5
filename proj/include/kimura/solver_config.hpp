#pragma once

#include <cmath>
#include <stdexcept>

namespace kimura {

/// Knobs for one time step: step size, Newton stopping rule, damping
/// threshold, boundary capture threshold, and the self-concordance constant
/// of the convex potential part (zero whenever vc''' vanishes, which covers
/// every linear-slope potential).
struct SolverConfig {
  double tau = 1e-3;
  double newton_abs_tol = 1e-9;
  int max_newton_iters = 100;
  double lambda_prime = 0.5;
  double clamp_tol = 1e-10;
  double mv = 0.0;

  void validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("SolverConfig: tau must be positive");
    if (!(newton_abs_tol > 0.0)) {
      throw std::invalid_argument("SolverConfig: newton_abs_tol must be positive");
    }
    if (max_newton_iters < 1) {
      throw std::invalid_argument("SolverConfig: max_newton_iters must be at least 1");
    }
    const double lambda_star = 2.0 - std::sqrt(3.0);
    if (!(lambda_prime >= lambda_star) || !(lambda_prime < 1.0)) {
      throw std::invalid_argument("SolverConfig: lambda_prime must lie in [2-sqrt(3), 1)");
    }
    if (!(clamp_tol > 0.0) || !(clamp_tol <= 1e-6)) {
      throw std::invalid_argument("SolverConfig: clamp_tol must lie in (0, 1e-6]");
    }
    if (!(mv >= 0.0)) throw std::invalid_argument("SolverConfig: mv must be nonnegative");
  }
};

}  // namespace kimura
