#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "kimura/grid.hpp"
#include "kimura/model.hpp"
#include "kimura/transport_map.hpp"
#include "kimura/tridiagonal.hpp"

namespace kimura {

/// Inclusive index range of the interior nodes that are still unknowns.
/// Nodes outside the window hold frozen values (0 on the left, 1 on the
/// right) and act as Dirichlet data in the residuals below.
struct ActiveWindow {
  int left = 1;
  int right = 0;

  int count() const { return right - left + 1; }
  bool empty() const { return right < left; }

  static ActiveWindow full(const MassGrid& grid) { return ActiveWindow{1, grid.N - 1}; }
};

enum class Scheme { euler, split };

/// Residual of the fully implicit update at each active node i:
///
///   (x_i - p_i) / (tau x_i (1 - x_i))
///   + (kappa/2) [ 1/(x_{i+1} - x_i) - 1/(x_i - x_{i-1}) + 1/x_i - 1/(1 - x_i) ]
///   + V'(x_i)
///
/// with p the previous map and x the candidate.  The bracket is assembled
/// from the two fused quotients
///
///   1/gap_up - 1/(1 - x_i)  =  (1 - x_{i+1}) / (gap_up (1 - x_i))
///   1/x_i - 1/gap_dn        = -x_{i-1} / (x_i gap_dn)
///
/// which are algebraically identical but vanish exactly when the neighbor
/// sits on the boundary.  Next to clamped nodes the separate terms reach
/// 1e10 and their floating-point cancellation would leave ~1e-6 of noise,
/// far above the Newton tolerance; the fused forms stay at the size of the
/// true residual.
inline std::vector<double> residual_euler(std::span<const double> prev,
                                          std::span<const double> cur,
                                          const ModelSpec& model, double tau,
                                          ActiveWindow w) {
  if (!(tau > 0.0)) throw std::invalid_argument("residual_euler: tau must be positive");
  std::vector<double> r(w.empty() ? 0 : w.count());
  const double half_kappa = 0.5 * model.kappa;
  for (int i = w.left; i <= w.right; ++i) {
    const double x = cur[i];
    const double gap_up = cur[i + 1] - x;
    const double gap_dn = x - cur[i - 1];
    if (!(x > 0.0) || !(x < 1.0) || !(gap_up > 0.0) || !(gap_dn > 0.0)) {
      throw std::domain_error("residual_euler: candidate map left the feasible region");
    }
    const double up_pair = (1.0 - cur[i + 1]) / (gap_up * (1.0 - x));
    const double dn_pair = -cur[i - 1] / (x * gap_dn);
    r[i - w.left] = (x - prev[i]) / (tau * x * (1.0 - x)) +
                    half_kappa * (up_pair + dn_pair) + model.potential.slope(x);
  }
  return r;
}

/// Residual of the splitting update used as the preprocessing step.  The
/// mobility, the boundary repulsion term, and the explicit part of the
/// potential are all frozen at the previous map p, so only the gap terms and
/// vc' see the candidate x:
///
///   (x_i - p_i) / (tau p_i (1 - p_i))
///   + (kappa/2) [ 1/(x_{i+1} - x_i) - 1/(x_i - x_{i-1}) + 1/p_i - 1/(1 - p_i) ]
///   + vc'(x_i) - ve'(p_i).
///
/// This residual is 1/h times the gradient of the strictly convex objective
/// in split_objective.  The same fused-quotient treatment as in
/// residual_euler applies, with p in place of x in the boundary factors.
inline std::vector<double> residual_split(std::span<const double> prev,
                                          std::span<const double> cur,
                                          const ModelSpec& model, double tau,
                                          ActiveWindow w) {
  if (!(tau > 0.0)) throw std::invalid_argument("residual_split: tau must be positive");
  std::vector<double> r(w.empty() ? 0 : w.count());
  const double half_kappa = 0.5 * model.kappa;
  const FitnessPotential& vc = model.split.vc;
  const FitnessPotential& ve = model.split.ve;
  for (int i = w.left; i <= w.right; ++i) {
    const double p = prev[i];
    const double x = cur[i];
    const double gap_up = cur[i + 1] - x;
    const double gap_dn = x - cur[i - 1];
    if (!(gap_up > 0.0) || !(gap_dn > 0.0)) {
      throw std::domain_error("residual_split: candidate map left the feasible region");
    }
    if (!(p > 0.0) || !(p < 1.0)) {
      throw std::domain_error("residual_split: previous map not interior on the window");
    }
    // 1/gap_up - 1/(1-p) and 1/p - 1/gap_dn, fused as in residual_euler.
    const double up_pair = ((x - p) + (1.0 - cur[i + 1])) / (gap_up * (1.0 - p));
    const double dn_pair = ((x - p) - cur[i - 1]) / (p * gap_dn);
    r[i - w.left] = (x - p) / (tau * p * (1.0 - p)) + half_kappa * (up_pair + dn_pair) +
                    vc.slope(x) - ve.slope(p);
  }
  return r;
}

/// Analytic Jacobian of the chosen residual with respect to the active
/// unknowns, as a tridiagonal matrix over the window.  The split variant is
/// symmetric positive definite (it is 1/h times the Hessian of the convex
/// step objective); the euler variant additionally carries the derivative
/// of the mobility and repulsion terms.
inline Tridiagonal jacobian(std::span<const double> prev, std::span<const double> cur,
                            const ModelSpec& model, double tau, ActiveWindow w,
                            Scheme scheme) {
  if (!(tau > 0.0)) throw std::invalid_argument("jacobian: tau must be positive");
  Tridiagonal J(w.empty() ? 0 : static_cast<std::size_t>(w.count()));
  const double half_kappa = 0.5 * model.kappa;
  for (int i = w.left; i <= w.right; ++i) {
    const int k = i - w.left;
    const double x = cur[i];
    const double gap_up = cur[i + 1] - x;
    const double gap_dn = x - cur[i - 1];
    if (!(gap_up > 0.0) || !(gap_dn > 0.0)) {
      throw std::domain_error("jacobian: candidate map left the feasible region");
    }
    const double gap_terms = half_kappa * (1.0 / (gap_up * gap_up) + 1.0 / (gap_dn * gap_dn));
    if (scheme == Scheme::split) {
      const double p = prev[i];
      if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("jacobian: previous map not interior on the window");
      }
      J.diag[k] = 1.0 / (tau * p * (1.0 - p)) + gap_terms + model.split.vc.curvature(x);
    } else {
      if (!(x > 0.0) || !(x < 1.0)) {
        throw std::domain_error("jacobian: candidate map left the feasible region");
      }
      const double mob = x * (1.0 - x);
      J.diag[k] = 1.0 / (tau * mob) - (x - prev[i]) * (1.0 - 2.0 * x) / (tau * mob * mob) +
                  gap_terms -
                  half_kappa * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) +
                  model.potential.curvature(x);
    }
    if (k > 0) J.lower[k - 1] = -half_kappa / (gap_dn * gap_dn);
    if (i < w.right) J.upper[k] = -half_kappa / (gap_up * gap_up);
  }
  return J;
}

/// Convex objective minimized by one splitting step.  y holds the candidate
/// values of the active nodes only; frozen neighbors left of w.left and
/// right of w.right come from prev.  Returns +infinity when the candidate
/// violates the strict ordering, so coarse searches can reject infeasible
/// points.  The gradient with respect to y equals h * residual_split.
inline double split_objective(const TransportMap& prev, std::span<const double> y,
                              const ModelSpec& model, double tau, ActiveWindow w) {
  if (static_cast<int>(y.size()) != w.count()) {
    throw std::invalid_argument("split_objective: candidate size does not match window");
  }
  const double h = prev.grid().h;
  const double half_kappa = 0.5 * model.kappa;
  const FitnessPotential& vc = model.split.vc;
  const FitnessPotential& ve = model.split.ve;
  const auto p = prev.values();

  double acc = 0.0;
  double below = p[w.left - 1];
  for (int k = 0; k <= w.count(); ++k) {
    const double value = (k < w.count()) ? y[k] : p[w.right + 1];
    const double gap = value - below;
    if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
    acc -= half_kappa * h * std::log(gap / h);
    below = value;
  }
  for (int k = 0; k < w.count(); ++k) {
    const int i = w.left + k;
    const double pi = p[i];
    const double mobility = pi * (1.0 - pi);
    const double diff = y[k] - pi;
    acc += (h / (2.0 * tau)) * diff * diff / mobility;
    acc += half_kappa * h * ((1.0 - 2.0 * pi) / mobility) * y[k];
    acc += h * (vc.value(y[k]) - ve.slope(pi) * y[k]);
  }
  return acc;
}

// Convenience overloads taking whole maps.

inline std::vector<double> residual_euler(const TransportMap& prev, const TransportMap& cur,
                                          const ModelSpec& model, double tau,
                                          ActiveWindow w) {
  return residual_euler(prev.values(), cur.values(), model, tau, w);
}

inline std::vector<double> residual_split(const TransportMap& prev, const TransportMap& cur,
                                          const ModelSpec& model, double tau,
                                          ActiveWindow w) {
  return residual_split(prev.values(), cur.values(), model, tau, w);
}

inline Tridiagonal jacobian(const TransportMap& prev, const TransportMap& cur,
                            const ModelSpec& model, double tau, ActiveWindow w,
                            Scheme scheme) {
  return jacobian(prev.values(), cur.values(), model, tau, w, scheme);
}

}  // namespace kimura
