#pragma once

// Slow, independent references the production code is checked against:
// derivative-free minimization of the step objective, finite-difference
// Jacobians, finite-difference directional derivatives, and random feasible
// maps.  Nothing here shares algorithmic structure with the solver.

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "kimura/scheme.hpp"
#include "kimura/transport_map.hpp"

namespace oracles {

/// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_min(const F& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Minimizes the splitting-step objective by cyclic coordinate descent with
/// golden-section line searches.  Each coordinate is confined between its
/// current neighbors, where the objective (restricted to that line) is
/// convex, hence unimodal.  Returns full node values including endpoints.
inline std::vector<double> minimize_split_objective(const kimura::TransportMap& prev,
                                                    const kimura::ModelSpec& model,
                                                    double tau, kimura::ActiveWindow w) {
  const auto p = prev.values();
  std::vector<double> full(p.begin(), p.end());
  std::vector<double> y(full.begin() + w.left, full.begin() + w.right + 1);
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double moved = 0.0;
    for (int k = 0; k < w.count(); ++k) {
      const double lo = (k == 0) ? full[w.left - 1] : y[k - 1];
      const double hi = (k == w.count() - 1) ? full[w.right + 1] : y[k + 1];
      const double margin = 1e-12 + 1e-9 * (hi - lo);
      const auto line = [&](double value) {
        std::vector<double> trial(y);
        trial[k] = value;
        return kimura::split_objective(prev, trial, model, tau, w);
      };
      const double best = golden_min(line, lo + margin, hi - margin, 1e-11);
      moved = std::max(moved, std::abs(best - y[k]));
      y[k] = best;
    }
    if (moved < 1e-10) break;
  }
  for (int k = 0; k < w.count(); ++k) full[w.left + k] = y[k];
  return full;
}

/// Central-difference Jacobian of either residual, column by column.
inline kimura::Tridiagonal fd_jacobian(std::span<const double> prev,
                                       std::span<const double> cur,
                                       const kimura::ModelSpec& model, double tau,
                                       kimura::ActiveWindow w, kimura::Scheme scheme,
                                       double eps) {
  const auto eval = [&](const std::vector<double>& vals) {
    return scheme == kimura::Scheme::euler
               ? kimura::residual_euler(prev, vals, model, tau, w)
               : kimura::residual_split(prev, vals, model, tau, w);
  };
  kimura::Tridiagonal J(static_cast<std::size_t>(w.count()));
  std::vector<double> base(cur.begin(), cur.end());
  for (int j = w.left; j <= w.right; ++j) {
    std::vector<double> plus(base), minus(base);
    plus[j] += eps;
    minus[j] -= eps;
    const auto rp = eval(plus);
    const auto rm = eval(minus);
    const int col = j - w.left;
    for (int i = std::max(w.left, j - 1); i <= std::min(w.right, j + 1); ++i) {
      const int row = i - w.left;
      const double d = (rp[row] - rm[row]) / (2.0 * eps);
      if (row == col) {
        J.diag[row] = d;
      } else if (row == col + 1) {
        J.lower[col] = d;
      } else {
        J.upper[row] = d;
      }
    }
  }
  return J;
}

/// Second derivative of J along a direction, 3-point stencil.
template <class F>
double fd_second_directional(const F& f, std::span<const double> x,
                             std::span<const double> u, double eps) {
  std::vector<double> p(x.begin(), x.end()), m(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] += eps * u[i];
    m[i] -= eps * u[i];
  }
  return (f(p) - 2.0 * f(std::vector<double>(x.begin(), x.end())) + f(m)) / (eps * eps);
}

/// Third derivative of J along a direction, 5-point stencil.
template <class F>
double fd_third_directional(const F& f, std::span<const double> x,
                            std::span<const double> u, double eps) {
  const auto at = [&](double s) {
    std::vector<double> v(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] += s * u[i];
    return f(v);
  };
  return (at(2.0 * eps) - 2.0 * at(eps) + 2.0 * at(-eps) - at(-2.0 * eps)) /
         (2.0 * eps * eps * eps);
}

/// Random strictly increasing map with all gaps bounded below by roughly
/// 0.2 / N, endpoints pinned at 0 and 1.
inline std::vector<double> random_increasing_values(std::mt19937& gen, int n) {
  std::uniform_real_distribution<double> dist(0.2, 1.0);
  std::vector<double> inc(n);
  double total = 0.0;
  for (double& d : inc) {
    d = dist(gen);
    total += d;
  }
  std::vector<double> vals(n + 1);
  vals[0] = 0.0;
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    acc += inc[i - 1];
    vals[i] = acc / total;
  }
  vals[n] = 1.0;
  return vals;
}

inline kimura::TransportMap random_map(std::mt19937& gen, const kimura::MassGrid& grid) {
  return kimura::TransportMap(grid, random_increasing_values(gen, grid.N));
}

}  // namespace oracles
