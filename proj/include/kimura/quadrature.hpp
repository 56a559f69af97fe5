#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace kimura {

namespace detail {

/// Bisection with an absolute error budget on top of Boost's non-adaptive
/// 31-point Kronrod panel.  Boost's own adaptive driver takes a relative
/// tolerance, which stalls on sub-eps requests for integrals of tiny
/// magnitude (common here: CDF increments near 0).  The panel error Boost
/// reports is for the width-normalized integrand, so on panels narrower
/// than 2 it bounds the true panel error; it also never falls below a few
/// eps times the normalized L1 norm, and a panel sitting at that floor is
/// accepted as converged regardless of the remaining budget.
template <typename F>
double kronrod_bisect(const F& f, double a, double b, double budget, int depth) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  double l1 = 0.0;
  const double value = rule::integrate(f, a, b, 0, 0.0, &err, &l1);
  const double half_width = 0.5 * (b - a);
  const double noise_floor =
      16.0 * std::numeric_limits<double>::epsilon() * (l1 / half_width);
  if (err <= budget || err <= noise_floor) return value;
  if (depth <= 0) throw std::runtime_error("integrate: requested accuracy not reached");
  const double mid = a + half_width;
  return kronrod_bisect(f, a, mid, 0.5 * budget, depth - 1) +
         kronrod_bisect(f, mid, b, 0.5 * budget, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of f over [a, b] with an absolute error
/// target.  Interior breakpoints split the range so piecewise integrands
/// (indicator and clipped densities) are integrated segment by segment where
/// they are smooth; the quadrature nodes never touch segment endpoints, so
/// one-sided definitions at a breakpoint are harmless.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol,
                 std::span<const double> breakpoints = {}) {
  if (!(b >= a)) throw std::invalid_argument("integrate: inverted range");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");
  if (a == b) return 0.0;

  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    if (cuts[j + 1] == cuts[j]) continue;
    const double budget = abs_tol * (cuts[j + 1] - cuts[j]) / (b - a);
    total += detail::kronrod_bisect(f, cuts[j], cuts[j + 1], budget, 15);
  }
  if (!std::isfinite(total)) {
    throw std::runtime_error("integrate: integral is not finite");
  }
  return total;
}

}  // namespace kimura
