#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kimura/polynomial.hpp"

namespace kimura {

/// Fitness potential V on [0, 1], specified through the polynomial V' and
/// normalized by V(0) = 0.  All derivatives up to the third are kept in
/// closed form; the solver needs V' and V'', the damped-Newton analysis V'''.
class FitnessPotential {
 public:
  explicit FitnessPotential(std::vector<double> vprime_coeffs)
      : vprime_(std::move(vprime_coeffs)),
        v_(vprime_.antiderivative()),
        vsecond_(vprime_.derivative()),
        vthird_(vsecond_.derivative()) {}

  /// V' identically zero: the purely diffusive model.
  static FitnessPotential zero() { return FitnessPotential(std::vector<double>{}); }

  double value(double x) const { return v_(x); }
  double slope(double x) const { return vprime_(x); }
  double curvature(double x) const { return vsecond_(x); }
  double third_derivative(double x) const { return vthird_(x); }

  bool is_zero() const { return vprime_.is_zero(); }

  const Polynomial& vprime() const { return vprime_; }
  const Polynomial& v() const { return v_; }

  /// sup of |V| over [0, 1].
  double sup_abs_value() const { return v_.max_abs_on(0.0, 1.0); }
  /// sup of |V'| over [0, 1].
  double sup_abs_slope() const { return vprime_.max_abs_on(0.0, 1.0); }

  bool convex_on_unit_interval() const { return vsecond_.min_on(0.0, 1.0) >= 0.0; }

 private:
  Polynomial vprime_;
  Polynomial v_;
  Polynomial vsecond_;
  Polynomial vthird_;
};

/// Difference-of-convex decomposition V = vc - ve with both parts convex on
/// [0, 1].  The stepping scheme treats vc implicitly and ve explicitly,
/// which turns each time step into an unconstrained convex minimization.
struct ConvexSplit {
  FitnessPotential vc;
  FitnessPotential ve;
};

/// Splits V into convex parts.  A convex V keeps everything in vc (ve = 0).
/// Otherwise the quadratic c x^2 / 2 with c = -min V'' on [0, 1] is moved
/// across the difference: vc = V + c x^2 / 2 has nonnegative curvature by
/// construction and ve = c x^2 / 2 is convex.  Linear terms always stay in
/// vc.
inline ConvexSplit convex_split(const FitnessPotential& v) {
  const double min_curvature = v.vprime().derivative().min_on(0.0, 1.0);
  if (!std::isfinite(min_curvature)) {
    throw std::invalid_argument("convex_split: potential curvature is unbounded on [0, 1]");
  }
  const double c = std::max(0.0, -min_curvature);
  if (c == 0.0) {
    return ConvexSplit{v, FitnessPotential::zero()};
  }
  std::vector<double> vc_coeffs = v.vprime().coefficients();
  if (vc_coeffs.size() < 2) vc_coeffs.resize(2, 0.0);
  vc_coeffs[1] += c;
  return ConvexSplit{FitnessPotential(std::move(vc_coeffs)),
                     FitnessPotential(std::vector<double>{0.0, c})};
}

/// Smallest sampled constant M with |vc'''| <= M (vc'')^(3/2) on [0, 1].
/// Returns 0 when vc''' vanishes identically (vc at most quadratic), in
/// which case the inequality holds trivially.  Sample points where vc'' is
/// numerically zero are skipped; the bound there is vacuous or unattainable
/// and callers may override the estimate.
inline double estimate_self_concordance_constant(const FitnessPotential& vc,
                                                 int samples = 1000) {
  if (vc.vprime().derivative().derivative().is_zero()) return 0.0;
  double m = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double x = static_cast<double>(k) / samples;
    const double curv = vc.curvature(x);
    if (curv > 1e-12) {
      m = std::max(m, std::abs(vc.third_derivative(x)) / std::pow(curv, 1.5));
    }
  }
  return m;
}

}  // namespace kimura
