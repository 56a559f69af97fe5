#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "kimura/density.hpp"
#include "kimura/potential.hpp"
#include "kimura/quadrature.hpp"

namespace kimura {

/// Probability that an allele currently at frequency x eventually takes over
/// the whole population:
///
///   theta(x) = Int_0^x exp((2/kappa) V(y)) dy / Int_0^1 exp((2/kappa) V(y)) dy.
///
/// theta is the harmonic function of the dynamics with theta(0) = 0 and
/// theta(1) = 1; it weights the initial density in the jump-location
/// formula.  The normalizing integral is computed once at construction.
class FixationProbability {
 public:
  FixationProbability(const FitnessPotential& v, double kappa) {
    if (!(kappa > 0.0)) {
      throw std::invalid_argument("FixationProbability: kappa must be positive");
    }
    weight_ = [v, kappa](double y) { return std::exp((2.0 / kappa) * v.value(y)); };
    normalizer_ = integrate(weight_, 0.0, 1.0, 1e-12);
  }

  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return integrate(weight_, 0.0, x, 1e-11) / normalizer_;
  }

 private:
  std::function<double(double)> weight_;
  double normalizer_;
};

inline double fixation_probability(const FitnessPotential& v, double kappa, double x) {
  return FixationProbability(v, kappa)(x);
}

/// Mass fraction that ends up fixed at allele frequency 0 in the long-time
/// limit.  The limiting transport map is a step from 0 to 1 at this mass
/// coordinate, so the value doubles as the predicted jump location:
///
///   eta0 = 1 - Int_0^1 f0(x) theta(x) dx.
inline double theoretical_jump(const InitialDensity& f0, const FitnessPotential& v,
                               double kappa) {
  const FixationProbability theta(v, kappa);
  const double absorbed = integrate([&](double x) { return f0(x) * theta(x); }, 0.0, 1.0,
                                    1e-9, f0.breakpoints());
  return 1.0 - absorbed;
}

}  // namespace kimura
