#pragma once

#include <stdexcept>
#include <utility>

#include "kimura/potential.hpp"

namespace kimura {

/// Model data for the drift-diffusion dynamics: diffusion rate kappa plus
/// the fitness potential together with its ready-made convex split.
struct ModelSpec {
  double kappa;
  FitnessPotential potential;
  ConvexSplit split;

  ModelSpec(double kappa_in, FitnessPotential v)
      : kappa(kappa_in), potential(std::move(v)), split(convex_split(potential)) {
    if (!(kappa > 0.0)) throw std::invalid_argument("ModelSpec: kappa must be positive");
  }

  static ModelSpec diffusion(double kappa_in) {
    return ModelSpec(kappa_in, FitnessPotential::zero());
  }

  bool is_diffusion() const { return potential.is_zero(); }
};

}  // namespace kimura
