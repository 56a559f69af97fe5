#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kimura/grid.hpp"

namespace kimura {

/// Discrete pseudo-inverse CDF sampled at the mass grid nodes: values()[i]
/// is the position in [0, 1] below which the mass fraction i h of the
/// population sits.  Endpoints are pinned to 0 and 1 and the sequence is
/// nondecreasing; mass fixed at an endpoint shows up as a run of equal
/// values there.
class TransportMap {
 public:
  TransportMap(MassGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.N + 1) {
      throw std::invalid_argument("TransportMap: value count does not match grid");
    }
    if (values_.front() != 0.0 || values_.back() != 1.0) {
      throw std::invalid_argument("TransportMap: endpoints must be exactly 0 and 1");
    }
    for (int i = 0; i < grid_.N; ++i) {
      // The negated comparison also rejects NaN.
      if (!(values_[i + 1] >= values_[i])) {
        throw std::invalid_argument("TransportMap: values must be nondecreasing");
      }
    }
  }

  /// The identity map, i.e. the uniform density's inverse CDF.
  static TransportMap identity(MassGrid grid) {
    std::vector<double> v(grid.N + 1);
    for (int i = 0; i <= grid.N; ++i) v[i] = grid.eta(i);
    v.front() = 0.0;
    v.back() = 1.0;
    return TransportMap(grid, std::move(v));
  }

  const MassGrid& grid() const { return grid_; }
  int size() const { return grid_.N + 1; }
  double operator[](int i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::vector<double> take_values() && { return std::move(values_); }

 private:
  MassGrid grid_;
  std::vector<double> values_;
};

}  // namespace kimura
