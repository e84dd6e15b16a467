#pragma once

#include "kdiff/grid.hpp"

namespace kdiff {

/// Radial power-law k-space weighting used by the structure model.
///
/// value(u, v) = max(eps, (r*(u-u0)^2 + r*(v-v0)^2)^p), (u0, v0) the grid
/// center. Every entry is >= eps, so apply_weight is always invertible.
struct WeightMatrix {
  static constexpr double kDefaultR = 0.075;
  static constexpr double kDefaultP = 0.5;
  static constexpr double kDefaultEps = 1e-6;

  Shape shape;
  double r = kDefaultR;
  double p = kDefaultP;
  double eps = kDefaultEps;
  RealGrid values;
};

WeightMatrix make_weight(Shape shape, double r = WeightMatrix::kDefaultR,
                         double p = WeightMatrix::kDefaultP, double eps = WeightMatrix::kDefaultEps);

ComplexGrid apply_weight(const ComplexGrid &x, const WeightMatrix &w);
ComplexGrid unweight(const ComplexGrid &x, const WeightMatrix &w);

} // namespace kdiff
