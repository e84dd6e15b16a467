#pragma once

#include "kdiff/grid.hpp"

#include <cstdint>
#include <limits>
#include <optional>

namespace kdiff {

enum class MaskShape { Circle, Radial, Random };

const char *to_string(MaskShape s);

/// Virtual binary mask localizing a detail model to a k-space sub-region.
/// Geometry parameters are kept alongside the bits for reporting.
struct VirtualMask {
  MaskShape kind = MaskShape::Circle;
  double diameter = 0.0;       // Circle; inner disc for Radial
  int spokes = 0;              // Radial
  double spoke_width = 0.0;    // Radial
  double spoke_length = 0.0;   // Radial, infinity for full-grid spokes
  double coverage = 0.0;       // Random
  int block = 0;               // Random
  std::uint64_t seed = 0;      // Random
  bool complemented = false;
  BinaryMask bits;

  const Shape &shape() const { return bits.shape(); }
};

/// 1 where the Euclidean distance to the grid center is strictly below a/2.
VirtualMask make_circle_mask(Shape shape, double diameter);

/// Inner disc of diameter inner_diameter united with `spokes` equiangular
/// lines through the center (angles k*pi/spokes). A pixel belongs to a spoke
/// when its perpendicular distance to the line is < spoke_width/2 and its
/// distance along the line is < spoke_length/2.
VirtualMask make_radial_mask(Shape shape, int spokes, double spoke_width, double inner_diameter,
                             double spoke_length = std::numeric_limits<double>::infinity());

/// Square tiles of side `block` (edge tiles clipped) are drawn uniformly
/// without replacement until at least `coverage` of all pixels are set.
/// Tiles touching `exclude` are never drawn, which yields disjoint pairs.
VirtualMask make_random_mask(Shape shape, double coverage, int block, std::uint64_t seed,
                             const BinaryMask *exclude = nullptr);

/// Swap the 1- and 0-supports (keeps high frequencies instead of the center).
VirtualMask complement(const VirtualMask &m);

ComplexGrid apply_mask(const ComplexGrid &x, const BinaryMask &m);

enum class MaskRelation { Contained, Intersected, Disjoint };

const char *to_string(MaskRelation r);

/// Set relation between the two 1-supports. Contained when either support
/// includes the other, Disjoint when they share no pixel.
MaskRelation relationship(const BinaryMask &m1, const BinaryMask &m2);
inline MaskRelation relationship(const VirtualMask &m1, const VirtualMask &m2) {
  return relationship(m1.bits, m2.bits);
}

} // namespace kdiff
