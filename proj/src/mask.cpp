#include "kdiff/mask.hpp"

#include "kdiff/error.hpp"
#include "kdiff/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace kdiff {

const char *to_string(MaskShape s) {
  switch (s) {
  case MaskShape::Circle: return "circle";
  case MaskShape::Radial: return "radial";
  case MaskShape::Random: return "random";
  }
  return "?";
}

const char *to_string(MaskRelation r) {
  switch (r) {
  case MaskRelation::Contained: return "contained";
  case MaskRelation::Intersected: return "intersected";
  case MaskRelation::Disjoint: return "disjoint";
  }
  return "?";
}

namespace {

BinaryMask disc(Shape shape, double diameter) {
  BinaryMask m(shape);
  const double r0 = static_cast<double>(shape.center_row());
  const double c0 = static_cast<double>(shape.center_col());
  const double radius = diameter / 2.0;
  for (std::size_t r = 0; r < shape.height; ++r)
    for (std::size_t c = 0; c < shape.width; ++c)
      m.set(r, c, std::hypot(static_cast<double>(r) - r0, static_cast<double>(c) - c0) < radius);
  return m;
}

} // namespace

VirtualMask make_circle_mask(Shape shape, double diameter) {
  if (!(diameter > 0.0)) throw Error("masks-weights", "a", "circle diameter must be positive");
  VirtualMask m;
  m.kind = MaskShape::Circle;
  m.diameter = diameter;
  m.bits = disc(shape, diameter);
  return m;
}

VirtualMask make_radial_mask(Shape shape, int spokes, double spoke_width, double inner_diameter,
                             double spoke_length) {
  if (spokes < 1) throw Error("masks-weights", "spokes", "need at least one spoke");
  if (!(spoke_width > 0.0)) throw Error("masks-weights", "spoke_width", "must be positive");
  if (!(inner_diameter >= 0.0)) throw Error("masks-weights", "inner_diameter", "must be >= 0");
  if (!(spoke_length > 0.0)) throw Error("masks-weights", "spoke_length", "must be positive");

  VirtualMask m;
  m.kind = MaskShape::Radial;
  m.diameter = inner_diameter;
  m.spokes = spokes;
  m.spoke_width = spoke_width;
  m.spoke_length = spoke_length;
  m.bits = disc(shape, inner_diameter);

  const double r0 = static_cast<double>(shape.center_row());
  const double c0 = static_cast<double>(shape.center_col());
  for (int k = 0; k < spokes; ++k) {
    const double theta = std::numbers::pi * k / spokes;
    // Direction in (col, row) coordinates; angle 0 runs along a row.
    const double dc = std::cos(theta), dr = std::sin(theta);
    for (std::size_t r = 0; r < shape.height; ++r) {
      const double y = static_cast<double>(r) - r0;
      for (std::size_t c = 0; c < shape.width; ++c) {
        const double x = static_cast<double>(c) - c0;
        const double along = x * dc + y * dr;
        const double across = -x * dr + y * dc;
        if (std::abs(across) < spoke_width / 2.0 && std::abs(along) < spoke_length / 2.0)
          m.bits.set(r, c, true);
      }
    }
  }
  return m;
}

VirtualMask make_random_mask(Shape shape, double coverage, int block, std::uint64_t seed,
                             const BinaryMask *exclude) {
  if (!(coverage > 0.0 && coverage < 1.0)) throw Error("masks-weights", "coverage", "must lie in (0, 1)");
  if (block < 1) throw Error("masks-weights", "block", "must be >= 1");
  if (exclude) require_shape(shape, exclude->shape(), "masks-weights", "exclude");

  const std::size_t b = static_cast<std::size_t>(block);
  const std::size_t tile_rows = (shape.height + b - 1) / b;
  const std::size_t tile_cols = (shape.width + b - 1) / b;

  auto tile_free = [&](std::size_t tr, std::size_t tc) {
    if (!exclude) return true;
    for (std::size_t r = tr * b; r < std::min(shape.height, (tr + 1) * b); ++r)
      for (std::size_t c = tc * b; c < std::min(shape.width, (tc + 1) * b); ++c)
        if ((*exclude)(r, c)) return false;
    return true;
  };

  std::vector<std::size_t> tiles;
  for (std::size_t t = 0; t < tile_rows * tile_cols; ++t)
    if (tile_free(t / tile_cols, t % tile_cols)) tiles.push_back(t);

  Rng rng = derive_stream(seed, {0x6d61736bULL});
  VirtualMask m;
  m.kind = MaskShape::Random;
  m.coverage = coverage;
  m.block = block;
  m.seed = seed;
  m.bits = BinaryMask(shape);
  const double target = coverage * static_cast<double>(shape.size());
  std::size_t population = 0;
  // Partial Fisher-Yates: tile i is drawn uniformly from the not-yet-drawn tail.
  for (std::size_t i = 0; i < tiles.size() && static_cast<double>(population) < target; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, tiles.size() - 1);
    std::swap(tiles[i], tiles[pick(rng)]);
    const std::size_t tr = tiles[i] / tile_cols, tc = tiles[i] % tile_cols;
    for (std::size_t r = tr * b; r < std::min(shape.height, (tr + 1) * b); ++r)
      for (std::size_t c = tc * b; c < std::min(shape.width, (tc + 1) * b); ++c) {
        m.bits.set(r, c, true);
        ++population;
      }
  }
  if (static_cast<double>(population) < target)
    throw Error("masks-weights", "coverage", "not enough free tiles to reach the requested coverage");
  return m;
}

VirtualMask complement(const VirtualMask &m) {
  VirtualMask out = m;
  out.complemented = !m.complemented;
  out.bits = m.bits.complement();
  return out;
}

ComplexGrid apply_mask(const ComplexGrid &x, const BinaryMask &m) {
  require_shape(x.shape(), m.shape(), "masks-weights", "mask");
  ComplexGrid out = x;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!m[i]) out[i] = 0.0;
  return out;
}

MaskRelation relationship(const BinaryMask &m1, const BinaryMask &m2) {
  require_shape(m1.shape(), m2.shape(), "masks-weights", "m2");
  bool any_common = false, only1 = false, only2 = false;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const bool a = m1[i], b = m2[i];
    any_common |= a && b;
    only1 |= a && !b;
    only2 |= b && !a;
  }
  if (!only1 || !only2) return MaskRelation::Contained;
  return any_common ? MaskRelation::Intersected : MaskRelation::Disjoint;
}

} // namespace kdiff
