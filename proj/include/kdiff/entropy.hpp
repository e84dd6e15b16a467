#pragma once

#include "kdiff/grid.hpp"
#include "kdiff/mask.hpp"

namespace kdiff {

inline constexpr int kDefaultEntropyBins = 256;

/// Shannon entropy (bits) of the magnitudes inside the mask support,
/// quantized into `bins` equal-width bins spanning [min, max].
double entropy(const ComplexGrid &x, const BinaryMask &m, int bins = kDefaultEntropyBins);

struct EntropyReport {
  double e1 = 0.0;
  double e2 = 0.0;
  double total = 0.0;
  int bins = kDefaultEntropyBins;
  MaskRelation relationship = MaskRelation::Contained;
};

EntropyReport entropy_report(const ComplexGrid &x, const VirtualMask &m1, const VirtualMask &m2,
                             int bins = kDefaultEntropyBins);

} // namespace kdiff
