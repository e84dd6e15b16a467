#include "kdiff/entropy.hpp"

#include "kdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kdiff {

double entropy(const ComplexGrid &x, const BinaryMask &m, int bins) {
  if (bins < 2) throw Error("masks-weights", "L", "need at least two bins");
  require_shape(x.shape(), m.shape(), "masks-weights", "m");
  require_finite(x, "masks-weights", "x");

  std::vector<double> mags;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (m[i]) mags.push_back(std::abs(x[i]));
  if (mags.empty()) throw Error("masks-weights", "m", "mask has an empty support");

  const auto [lo_it, hi_it] = std::minmax_element(mags.begin(), mags.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  if (span == 0.0) return 0.0;

  std::vector<std::size_t> hist(static_cast<std::size_t>(bins), 0);
  for (double v : mags) {
    auto b = static_cast<std::size_t>(std::floor((v - lo) / span * bins));
    hist[std::min(b, hist.size() - 1)]++;
  }

  const double n = static_cast<double>(mags.size());
  double e = 0.0;
  for (std::size_t count : hist) {
    if (count == 0) continue; // 0 log 0 := 0
    const double p = static_cast<double>(count) / n;
    e -= p * std::log2(p);
  }
  return e;
}

EntropyReport entropy_report(const ComplexGrid &x, const VirtualMask &m1, const VirtualMask &m2, int bins) {
  EntropyReport rep;
  rep.bins = bins;
  rep.e1 = entropy(x, m1.bits, bins);
  rep.e2 = entropy(x, m2.bits, bins);
  rep.total = rep.e1 + rep.e2;
  rep.relationship = relationship(m1, m2);
  return rep;
}

} // namespace kdiff
