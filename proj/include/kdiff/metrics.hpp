#pragma once

#include "kdiff/grid.hpp"

#include <optional>

namespace kdiff {

struct SsimParams {
  int window = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// 10*log10(data_range^2 / MSE); +infinity when the grids are identical.
double psnr(const RealGrid &ref, const RealGrid &test, double data_range);

/// Mean SSIM over every valid (fully inside) window position.
double ssim(const RealGrid &ref, const RealGrid &test, double data_range, const SsimParams &params = {});

struct MetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double data_range = 0.0;
};

/// Both metrics; data_range defaults to max(ref).
MetricReport evaluate(const RealGrid &ref, const RealGrid &test, std::optional<double> data_range = std::nullopt);

} // namespace kdiff
