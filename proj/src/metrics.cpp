#include "kdiff/metrics.hpp"

#include "kdiff/error.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace kdiff {

namespace {

constexpr const char *kModule = "metrics";

void check_pair(const RealGrid &ref, const RealGrid &test, double data_range) {
  require_shape(ref.shape(), test.shape(), kModule, "test");
  if (!(data_range > 0.0) || !std::isfinite(data_range))
    throw Error(kModule, "data_range", "must be positive and finite");
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double c = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - c;
    k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (auto &v : k) v /= sum;
  return k;
}

// Separable "valid" filtering: output is (H - n + 1) x (W - n + 1).
std::vector<double> filter_valid(const std::vector<double> &img, std::size_t h, std::size_t w,
                                 const std::vector<double> &k) {
  const std::size_t n = k.size();
  const std::size_t oh = h - n + 1, ow = w - n + 1;
  std::vector<double> rows(h * ow, 0.0);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += k[j] * img[r * w + c + j];
      rows[r * ow + c] = acc;
    }
  std::vector<double> out(oh * ow, 0.0);
  for (std::size_t r = 0; r < oh; ++r)
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += k[i] * rows[(r + i) * ow + c];
      out[r * ow + c] = acc;
    }
  return out;
}

} // namespace

double psnr(const RealGrid &ref, const RealGrid &test, double data_range) {
  check_pair(ref, test, data_range);
  double sse = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref[i] - test[i];
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(ref.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(data_range * data_range / mse);
}

double ssim(const RealGrid &ref, const RealGrid &test, double data_range, const SsimParams &params) {
  check_pair(ref, test, data_range);
  if (params.window < 1 || !(params.gaussian_sigma > 0.0)) throw Error(kModule, "window", "invalid window");
  const auto n = static_cast<std::size_t>(params.window);
  const std::size_t h = ref.height(), w = ref.width();
  if (h < n || w < n)
    throw Error(kModule, "shape", "grid " + to_string(ref.shape()) + " is smaller than the " +
                                      std::to_string(n) + "x" + std::to_string(n) + " window");

  const auto k = gaussian_kernel(params.window, params.gaussian_sigma);
  std::vector<double> x(ref.data().begin(), ref.data().end());
  std::vector<double> y(test.data().begin(), test.data().end());
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, h, w, k), my = filter_valid(y, h, w, k);
  const auto exx = filter_valid(xx, h, w, k), eyy = filter_valid(yy, h, w, k), exy = filter_valid(xy, h, w, k);

  const double c1 = (params.k1 * data_range) * (params.k1 * data_range);
  const double c2 = (params.k2 * data_range) * (params.k2 * data_range);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = exx[i] - mx[i] * mx[i];
    const double vy = eyy[i] - my[i] * my[i];
    const double cxy = exy[i] - mx[i] * my[i];
    const double num = (2.0 * (mx[i] * my[i]) + c1) * (2.0 * cxy + c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

MetricReport evaluate(const RealGrid &ref, const RealGrid &test, std::optional<double> data_range) {
  const double range = data_range.value_or(ref.max());
  return {psnr(ref, test, range), ssim(ref, test, range), range};
}

} // namespace kdiff
