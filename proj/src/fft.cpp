#include "kdiff/fft.hpp"

#include "kdiff/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace kdiff {

namespace {

// FFTW's planner is not thread-safe; execution with the new-array interface is.
// Plans are created once per (H, W, sign) with FFTW_UNALIGNED so any buffer works.
class PlanCache {
public:
  ~PlanCache() {
    for (auto &[key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t h, std::size_t w, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(h, w, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cdouble> in(h * w), out(h * w);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w),
                                      reinterpret_cast<fftw_complex *>(in.data()),
                                      reinterpret_cast<fftw_complex *>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache &plans() {
  static PlanCache cache;
  return cache;
}

// Forward: ifftshift -> DFT -> fftshift. Inverse uses the same shifts, so the
// centered element (floor(H/2), floor(W/2)) maps to DFT index 0 in both directions.
ComplexGrid centered_transform(const ComplexGrid &src, int sign, Domain out_domain) {
  const std::size_t h = src.height(), w = src.width();
  const std::size_t ch = h / 2, cw = w / 2;
  std::vector<cdouble> in(h * w), out(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t rr = (r + h - ch) % h;
    for (std::size_t c = 0; c < w; ++c) in[rr * w + (c + w - cw) % w] = src(r, c);
  }
  fftw_execute_dft(plans().get(h, w, sign), reinterpret_cast<fftw_complex *>(in.data()),
                   reinterpret_cast<fftw_complex *>(out.data()));

  const double scale = 1.0 / std::sqrt(static_cast<double>(h * w));
  ComplexGrid dst(src.shape(), out_domain);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t rr = (r + ch) % h;
    for (std::size_t c = 0; c < w; ++c) dst(rr, (c + cw) % w) = out[r * w + c] * scale;
  }
  return dst;
}

} // namespace

ComplexGrid fft2c(const ComplexGrid &img) {
  require_domain(img, Domain::Image, "kspace-core", "img");
  require_finite(img, "kspace-core", "img");
  return centered_transform(img, FFTW_FORWARD, Domain::KSpace);
}

ComplexGrid ifft2c(const ComplexGrid &ksp) {
  require_domain(ksp, Domain::KSpace, "kspace-core", "ksp");
  require_finite(ksp, "kspace-core", "ksp");
  return centered_transform(ksp, FFTW_BACKWARD, Domain::Image);
}

} // namespace kdiff
