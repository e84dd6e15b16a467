#include "kdiff/weight.hpp"

#include "kdiff/error.hpp"

#include <cmath>

namespace kdiff {

WeightMatrix make_weight(Shape shape, double r, double p, double eps) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error("masks-weights", "r", "must be positive and finite");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error("masks-weights", "eps", "must be positive and finite");
  // The center offset is zero, so a negative exponent has no finite value there.
  if (!(p >= 0.0) || !std::isfinite(p)) throw Error("masks-weights", "p", "must be finite and >= 0");

  WeightMatrix w{shape, r, p, eps, RealGrid(shape)};
  const double u0 = static_cast<double>(shape.center_row());
  const double v0 = static_cast<double>(shape.center_col());
  for (std::size_t u = 0; u < shape.height; ++u) {
    const double du = static_cast<double>(u) - u0;
    for (std::size_t v = 0; v < shape.width; ++v) {
      const double dv = static_cast<double>(v) - v0;
      const double raw = std::pow(r * du * du + r * dv * dv, p);
      w.values(u, v) = std::max(eps, raw);
    }
  }
  return w;
}

ComplexGrid apply_weight(const ComplexGrid &x, const WeightMatrix &w) {
  require_shape(x.shape(), w.values.shape(), "masks-weights", "w");
  ComplexGrid out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w.values[i];
  return out;
}

ComplexGrid unweight(const ComplexGrid &x, const WeightMatrix &w) {
  require_shape(x.shape(), w.values.shape(), "masks-weights", "w");
  ComplexGrid out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= w.values[i];
  return out;
}

} // namespace kdiff
