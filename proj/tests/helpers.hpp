#pragma once

#include "kdiff/grid.hpp"
#include "kdiff/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace testutil {

using kdiff::cdouble;
using kdiff::ComplexGrid;
using kdiff::Domain;
using kdiff::Shape;

inline ComplexGrid random_grid(Shape shape, Domain d, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  ComplexGrid g(shape, d);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = {u(rng), u(rng)};
  return g;
}

inline double max_abs_diff(const ComplexGrid &a, const ComplexGrid &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double l2(const ComplexGrid &a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i]);
  return std::sqrt(s);
}

// Direct O(N^2) centered orthonormal DFT: frequency index k maps to k - center.
inline ComplexGrid naive_centered_dft(const ComplexGrid &img, int sign) {
  const std::size_t h = img.height(), w = img.width();
  const double ch = static_cast<double>(h / 2), cw = static_cast<double>(w / 2);
  ComplexGrid out(img.shape(), sign < 0 ? Domain::KSpace : Domain::Image);
  for (std::size_t u = 0; u < h; ++u)
    for (std::size_t v = 0; v < w; ++v) {
      cdouble acc = 0.0;
      for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c) {
          const double phase = sign * 2.0 * std::numbers::pi *
                               ((u - ch) * (r - ch) / static_cast<double>(h) + (v - cw) * (c - cw) / static_cast<double>(w));
          acc += img(r, c) * std::polar(1.0, phase);
        }
      out(u, v) = acc / std::sqrt(static_cast<double>(h * w));
    }
  return out;
}

} // namespace testutil
