#include "kdiff/sampling.hpp"

#include "kdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace kdiff {

const char *to_string(PatternKind k) {
  switch (k) {
  case PatternKind::Poisson2D: return "poisson";
  case PatternKind::Random2D: return "random";
  case PatternKind::Uniform: return "uniform";
  }
  return "?";
}

double achieved_acceleration(const BinaryMask &mask) {
  const std::size_t n = mask.popcount();
  if (n == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(mask.size()) / static_cast<double>(n);
}

namespace {

constexpr const char *kModule = "undersampling";

struct AcsBlock {
  std::size_t r0 = 0, c0 = 0, side = 0;
  bool contains(std::size_t r, std::size_t c) const {
    return side > 0 && r >= r0 && r < r0 + side && c >= c0 && c < c0 + side;
  }
};

AcsBlock acs_block(Shape shape, int acs) {
  if (acs < 0) throw Error(kModule, "acs", "must be >= 0");
  const auto side = static_cast<std::size_t>(acs);
  if (side > std::min(shape.height, shape.width))
    throw Error(kModule, "acs", "block of side " + std::to_string(acs) + " does not fit " + to_string(shape));
  return {shape.center_row() - side / 2, shape.center_col() - side / 2, side};
}

void stamp_acs(BinaryMask &m, const AcsBlock &acs) {
  for (std::size_t r = acs.r0; r < acs.r0 + acs.side; ++r)
    for (std::size_t c = acs.c0; c < acs.c0 + acs.side; ++c) m.set(r, c, true);
}

double relative_miss(double achieved, double target) { return std::abs(achieved / target - 1.0); }

void finish(SamplingPattern &pat) {
  pat.achieved_r = achieved_acceleration(pat.mask);
  pat.within_tolerance = relative_miss(pat.achieved_r, pat.target_r) <= kAccelerationTolerance + 1e-12;
}

void require_r(double r, double min_allowed, bool strict) {
  if (!std::isfinite(r) || (strict ? !(r > min_allowed) : !(r >= min_allowed)))
    throw Error(kModule, "R", std::string("acceleration must be ") + (strict ? "> " : ">= ") +
                                  std::to_string(min_allowed));
}

// Line indices (rows, or columns when transposed) for a possibly fractional stride.
std::vector<std::size_t> uniform_lines(std::size_t extent, double stride, int offset) {
  std::vector<std::size_t> lines;
  for (std::size_t k = 0;; ++k) {
    const double pos = offset + static_cast<double>(k) * stride;
    const auto line = static_cast<std::size_t>(std::floor(pos + 0.5));
    if (line >= extent) break;
    if (lines.empty() || lines.back() != line) lines.push_back(line);
  }
  return lines;
}

BinaryMask uniform_mask(Shape shape, double stride, int offset, bool transpose, const AcsBlock &acs) {
  BinaryMask m(shape);
  const std::size_t extent = transpose ? shape.width : shape.height;
  for (std::size_t line : uniform_lines(extent, stride, offset)) {
    if (transpose)
      for (std::size_t r = 0; r < shape.height; ++r) m.set(r, line, true);
    else
      for (std::size_t c = 0; c < shape.width; ++c) m.set(line, c, true);
  }
  stamp_acs(m, acs);
  return m;
}

} // namespace

SamplingPattern gen_uniform(Shape shape, double r, int acs, int offset, bool transpose) {
  require_r(r, 1.0, true);
  const AcsBlock block = acs_block(shape, acs);
  const std::size_t extent = transpose ? shape.width : shape.height;
  if (offset < 0 || static_cast<std::size_t>(offset) >= extent)
    throw Error(kModule, "offset", "must lie in [0, " + std::to_string(extent) + ")");

  SamplingPattern pat;
  pat.kind = PatternKind::Uniform;
  pat.target_r = r;
  pat.acs = acs;
  pat.stride = std::ceil(r);
  pat.mask = uniform_mask(shape, pat.stride, offset, transpose, block);
  finish(pat);
  if (pat.within_tolerance) return pat;

  // Stride adjustment: scan fractional strides and keep the closest achieved R,
  // preferring the stride nearest ceil(R) on ties.
  const double base = pat.stride;
  double best_miss = relative_miss(pat.achieved_r, r);
  double best_stride = base;
  constexpr double kStep = 1.0 / 64.0;
  for (double s = 1.0; s <= static_cast<double>(extent) + kStep / 2; s += kStep) {
    const double ach = achieved_acceleration(uniform_mask(shape, s, offset, transpose, block));
    const double miss = relative_miss(ach, r);
    if (miss < best_miss - 1e-15 ||
        (std::abs(miss - best_miss) <= 1e-15 && std::abs(s - base) < std::abs(best_stride - base))) {
      best_miss = miss;
      best_stride = s;
    }
  }
  pat.stride = best_stride;
  pat.mask = uniform_mask(shape, best_stride, offset, transpose, block);
  finish(pat);
  if (!pat.within_tolerance)
    pat.note = "no line stride reaches R within tolerance with acs=" + std::to_string(acs) + "; closest R=" +
               std::to_string(pat.achieved_r);
  return pat;
}

SamplingPattern gen_random2d(Shape shape, double r, int acs, std::uint64_t seed) {
  require_r(r, 1.0, false);
  const AcsBlock block = acs_block(shape, acs);

  SamplingPattern pat;
  pat.kind = PatternKind::Random2D;
  pat.target_r = r;
  pat.acs = acs;
  pat.seed = seed;
  pat.mask = BinaryMask(shape);

  const auto budget = static_cast<long long>(std::llround(static_cast<double>(shape.size()) / r));
  const auto forced = static_cast<long long>(block.side * block.side);
  if (forced > budget)
    throw Error(kModule, "acs", "acs block alone (" + std::to_string(forced) + " samples) exceeds the budget of " +
                                    std::to_string(budget) + " for R=" + std::to_string(r));
  stamp_acs(pat.mask, block);

  // One uniform score per pixel in raster order; the inclusion threshold is
  // the order statistic that yields exactly the remaining budget.
  Rng rng = derive_stream(seed, {0x72616e64ULL});
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<double, std::size_t>> scores;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const double u = unif(rng);
    if (!block.contains(i / shape.width, i % shape.width)) scores.emplace_back(u, i);
  }
  const auto extra = static_cast<std::size_t>(std::min<long long>(budget - forced, static_cast<long long>(scores.size())));
  std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(extra), scores.end());
  for (std::size_t k = 0; k < extra; ++k) pat.mask.set(scores[k].second, true);

  finish(pat);
  if (!pat.within_tolerance)
    throw Error(kModule, "R", "achieved R=" + std::to_string(pat.achieved_r) + " outside tolerance of target " +
                                  std::to_string(r));
  return pat;
}

double poisson_local_radius(Shape shape, std::size_t row, std::size_t col, double scale) {
  const double sigma_d = static_cast<double>(std::min(shape.height, shape.width)) / 6.0;
  const double dist = std::hypot(static_cast<double>(row) - static_cast<double>(shape.center_row()),
                                 static_cast<double>(col) - static_cast<double>(shape.center_col()));
  return scale * (1.0 + dist / sigma_d);
}

namespace {

struct Dart {
  int row, col;
  double radius;
};

std::vector<Dart> throw_darts(Shape shape, const std::vector<std::size_t> &order, double scale) {
  std::vector<Dart> accepted;
  for (std::size_t idx : order) {
    const auto row = static_cast<int>(idx / shape.width);
    const auto col = static_cast<int>(idx % shape.width);
    const double rp = poisson_local_radius(shape, static_cast<std::size_t>(row), static_cast<std::size_t>(col), scale);
    bool ok = true;
    for (const Dart &q : accepted) {
      const double lim = std::max(rp, q.radius);
      const double dr = row - q.row, dc = col - q.col;
      if (dr * dr + dc * dc < lim * lim) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back({row, col, rp});
  }
  return accepted;
}

} // namespace

SamplingPattern gen_poisson2d(Shape shape, double r, int acs, std::uint64_t seed) {
  require_r(r, 1.0, false);
  const AcsBlock block = acs_block(shape, acs);

  SamplingPattern pat;
  pat.kind = PatternKind::Poisson2D;
  pat.target_r = r;
  pat.acs = acs;
  pat.seed = seed;

  const double target = static_cast<double>(shape.size()) / r;
  const auto forced = static_cast<double>(block.side * block.side);
  if (forced > target * (1.0 + kAccelerationTolerance))
    throw Error(kModule, "acs", "acs block alone exceeds the sample budget for R=" + std::to_string(r));

  // Fixed dart order for every scale tried, so the result is a deterministic
  // function of (shape, R, acs, seed).
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < shape.size(); ++i)
    if (!block.contains(i / shape.width, i % shape.width)) order.push_back(i);
  Rng rng = derive_stream(seed, {0x706f6973ULL});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }

  auto count_at = [&](double scale) { return forced + static_cast<double>(throw_darts(shape, order, scale).size()); };

  double lo = 0.0;  // every candidate accepted
  double hi = 1.0;
  for (int i = 0; i < 40 && count_at(hi) > target; ++i) hi *= 2.0;

  double best_scale = hi;
  double best_miss = relative_miss(shape.size() / count_at(hi), r);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double count = count_at(mid);
    const double miss = relative_miss(static_cast<double>(shape.size()) / count, r);
    if (miss < best_miss) {
      best_miss = miss;
      best_scale = mid;
    }
    if (count == std::round(target) || hi - lo < 1e-9) break;
    if (count > target)
      lo = mid;
    else
      hi = mid;
  }

  pat.radius_scale = best_scale;
  pat.mask = BinaryMask(shape);
  stamp_acs(pat.mask, block);
  for (const Dart &d : throw_darts(shape, order, best_scale))
    pat.mask.set(static_cast<std::size_t>(d.row), static_cast<std::size_t>(d.col), true);
  finish(pat);
  if (!pat.within_tolerance)
    throw Error(kModule, "R", "radius bisection could not reach target " + std::to_string(r) +
                                  "; closest achieved R=" + std::to_string(pat.achieved_r));
  return pat;
}

Measurement apply_forward(const ComplexGrid &x, const SamplingPattern &pat, double noise_sd, Rng &rng) {
  require_shape(x.shape(), pat.shape(), kModule, "pattern");
  require_finite(x, kModule, "x");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw Error(kModule, "noise_sd", "must be finite and >= 0");

  Measurement meas{ComplexGrid(x.shape(), Domain::KSpace), pat, noise_sd};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    cdouble v = x[i];
    if (noise_sd > 0.0) {
      const double re = normal(rng);
      const double im = normal(rng);
      v += noise_sd * cdouble(re, im);
    }
    if (pat.mask[i]) meas.y[i] = v;
  }
  return meas;
}

} // namespace kdiff
