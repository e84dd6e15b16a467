#pragma once

#include "kdiff/grid.hpp"
#include "kdiff/rng.hpp"

#include <cstdint>
#include <string>

namespace kdiff {

enum class PatternKind { Poisson2D, Random2D, Uniform };

const char *to_string(PatternKind k);

/// Acceleration is total pixels over sampled pixels.
inline constexpr double kAccelerationTolerance = 0.05;

/// Undersampling pattern (the diagonal of the forward operator).
struct SamplingPattern {
  PatternKind kind = PatternKind::Random2D;
  BinaryMask mask;
  double target_r = 1.0;
  double achieved_r = 1.0;
  int acs = 0;
  std::uint64_t seed = 0;
  bool within_tolerance = true; // |achieved/target - 1| <= 5%
  double stride = 0.0;          // Uniform: line stride actually used
  double radius_scale = 0.0;    // Poisson2D: global radius scale found by bisection
  std::string note;             // why the tolerance was missed, if it was

  const Shape &shape() const { return mask.shape(); }
};

double achieved_acceleration(const BinaryMask &mask);

/// Rows (or columns with transpose) every ~ceil(R) lines from `offset`, plus
/// the acs x acs center block. The stride is widened or refined to a
/// fractional value when the acs block pushes acceleration out of tolerance;
/// if no stride reaches it the closest pattern is returned with
/// within_tolerance = false.
SamplingPattern gen_uniform(Shape shape, double r, int acs = 0, int offset = 0, bool transpose = false);

/// Pointwise i.i.d. uniform scores thresholded at the probability that hits
/// the target sample budget exactly (acs block forced on).
SamplingPattern gen_random2d(Shape shape, double r, int acs, std::uint64_t seed);

/// Local Poisson-disc radius at a pixel for a given global scale:
/// scale * (1 + distance_to_center / sigma_d), sigma_d = min(H, W) / 6.
double poisson_local_radius(Shape shape, std::size_t row, std::size_t col, double scale);

/// Variable-density Poisson-disc dart throwing. Two accepted non-acs samples p, q
/// are always at least max(radius(p), radius(q)) apart. The global scale is
/// bisected until the acceleration is within tolerance.
SamplingPattern gen_poisson2d(Shape shape, double r, int acs, std::uint64_t seed);

struct Measurement {
  ComplexGrid y;
  SamplingPattern pattern;
  double noise_sd = 0.0;
};

/// y = mask * (x + eta), eta with i.i.d. N(0, noise_sd^2) real components.
Measurement apply_forward(const ComplexGrid &x, const SamplingPattern &pat, double noise_sd, Rng &rng);

} // namespace kdiff
