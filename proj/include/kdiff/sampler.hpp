#pragma once

#include "kdiff/grid.hpp"
#include "kdiff/rng.hpp"
#include "kdiff/sampling.hpp"
#include "kdiff/score.hpp"

#include <optional>

namespace kdiff {

// Reverse-diffusion predictor, VE discretization:
//   x' = x + (s_hi^2 - s_lo^2) * score(x, s_hi) + sqrt(s_hi^2 - s_lo^2) * z
// The overload taking `z` is the deterministic core (pass zeros to pin noise).
ComplexGrid predictor_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma_lo, double sigma_hi,
                           const ComplexGrid &z);
ComplexGrid predictor_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma_lo, double sigma_hi,
                           Rng &rng);

struct CorrectorParams {
  static constexpr double kDefaultSnr = 0.16;
  static constexpr double kDefaultStepFloor = 1e-12;

  double snr = kDefaultSnr;
  double step_floor = kDefaultStepFloor;
  std::optional<double> forced_step; // bypasses the SNR rule
};

/// Remembers the last step size computed from a nonzero score.
struct CorrectorState {
  std::optional<double> last_step;
};

/// eps = 2 * (snr * ||z|| / ||score||)^2, at least step_floor. A zero score
/// reuses the last valid step, or the floor when there is none.
double corrector_step_size(const ComplexGrid &score, const ComplexGrid &z, const CorrectorParams &params,
                           CorrectorState &state);

// Annealed Langevin corrector: x' = x + eps * score(x, sigma) + sqrt(2 eps) * z.
ComplexGrid corrector_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma,
                           const CorrectorParams &params, const ComplexGrid &z, CorrectorState &state);
ComplexGrid corrector_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma,
                           const CorrectorParams &params, Rng &rng, CorrectorState &state);

/// Hard replaces sampled entries with the data; soft solves the proximal
/// problem with weight lambda on the generated value.
struct DataConsistency {
  bool hard = true;
  double lambda = 1.0;

  static DataConsistency Hard() { return {true, 1.0}; }
  static DataConsistency Soft(double lambda) { return {false, lambda}; }
};

/// Unsampled entries keep x_gen; sampled entries become (y + lambda*x_gen)/(1 + lambda),
/// or y exactly in hard mode.
ComplexGrid data_consistency(const ComplexGrid &x_gen, const ComplexGrid &y, const BinaryMask &sampled,
                             const DataConsistency &dc);
inline ComplexGrid data_consistency(const ComplexGrid &x_gen, const Measurement &meas, const DataConsistency &dc) {
  return data_consistency(x_gen, meas.y, meas.pattern.mask, dc);
}

} // namespace kdiff
