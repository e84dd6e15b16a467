#include "kdiff/schedule.hpp"

#include "kdiff/error.hpp"

#include <cmath>
#include <string>

namespace kdiff {

NoiseSchedule::NoiseSchedule(double sigma_min, double sigma_max, int levels) : levels_(levels) {
  if (!(sigma_min > 0.0) || !std::isfinite(sigma_min))
    throw Error("sde-score", "sigma_min", "must be positive and finite");
  if (!(sigma_max > sigma_min) || !std::isfinite(sigma_max))
    throw Error("sde-score", "sigma_max", "must be finite and exceed sigma_min");
  if (levels < 1) throw Error("sde-score", "N", "need at least one discretization step");

  sigmas_.resize(static_cast<std::size_t>(levels) + 1);
  const double log_ratio = std::log(sigma_max / sigma_min);
  for (int i = 0; i <= levels; ++i)
    sigmas_[static_cast<std::size_t>(i)] = sigma_min * std::exp(log_ratio * i / levels);
  // Pin the endpoints exactly.
  sigmas_.front() = sigma_min;
  sigmas_.back() = sigma_max;
}

} // namespace kdiff
