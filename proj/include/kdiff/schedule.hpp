#pragma once

#include <cstddef>
#include <vector>

namespace kdiff {

/// Geometric VE noise ladder sigma_0 < ... < sigma_N,
/// sigma_i = sigma_min * (sigma_max / sigma_min)^(i / N).
class NoiseSchedule {
public:
  static constexpr double kDefaultSigmaMin = 0.01;
  static constexpr double kDefaultSigmaMax = 378.0;
  static constexpr int kDefaultLevels = 1000;

  NoiseSchedule() : NoiseSchedule(kDefaultSigmaMin, kDefaultSigmaMax, kDefaultLevels) {}
  NoiseSchedule(double sigma_min, double sigma_max, int levels);

  double sigma_min() const { return sigmas_.front(); }
  double sigma_max() const { return sigmas_.back(); }
  int levels() const { return levels_; } // N; there are N + 1 sigmas
  double sigma(std::size_t i) const { return sigmas_.at(i); }
  const std::vector<double> &sigmas() const { return sigmas_; }

private:
  int levels_ = 0;
  std::vector<double> sigmas_;
};

inline NoiseSchedule make_schedule(double sigma_min, double sigma_max, int levels) {
  return {sigma_min, sigma_max, levels};
}

} // namespace kdiff
