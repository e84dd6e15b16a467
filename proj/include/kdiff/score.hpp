#pragma once

#include "kdiff/grid.hpp"
#include "kdiff/mask.hpp"
#include "kdiff/rng.hpp"
#include "kdiff/schedule.hpp"
#include "kdiff/weight.hpp"

#include <memory>
#include <span>
#include <string>

namespace kdiff {

/// Score function s(x, sigma) ~ grad_x log p_sigma(x). Implementations must be
/// safe for concurrent const evaluation.
class ScoreProvider {
public:
  explicit ScoreProvider(std::string label) : label_(std::move(label)) {}
  virtual ~ScoreProvider() = default;

  virtual ComplexGrid score(const ComplexGrid &x, double sigma) const = 0;
  const std::string &label() const { return label_; }

private:
  std::string label_;
};

using ScoreProviderPtr = std::shared_ptr<const ScoreProvider>;

class ZeroScore final : public ScoreProvider {
public:
  explicit ZeroScore(std::string label = "zero") : ScoreProvider(std::move(label)) {}
  ComplexGrid score(const ComplexGrid &x, double sigma) const override;
};

/// Independent per-component Gaussian N(mean, variance); variance applies to
/// both the real and the imaginary part of each pixel.
struct GaussianPrior {
  ComplexGrid mean;
  RealGrid variance;

  GaussianPrior() = default;
  GaussianPrior(ComplexGrid mean, RealGrid variance);
};

/// Exact score of N(mean, variance + sigma^2): -(x - mean) / (variance + sigma^2).
ComplexGrid gaussian_score(const GaussianPrior &prior, const ComplexGrid &x, double sigma);

/// Prior of w * x when x ~ prior: N(w * mean, w^2 * variance).
GaussianPrior weighted_prior(const GaussianPrior &prior, const WeightMatrix &w);
/// Prior seen in masked coordinates: mean zeroed off the support.
GaussianPrior masked_prior(const GaussianPrior &prior, const BinaryMask &m);

class GaussianScore final : public ScoreProvider {
public:
  GaussianScore(GaussianPrior prior, std::string label = "gaussian")
      : ScoreProvider(std::move(label)), prior_(std::move(prior)) {}
  ComplexGrid score(const ComplexGrid &x, double sigma) const override;
  const GaussianPrior &prior() const { return prior_; }

private:
  GaussianPrior prior_;
};

/// x + sigma * z with z having i.i.d. N(0, 1) real components.
ComplexGrid perturb(const ComplexGrid &x, double sigma, Rng &rng);

enum class DsmWeighting { SigmaSquared, Unit };

/// Monte-Carlo denoising score-matching loss. For each sample and each of
/// mc_draws repetitions: draw a schedule index uniformly, perturb, and
/// accumulate lambda(sigma) * ||s(x_t, sigma) + z / sigma||^2. Returns the mean.
double dsm_loss(const ScoreProvider &provider, std::span<const ComplexGrid> samples, const NoiseSchedule &sched,
                DsmWeighting weighting, Rng &rng, int mc_draws);

} // namespace kdiff
