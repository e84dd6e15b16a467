#include "kdiff/score.hpp"

#include "kdiff/error.hpp"

#include <cmath>

namespace kdiff {

namespace {
constexpr const char *kModule = "sde-score";
}

ComplexGrid ZeroScore::score(const ComplexGrid &x, double) const { return ComplexGrid(x.shape(), x.domain()); }

GaussianPrior::GaussianPrior(ComplexGrid m, RealGrid v) : mean(std::move(m)), variance(std::move(v)) {
  require_shape(mean.shape(), variance.shape(), kModule, "variance");
  require_finite(mean, kModule, "mean");
  for (double vi : variance.data())
    if (!(vi > 0.0) || !std::isfinite(vi)) throw Error(kModule, "variance", "must be positive and finite everywhere");
}

ComplexGrid gaussian_score(const GaussianPrior &prior, const ComplexGrid &x, double sigma) {
  require_shape(x.shape(), prior.mean.shape(), kModule, "x");
  if (!(sigma >= 0.0)) throw Error(kModule, "sigma", "must be >= 0");
  ComplexGrid s(x.shape(), x.domain());
  const double s2 = sigma * sigma;
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = -(x[i] - prior.mean[i]) / (prior.variance[i] + s2);
  return s;
}

GaussianPrior weighted_prior(const GaussianPrior &prior, const WeightMatrix &w) {
  RealGrid var = prior.variance;
  for (std::size_t i = 0; i < var.size(); ++i) var[i] *= w.values[i] * w.values[i];
  return {apply_weight(prior.mean, w), std::move(var)};
}

GaussianPrior masked_prior(const GaussianPrior &prior, const BinaryMask &m) {
  return {apply_mask(prior.mean, m), prior.variance};
}

ComplexGrid GaussianScore::score(const ComplexGrid &x, double sigma) const {
  return gaussian_score(prior_, x, sigma);
}

ComplexGrid perturb(const ComplexGrid &x, double sigma, Rng &rng) {
  if (!(sigma >= 0.0)) throw Error(kModule, "sigma", "must be >= 0");
  require_finite(x, kModule, "x");
  if (sigma == 0.0) return x;
  ComplexGrid out = complex_normal(x.shape(), x.domain(), rng);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + sigma * out[i];
  return out;
}

double dsm_loss(const ScoreProvider &provider, std::span<const ComplexGrid> samples, const NoiseSchedule &sched,
                DsmWeighting weighting, Rng &rng, int mc_draws) {
  if (samples.empty()) throw Error(kModule, "samples", "need at least one sample");
  if (mc_draws < 1) throw Error(kModule, "K_mc", "need at least one Monte-Carlo draw");

  std::uniform_int_distribution<int> level(0, sched.levels());
  double total = 0.0;
  std::size_t terms = 0;
  for (const auto &x0 : samples) {
    for (int k = 0; k < mc_draws; ++k) {
      const double sigma = sched.sigma(static_cast<std::size_t>(level(rng)));
      const ComplexGrid z = complex_normal(x0.shape(), x0.domain(), rng);
      ComplexGrid xt = x0;
      for (std::size_t i = 0; i < xt.size(); ++i) xt[i] += sigma * z[i];
      const ComplexGrid s = provider.score(xt, sigma);
      require_shape(s.shape(), xt.shape(), kModule, "provider output");
      double err = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) err += std::norm(s[i] + z[i] / sigma);
      const double lambda = weighting == DsmWeighting::SigmaSquared ? sigma * sigma : 1.0;
      total += lambda * err;
      ++terms;
    }
  }
  return total / static_cast<double>(terms);
}

} // namespace kdiff
