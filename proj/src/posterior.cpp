#include "kdiff/posterior.hpp"

#include "kdiff/error.hpp"

namespace kdiff {

ComplexGrid gaussian_posterior_mean(const GaussianPrior &prior, const Measurement &meas) {
  require_shape(prior.mean.shape(), meas.y.shape(), "sampler-recon", "measurement");
  const double s2 = meas.noise_sd * meas.noise_sd;
  ComplexGrid out = prior.mean;
  const auto &mask = meas.pattern.mask;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!mask[i]) continue;
    const double v = prior.variance[i];
    out[i] = (v * meas.y[i] + s2 * prior.mean[i]) / (v + s2);
  }
  return out;
}

double relative_error(const ComplexGrid &a, const ComplexGrid &b) {
  require_shape(a.shape(), b.shape(), "metrics", "reference");
  ComplexGrid d = a;
  d -= b;
  const double nb = b.norm();
  if (nb == 0.0) throw Error("metrics", "reference", "reference has zero norm");
  return d.norm() / nb;
}

} // namespace kdiff
