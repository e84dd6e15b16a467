#pragma once

#include "kdiff/sampling.hpp"
#include "kdiff/score.hpp"

namespace kdiff {

/// Closed-form posterior mean under an independent Gaussian prior and the
/// measurement model y = mask * (x + eta). Sampled pixels get
/// (v*y + s^2*mean) / (v + s^2) with s = noise_sd, the rest keep the prior mean.
ComplexGrid gaussian_posterior_mean(const GaussianPrior &prior, const Measurement &meas);

/// ||a - b|| / ||b||.
double relative_error(const ComplexGrid &a, const ComplexGrid &b);

} // namespace kdiff
