#pragma once

#include "kdiff/posterior.hpp"
#include "kdiff/recon.hpp"
#include "kdiff/rng.hpp"

#include <random>

namespace testutil {

// Independent Gaussian prior with a random mean and variances in [0.5, 2],
// a ground truth drawn from it, and its noise-free measurement.
struct GaussianProblem {
  kdiff::GaussianPrior prior;
  kdiff::ComplexGrid truth;
  kdiff::Measurement meas;
  kdiff::ComplexGrid posterior_mean;
};

inline GaussianProblem make_gaussian_problem(kdiff::Shape shape, double r, int acs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mean_u(-3.0, 3.0), var_u(0.5, 2.0);
  kdiff::ComplexGrid mean(shape, kdiff::Domain::KSpace);
  kdiff::RealGrid var(shape);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    mean[i] = {mean_u(rng), mean_u(rng)};
    var[i] = var_u(rng);
  }
  GaussianProblem p;
  p.prior = kdiff::GaussianPrior(mean, var);
  std::normal_distribution<double> n01;
  p.truth = mean;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const double sd = std::sqrt(var[i]);
    p.truth[i] += kdiff::cdouble(sd * n01(rng), sd * n01(rng));
  }
  kdiff::Rng noise = kdiff::derive_stream(seed);
  p.meas = kdiff::apply_forward(p.truth, kdiff::gen_random2d(shape, r, acs, seed), 0.0, noise);
  p.posterior_mean = kdiff::gaussian_posterior_mean(p.prior, p.meas);
  return p;
}

} // namespace testutil
