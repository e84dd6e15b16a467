#include "kdiff/sampler.hpp"

#include "kdiff/error.hpp"

#include <cmath>
#include <sstream>

namespace kdiff {

namespace {

constexpr const char *kModule = "sampler-recon";

ComplexGrid checked_score(const ScoreProvider &provider, const ComplexGrid &x, double sigma) {
  ComplexGrid s = provider.score(x, sigma);
  require_shape(s.shape(), x.shape(), kModule, provider.label().c_str());
  if (!s.all_finite()) {
    std::ostringstream msg;
    msg << "provider '" << provider.label() << "' returned a non-finite score at sigma=" << sigma;
    throw Error(kModule, provider.label(), msg.str());
  }
  return s;
}

} // namespace

ComplexGrid predictor_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma_lo, double sigma_hi,
                           const ComplexGrid &z) {
  if (!(sigma_lo >= 0.0) || !(sigma_hi > sigma_lo))
    throw Error(kModule, "sigma", "predictor needs sigma_hi > sigma_lo >= 0");
  require_shape(x.shape(), z.shape(), kModule, "z");
  const double delta = sigma_hi * sigma_hi - sigma_lo * sigma_lo;
  const double noise = std::sqrt(delta);
  const ComplexGrid s = checked_score(provider, x, sigma_hi);
  ComplexGrid out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += delta * s[i] + noise * z[i];
  return out;
}

ComplexGrid predictor_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma_lo, double sigma_hi,
                           Rng &rng) {
  return predictor_step(x, provider, sigma_lo, sigma_hi, complex_normal(x.shape(), x.domain(), rng));
}

double corrector_step_size(const ComplexGrid &score, const ComplexGrid &z, const CorrectorParams &params,
                           CorrectorState &state) {
  if (params.forced_step) return *params.forced_step;
  const double score_norm = score.norm();
  if (score_norm == 0.0) return state.last_step.value_or(params.step_floor);
  const double ratio = params.snr * z.norm() / score_norm;
  const double eps = std::max(params.step_floor, 2.0 * ratio * ratio);
  state.last_step = eps;
  return eps;
}

ComplexGrid corrector_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma,
                           const CorrectorParams &params, const ComplexGrid &z, CorrectorState &state) {
  if (!(sigma > 0.0)) throw Error(kModule, "sigma", "corrector needs sigma > 0");
  if (!(params.snr > 0.0)) throw Error(kModule, "snr", "must be positive");
  if (params.forced_step && !(*params.forced_step >= 0.0)) throw Error(kModule, "step", "forced step must be >= 0");
  require_shape(x.shape(), z.shape(), kModule, "z");
  const ComplexGrid s = checked_score(provider, x, sigma);
  const double eps = corrector_step_size(s, z, params, state);
  const double noise = std::sqrt(2.0 * eps);
  ComplexGrid out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += eps * s[i] + noise * z[i];
  return out;
}

ComplexGrid corrector_step(const ComplexGrid &x, const ScoreProvider &provider, double sigma,
                           const CorrectorParams &params, Rng &rng, CorrectorState &state) {
  return corrector_step(x, provider, sigma, params, complex_normal(x.shape(), x.domain(), rng), state);
}

ComplexGrid data_consistency(const ComplexGrid &x_gen, const ComplexGrid &y, const BinaryMask &sampled,
                             const DataConsistency &dc) {
  require_shape(x_gen.shape(), y.shape(), kModule, "y");
  require_shape(x_gen.shape(), sampled.shape(), kModule, "pattern");
  if (!dc.hard && !(dc.lambda > 0.0 && std::isfinite(dc.lambda)))
    throw Error(kModule, "dc_lambda", "must be positive and finite");
  ComplexGrid out = x_gen;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!sampled[i]) continue;
    out[i] = dc.hard ? y[i] : (y[i] + dc.lambda * x_gen[i]) / (1.0 + dc.lambda);
  }
  return out;
}

} // namespace kdiff
