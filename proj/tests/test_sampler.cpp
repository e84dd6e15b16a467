#include "helpers.hpp"
#include "providers.hpp"

#include "kdiff/error.hpp"
#include "kdiff/sampler.hpp"

#include <doctest.h>

using namespace kdiff;
using testutil::ConstantScore;
using testutil::random_grid;

namespace {

ComplexGrid scalar(double v) {
  ComplexGrid g(Shape{1, 1}, Domain::KSpace);
  g[0] = v;
  return g;
}

} // namespace

TEST_CASE("predictor pinned-noise cases") {
  const auto x = random_grid(Shape{4, 4}, Domain::KSpace, 3);
  const ZeroScore zero;
  const ComplexGrid z0(x.shape(), Domain::KSpace);
  CHECK(predictor_step(x, zero, 0.3, 7.0, z0) == x);

  const ConstantScore half(-0.5);
  const auto out = predictor_step(scalar(5.0), half, 1.0, std::sqrt(2.0), ComplexGrid(Shape{1, 1}, Domain::KSpace));
  CHECK(std::abs(out[0] - cdouble(4.5)) < 1e-15);

  // with a fixed z the noise enters scaled by sqrt(hi^2 - lo^2)
  ComplexGrid z(Shape{1, 1}, Domain::KSpace);
  z[0] = {1.0, -2.0};
  const auto noisy = predictor_step(scalar(0.0), zero, 3.0, 5.0, z);
  CHECK(noisy[0] == cdouble(4.0, -8.0));

  CHECK_THROWS_AS(predictor_step(x, zero, 5.0, 3.0, z0), Error);
  CHECK_THROWS_AS(predictor_step(x, zero, 3.0, 3.0, z0), Error);
  CHECK_THROWS_AS(predictor_step(x, zero, -1.0, 3.0, z0), Error);
}

TEST_CASE("predictor noise variance matches sigma_hi^2 - sigma_lo^2") {
  const ZeroScore zero;
  const ComplexGrid x(Shape{1, 1}, Domain::KSpace);
  Rng rng = derive_stream(8);
  const int draws = 10000;
  double re = 0.0, im = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto y = predictor_step(x, zero, 3.0, 5.0, rng);
    re += y[0].real() * y[0].real();
    im += y[0].imag() * y[0].imag();
  }
  CHECK(std::abs(re / draws / 16.0 - 1.0) < 0.1);
  CHECK(std::abs(im / draws / 16.0 - 1.0) < 0.1);
}

TEST_CASE("corrector pinned-noise cases") {
  const auto x = random_grid(Shape{4, 4}, Domain::KSpace, 4);
  const ComplexGrid z0(x.shape(), Domain::KSpace);
  const ZeroScore zero;
  CorrectorParams p;
  p.step_floor = 0.0;
  CorrectorState st;
  CHECK(corrector_step(x, zero, 1.0, p, z0, st) == x);

  CorrectorParams forced;
  forced.forced_step = 0.5;
  const ConstantScore minus_one(-1.0);
  const auto out = corrector_step(scalar(2.0), minus_one, 0.5, forced, ComplexGrid(Shape{1, 1}, Domain::KSpace), st);
  CHECK(out[0] == cdouble(1.5));
}

TEST_CASE("corrector step-size rule") {
  const Shape s{4, 4};
  const auto score = random_grid(s, Domain::KSpace, 1);
  const auto z = random_grid(s, Domain::KSpace, 2);
  CorrectorParams p;
  CorrectorState st;
  const double expect = 2.0 * std::pow(0.16 * testutil::l2(z) / testutil::l2(score), 2);
  CHECK(corrector_step_size(score, z, p, st) == doctest::Approx(expect).epsilon(1e-14));
  REQUIRE(st.last_step);

  // zero score reuses the last valid step, or the floor without one
  const ComplexGrid zero(s, Domain::KSpace);
  CHECK(corrector_step_size(zero, z, p, st) == *st.last_step);
  CorrectorState fresh;
  CHECK(corrector_step_size(zero, z, p, fresh) == p.step_floor);

  // the floor applies when the rule would go below it
  CorrectorParams floored;
  floored.step_floor = 10.0;
  CHECK(corrector_step_size(score, z, floored, fresh) == 10.0);

  // full update with the rule and an explicit z
  const auto x = random_grid(s, Domain::KSpace, 3);
  const ConstantScore c({0.5, -0.25});
  CorrectorState st2;
  const auto out = corrector_step(x, c, 1.0, p, z, st2);
  const double eps = 2.0 * std::pow(0.16 * testutil::l2(z) / (std::abs(cdouble(0.5, -0.25)) * 4.0), 2);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(std::abs(out[i] - (x[i] + eps * cdouble(0.5, -0.25) + std::sqrt(2 * eps) * z[i])) < 1e-12);
}

TEST_CASE("corrector validation and non-finite scores") {
  const auto x = random_grid(Shape{4, 4}, Domain::KSpace, 4);
  const ComplexGrid z0(x.shape(), Domain::KSpace);
  CorrectorState st;
  CHECK_THROWS_AS(corrector_step(x, ZeroScore(), 0.0, {}, z0, st), Error);
  CorrectorParams bad;
  bad.snr = 0.0;
  CHECK_THROWS_AS(corrector_step(x, ZeroScore(), 1.0, bad, z0, st), Error);
  try {
    corrector_step(x, testutil::BrokenScore(), 1.0, {}, z0, st);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.module() == "sampler-recon");
    CHECK(e.parameter() == "broken-net");
    CHECK(std::string(e.what()).find("broken-net") != std::string::npos);
  }
  CHECK_THROWS_AS(predictor_step(x, testutil::BrokenScore(), 1.0, 2.0, z0), Error);
}

TEST_CASE("Langevin corrector relaxes toward the prior") {
  const GaussianPrior prior(ComplexGrid(Shape{1, 1}, Domain::KSpace), RealGrid(Shape{1, 1}, 1.0));
  const GaussianScore score(prior);
  const double sigma = 0.01;

  // With the SNR rule the step shrinks like 1/x^2, so far from the mode each
  // step lowers E[x^2] per component by about 4 snr^2.
  SUBCASE("default snr drifts at the predicted rate") {
    const int paths = 200;
    double final_sq = 0.0;
    for (int p = 0; p < paths; ++p) {
      Rng rng = derive_stream(100, {static_cast<std::uint64_t>(p)});
      CorrectorParams params;
      CorrectorState st;
      ComplexGrid x = scalar(10.0);
      x[0] = {10.0, 10.0};
      for (int k = 0; k < 500; ++k) x = corrector_step(x, score, sigma, params, rng, st);
      final_sq += std::norm(x[0]) / 2.0;
    }
    final_sq /= paths;
    const double predicted = 100.0 - 500 * 4 * 0.16 * 0.16;
    CHECK(final_sq < 100.0);
    CHECK(std::abs(final_sq / predicted - 1.0) < 0.1);
  }

  SUBCASE("a larger snr brings the ensemble mean into the unit band") {
    // Single paths are heavy tailed here, so the band is checked on the
    // mean over independent paths started at x0 = 10.
    const int paths = 400;
    cdouble mean = 0.0;
    for (int p = 0; p < paths; ++p) {
      Rng rng = derive_stream(200, {static_cast<std::uint64_t>(p)});
      CorrectorParams params;
      params.snr = 0.3;
      CorrectorState st;
      ComplexGrid x = scalar(10.0);
      for (int k = 0; k < 500; ++k) x = corrector_step(x, score, sigma, params, rng, st);
      mean += x[0] / static_cast<double>(paths);
    }
    CHECK(std::abs(mean.real()) <= 1.0);
    CHECK(std::abs(mean.imag()) <= 1.0);
  }
}

TEST_CASE("data consistency examples") {
  const Shape s{1, 2};
  ComplexGrid x(s, Domain::KSpace), y(s, Domain::KSpace);
  x[0] = 2.0;
  x[1] = 7.0;
  y[0] = 4.0;
  BinaryMask m(s);
  m.set(0, true);
  const auto soft = data_consistency(x, y, m, DataConsistency::Soft(1.0));
  CHECK(soft[0] == cdouble(3.0));
  CHECK(soft[1] == cdouble(7.0));
  CHECK(data_consistency(x, y, m, DataConsistency::Hard())[0] == cdouble(4.0));

  const auto truth = random_grid(Shape{8, 8}, Domain::KSpace, 5);
  const auto gen = random_grid(Shape{8, 8}, Domain::KSpace, 6);
  CHECK(data_consistency(gen, truth, BinaryMask(Shape{8, 8}, true), DataConsistency::Hard()) == truth);

  CHECK_THROWS_AS(data_consistency(gen, random_grid(Shape{4, 8}, Domain::KSpace, 1), BinaryMask(Shape{8, 8}),
                                   DataConsistency::Hard()),
                  Error);
  CHECK_THROWS_AS(data_consistency(gen, truth, BinaryMask(Shape{8, 4}), DataConsistency::Hard()), Error);
  CHECK_THROWS_AS(data_consistency(gen, truth, BinaryMask(Shape{8, 8}), DataConsistency::Soft(0.0)), Error);
}

TEST_CASE("data consistency on random pixels") {
  const Shape s{40, 25}; // 1000 pixels
  const auto gen = random_grid(s, Domain::KSpace, 10, 4.0);
  const auto y = random_grid(s, Domain::KSpace, 11, 4.0);
  std::mt19937_64 rng(12);
  BinaryMask m(s);
  for (std::size_t i = 0; i < s.size(); ++i) m.set(i, rng() % 2 == 0);
  for (double lambda : {0.5, 1.0, 4.0}) {
    const auto out = data_consistency(gen, y, m, DataConsistency::Soft(lambda));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (m[i]) CHECK(std::abs(out[i] - (y[i] + lambda * gen[i]) / (1.0 + lambda)) <= 1e-12);
      else CHECK(out[i] == gen[i]);
    }
  }
  const auto once = data_consistency(gen, y, m, DataConsistency::Hard());
  CHECK(data_consistency(once, y, m, DataConsistency::Hard()) == once);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(once[i] == (m[i] ? y[i] : gen[i]));
}
