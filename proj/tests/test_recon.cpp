#include "gaussian_problem.hpp"
#include "helpers.hpp"
#include "providers.hpp"

#include "kdiff/error.hpp"
#include "kdiff/fft.hpp"
#include "kdiff/recon.hpp"

#include <doctest.h>


using namespace kdiff;
using testutil::random_grid;

namespace {

ReconConfig base_config(int levels, std::vector<ModelSlot> slots) {
  ReconConfig cfg;
  cfg.schedule = NoiseSchedule(0.01, 50.0, levels);
  cfg.slots = std::move(slots);
  return cfg;
}

ScoreProviderPtr zero() { return std::make_shared<ZeroScore>(); }

ScoreProviderPtr gaussian(const GaussianPrior &p) { return std::make_shared<GaussianScore>(p); }

Measurement full_measurement(const ComplexGrid &x) {
  Rng rng = derive_stream(0);
  SamplingPattern pat;
  pat.mask = BinaryMask(x.shape(), true);
  return apply_forward(x, pat, 0.0, rng);
}

} // namespace

TEST_CASE("fully sampled hard DC returns the measurement") {
  const auto truth = random_grid(Shape{8, 8}, Domain::KSpace, 1);
  const auto meas = full_measurement(truth);
  for (auto comb : {Combination::Cascade, Combination::Parallel}) {
    auto cfg = base_config(2, {ModelSlot::identity(zero())});
    cfg.combination = comb;
    const auto res = reconstruct(meas, cfg);
    CHECK(res.kspace == meas.y);
    CHECK(res.levels.size() == 2);
    CHECK(*res.levels.back().residual == 0.0);
    CHECK(res.image == ifft2c(res.kspace));
  }
}

TEST_CASE("masked slots only touch their support") {
  const Shape s{8, 8};
  const auto prob = testutil::make_gaussian_problem(s, 2.0, 2, 3);
  const auto w = make_weight(s);
  const auto m1 = make_circle_mask(s, 6.0);
  const auto m2 = make_circle_mask(s, 3.0);
  for (auto mode : {MaskWriteBack::Replace, MaskWriteBack::LiteralSign}) {
    auto cfg = base_config(20, {ModelSlot::weighted(gaussian(weighted_prior(prob.prior, w)), w),
                                ModelSlot::masked(gaussian(masked_prior(prob.prior, m1.bits)), m1),
                                ModelSlot::masked(gaussian(masked_prior(prob.prior, m2.bits)), m2)});
    cfg.write_back = mode;
    std::size_t events = 0, outside_changes = 0, inside_changes = 0;
    cfg.observer = [&](const SlotEvent &e) {
      ++events;
      if (e.slot == 0) return;
      const BinaryMask &support = e.slot == 1 ? m1.bits : m2.bits;
      for (std::size_t p = 0; p < s.size(); ++p) {
        const bool changed = !(e.before[p] == e.after[p]);
        if (support[p]) inside_changes += changed;
        else outside_changes += changed;
      }
    };
    cascade_reconstruct(prob.meas, cfg);
    CHECK(events == 60);
    CHECK(outside_changes == 0);
    CHECK(inside_changes > 0);
  }
}

TEST_CASE("weighted zero-score slot with pinned noise is the identity") {
  const Shape s{8, 8};
  auto cfg = base_config(5, {ModelSlot::weighted(zero(), make_weight(s))});
  cfg.noise = NoiseMode::Pinned;
  double worst = 0.0;
  cfg.observer = [&](const SlotEvent &e) {
    worst = std::max(worst, testutil::max_abs_diff(e.before, e.after) / testutil::l2(e.before));
  };
  sample_prior(s, cfg);
  CHECK(worst <= 1e-12);
}

TEST_CASE("reconstructions are deterministic in the seed") {
  const Shape s{8, 8};
  const auto prob = testutil::make_gaussian_problem(s, 2.0, 0, 4);
  auto cfg = base_config(30, {ModelSlot::identity(gaussian(prob.prior))});
  cfg.corrector_steps = 2;
  cfg.seed = 11;
  const auto a = reconstruct(prob.meas, cfg);
  const auto b = reconstruct(prob.meas, cfg);
  CHECK(a.kspace == b.kspace);
  CHECK(a.image == b.image);
  cfg.seed = 12;
  CHECK_FALSE(reconstruct(prob.meas, cfg).kspace == a.kspace);
}

TEST_CASE("one-slot parallel equals cascade") {
  const Shape s{8, 8};
  const auto prob = testutil::make_gaussian_problem(s, 2.0, 0, 5);
  const auto w = make_weight(s);
  for (auto dc : {DataConsistency::Hard(), DataConsistency::Soft(0.5)})
    for (int m : {0, 1, 2}) {
      auto cfg = base_config(25, {ModelSlot::identity(gaussian(prob.prior))});
      cfg.dc = dc;
      cfg.corrector_steps = m;
      cfg.seed = 3;
      CHECK(cascade_reconstruct(prob.meas, cfg).kspace == parallel_reconstruct(prob.meas, cfg).kspace);

      // A weighted slot applies its last DC in weighted coordinates under
      // cascade and in raw coordinates after the merge, so w * (1/w) rounding
      // separates the two.
      cfg.slots = {ModelSlot::weighted(gaussian(weighted_prior(prob.prior, w)), w)};
      const auto c = cascade_reconstruct(prob.meas, cfg);
      const auto p = parallel_reconstruct(prob.meas, cfg);
      CHECK(testutil::max_abs_diff(c.kspace, p.kspace) <= 1e-10 * testutil::l2(c.kspace));
    }
}

TEST_CASE("two identical slots with shared streams match one slot") {
  const Shape s{8, 8};
  const auto prob = testutil::make_gaussian_problem(s, 2.0, 0, 6);
  auto provider = gaussian(prob.prior);
  auto one = base_config(25, {ModelSlot::identity(provider)});
  one.seed = 9;
  auto two = one;
  two.slots.push_back(ModelSlot::identity(provider));
  two.identical_slot_streams = true;
  two.combination = Combination::Parallel;
  const auto a = parallel_reconstruct(prob.meas, one);
  const auto b = parallel_reconstruct(prob.meas, two);
  CHECK(testutil::max_abs_diff(a.kspace, b.kspace) == 0.0);
}

TEST_CASE("slot roster validation") {
  const Shape s{8, 8};
  CHECK_THROWS_AS(validate_slots({}, s), Error);
  CHECK_THROWS_AS(validate_slots({ModelSlot::identity(nullptr)}, s), Error);
  CHECK_THROWS_AS(validate_slots({ModelSlot::weighted(zero(), make_weight(Shape{4, 4}))}, s), Error);
  CHECK_THROWS_AS(validate_slots({ModelSlot::masked(zero(), make_circle_mask(Shape{8, 4}, 2.0))}, s), Error);
  // detail before structure
  CHECK_THROWS_AS(validate_slots({ModelSlot::masked(zero(), make_circle_mask(s, 4.0)), ModelSlot::identity(zero())}, s),
                  Error);
  ModelSlot wrong_role = ModelSlot::weighted(zero(), make_weight(s));
  wrong_role.role = SlotRole::Detail;
  CHECK_THROWS_AS(validate_slots({wrong_role}, s), Error);
  CHECK_NOTHROW(validate_slots({ModelSlot::weighted(zero(), make_weight(s)),
                                ModelSlot::masked(zero(), make_circle_mask(s, 4.0))},
                               s));

  const auto meas = full_measurement(random_grid(s, Domain::KSpace, 1));
  CHECK_THROWS_AS(reconstruct(meas, base_config(3, {})), Error);
  auto shape_mismatch = base_config(3, {ModelSlot::weighted(zero(), make_weight(Shape{4, 4}))});
  CHECK_THROWS_AS(reconstruct(meas, shape_mismatch), Error);
}

TEST_CASE("non-finite iterate is reported with its level") {
  auto cfg = base_config(4, {ModelSlot::identity(std::make_shared<testutil::ConstantScore>(1e300))});
  cfg.schedule = NoiseSchedule(0.01, 1e5, 4);
  try {
    sample_prior(Shape{4, 4}, cfg);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.module() == "sampler-recon");
    CHECK(std::string(e.what()).find("level 3") != std::string::npos);
  }
}

TEST_CASE("reconstruction mean is independent of the thread count") {
  const Shape s{8, 8};
  const auto prob = testutil::make_gaussian_problem(s, 2.0, 0, 7);
  auto cfg = base_config(20, {ModelSlot::identity(gaussian(prob.prior))});
  cfg.seed = 5;
  const auto one = reconstruction_mean(prob.meas, cfg, 7, 1);
  const auto three = reconstruction_mean(prob.meas, cfg, 7, 3);
  CHECK(one == three);
  CHECK_THROWS_AS(reconstruction_mean(prob.meas, cfg, 0, 1), Error);
}

TEST_CASE("coils use independent streams") {
  const Shape s{8, 8};
  const auto prob = testutil::make_gaussian_problem(s, 2.0, 0, 8);
  auto cfg = base_config(20, {ModelSlot::identity(gaussian(prob.prior))});
  const auto res = reconstruct_coils({prob.meas, prob.meas}, cfg, 2);
  REQUIRE(res.size() == 2);
  CHECK_FALSE(res[0].kspace == res[1].kspace);
  auto single = cfg;
  single.coil = 1;
  CHECK(reconstruct(prob.meas, single).kspace == res[1].kspace);
}

TEST_CASE("single-slot mean matches the Gaussian posterior") {
  const auto prob = testutil::make_gaussian_problem(Shape{16, 16}, 2.0, 0, 21);
  auto cfg = base_config(1000, {ModelSlot::identity(gaussian(prob.prior))});
  cfg.schedule = NoiseSchedule();
  cfg.seed = 1;
  const auto mean = reconstruction_mean(prob.meas, cfg, 200, 1);
  const double err = relative_error(mean, prob.posterior_mean);
  MESSAGE("posterior mean relative error " << err);
  CHECK(err < 0.05);
}

TEST_CASE("three-slot cascade and parallel both track the posterior") {
  const Shape s{16, 16};
  const auto prob = testutil::make_gaussian_problem(s, 2.0, 4, 22);
  const auto w = make_weight(s);
  const auto m1 = make_circle_mask(s, 10.0);
  const auto m2 = make_circle_mask(s, 5.0);
  auto cfg = base_config(1000, {ModelSlot::weighted(gaussian(weighted_prior(prob.prior, w)), w),
                                ModelSlot::masked(gaussian(masked_prior(prob.prior, m1.bits)), m1),
                                ModelSlot::masked(gaussian(masked_prior(prob.prior, m2.bits)), m2)});
  cfg.schedule = NoiseSchedule();
  for (auto comb : {Combination::Cascade, Combination::Parallel}) {
    cfg.combination = comb;
    const double err = relative_error(reconstruction_mean(prob.meas, cfg, 200, 1), prob.posterior_mean);
    MESSAGE(std::string(comb == Combination::Cascade ? "cascade" : "parallel") << " posterior mean relative error " << err);
    CHECK(err < 0.05);
  }
}
