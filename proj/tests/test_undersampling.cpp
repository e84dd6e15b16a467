#include "helpers.hpp"

#include "kdiff/error.hpp"
#include "kdiff/sampling.hpp"

#include <doctest.h>

using namespace kdiff;
using testutil::random_grid;

namespace {

double popcount_r(const BinaryMask &m) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < m.size(); ++i) n += m[i] ? 1 : 0;
  return static_cast<double>(m.size()) / static_cast<double>(n);
}

bool acs_full(const SamplingPattern &p) {
  const auto side = static_cast<std::size_t>(p.acs);
  const std::size_t r0 = p.shape().center_row() - side / 2, c0 = p.shape().center_col() - side / 2;
  for (std::size_t r = r0; r < r0 + side; ++r)
    for (std::size_t c = c0; c < c0 + side; ++c)
      if (!p.mask(r, c)) return false;
  return true;
}

} // namespace

TEST_CASE("uniform pattern examples") {
  for (int offset : {0, 1}) {
    const auto p = gen_uniform(Shape{8, 8}, 2.0, 0, offset);
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) CHECK(p.mask(r, c) == (r >= static_cast<std::size_t>(offset) && (r - offset) % 2 == 0));
    CHECK(p.mask.popcount() == 32);
    CHECK(p.achieved_r == 2.0);
    CHECK(p.within_tolerance);
  }

  const auto dense = gen_uniform(Shape{8, 8}, 1.0001);
  CHECK(dense.mask.popcount() == 64);

  const auto p = gen_uniform(Shape{16, 16}, 4.0, 4);
  const double r = popcount_r(p.mask);
  CHECK(r >= 3.8);
  CHECK(r <= 4.2);
  CHECK(p.achieved_r == r);
  CHECK(acs_full(p));
}

TEST_CASE("uniform transpose samples columns") {
  const auto rows = gen_uniform(Shape{12, 20}, 4.0, 0, 1, false);
  const auto cols = gen_uniform(Shape{20, 12}, 4.0, 0, 1, true);
  for (std::size_t r = 0; r < 12; ++r)
    for (std::size_t c = 0; c < 20; ++c) CHECK(rows.mask(r, c) == cols.mask(c, r));
}

TEST_CASE("uniform reports infeasible targets instead of failing") {
  const auto p = gen_uniform(Shape{8, 8}, 7.5, 6);
  CHECK_FALSE(p.within_tolerance);
  CHECK_FALSE(p.note.empty());
  CHECK(p.achieved_r == popcount_r(p.mask));
  CHECK_THROWS_AS(gen_uniform(Shape{8, 8}, 1.0), Error);
  CHECK_THROWS_AS(gen_uniform(Shape{8, 8}, 2.0, 0, 8), Error);
  CHECK_THROWS_AS(gen_uniform(Shape{8, 8}, 2.0, 9), Error);
}

TEST_CASE("random2d pattern examples") {
  const Shape s{64, 64};
  CHECK(gen_random2d(s, 8.0, 8, 7).mask == gen_random2d(s, 8.0, 8, 7).mask);
  CHECK_FALSE(gen_random2d(s, 8.0, 8, 7).mask == gen_random2d(s, 8.0, 8, 8).mask);
  CHECK(gen_random2d(Shape{16, 16}, 1.0, 0, 3).mask.popcount() == 256);

  const auto p = gen_random2d(s, 8.0, 8, 7);
  const double r = popcount_r(p.mask);
  CHECK(r >= 7.6);
  CHECK(r <= 8.4);
  CHECK(acs_full(p));

  CHECK_THROWS_AS(gen_random2d(Shape{16, 16}, 8.0, 8, 1), Error);
  CHECK_THROWS_AS(gen_random2d(s, 0.5, 0, 1), Error);
}

TEST_CASE("random2d selects roughly uniformly outside the acs block") {
  // Over many seeds each non-acs pixel is picked with probability close to budget/candidates.
  const Shape s{16, 16};
  std::vector<int> hits(s.size());
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    const auto p = gen_random2d(s, 4.0, 0, static_cast<std::uint64_t>(t));
    for (std::size_t i = 0; i < s.size(); ++i) hits[i] += p.mask[i] ? 1 : 0;
  }
  for (int h : hits) CHECK(std::abs(h / double(trials) - 0.25) < 0.05);
}

TEST_CASE("poisson2d examples and minimum distance") {
  const Shape s{64, 64};
  const auto a = gen_poisson2d(s, 6.0, 8, 3);
  CHECK(a.mask == gen_poisson2d(s, 6.0, 8, 3).mask);
  const double r = popcount_r(a.mask);
  CHECK(r >= 5.7);
  CHECK(r <= 6.3);
  CHECK(acs_full(a));

  // Pairwise check over non-acs samples with an independently written radius.
  std::vector<std::pair<int, int>> pts;
  for (std::size_t row = 0; row < 64; ++row)
    for (std::size_t col = 0; col < 64; ++col)
      if (a.mask(row, col) && !(row >= 28 && row < 36 && col >= 28 && col < 36)) pts.emplace_back(row, col);
  auto radius = [&](int row, int col) {
    return a.radius_scale * (1.0 + std::hypot(row - 32.0, col - 32.0) / (64.0 / 6.0));
  };
  std::size_t violations = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
      if (d < std::max(radius(pts[i].first, pts[i].second), radius(pts[j].first, pts[j].second))) ++violations;
    }
  CHECK(violations == 0);
  CHECK(a.radius_scale > 0.0);
}

TEST_CASE("poisson2d density falls off from the center") {
  const auto p = gen_poisson2d(Shape{64, 64}, 4.0, 0, 11);
  std::size_t inner = 0, inner_n = 0, outer = 0, outer_n = 0;
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) {
      const double d = std::hypot(r - 32.0, c - 32.0);
      if (d < 12) { inner += p.mask(r, c); ++inner_n; }
      if (d > 24) { outer += p.mask(r, c); ++outer_n; }
    }
  CHECK(double(inner) / inner_n > 2.0 * double(outer) / outer_n);
}

TEST_CASE("all kinds hit the target acceleration on 64x64") {
  const Shape s{64, 64};
  for (double target : {4.0, 8.0, 10.0, 15.0}) {
    CAPTURE(target);
    // Full rows on 64 lines give R = 64/k only; a 4x4 acs block supplies the remainder.
    const auto u = gen_uniform(s, target, 4);
    const auto rnd = gen_random2d(s, target, 4, 5);
    const auto poi = gen_poisson2d(s, target, 4, 5);
    const auto rnd0 = gen_random2d(s, target, 0, 5);
    const auto poi0 = gen_poisson2d(s, target, 0, 5);
    for (const auto *p : {&u, &rnd, &poi, &rnd0, &poi0}) {
      CHECK(std::abs(popcount_r(p->mask) / target - 1.0) <= 0.05);
      CHECK(p->within_tolerance);
    }
  }
}

TEST_CASE("uniform without acs flags targets between 64/k values") {
  for (double target : {10.0, 15.0}) {
    const auto u = gen_uniform(Shape{64, 64}, target, 0);
    CHECK_FALSE(u.within_tolerance);
    CHECK(u.note.size() > 0);
  }
  CHECK(gen_uniform(Shape{64, 64}, 8.0, 0).within_tolerance);
}

TEST_CASE("acs blocks are always fully sampled") {
  const Shape s{32, 24};
  for (int acs : {2, 5, 8}) {
    CHECK(acs_full(gen_uniform(s, 4.0, acs)));
    CHECK(acs_full(gen_random2d(s, 4.0, acs, 1)));
    CHECK(acs_full(gen_poisson2d(s, 4.0, acs, 1)));
  }
}

TEST_CASE("apply_forward examples") {
  const Shape s{16, 16};
  const auto x = random_grid(s, Domain::KSpace, 12);
  Rng rng = derive_stream(1);

  SamplingPattern full;
  full.mask = BinaryMask(s, true);
  CHECK(apply_forward(x, full, 0.0, rng).y == x);

  SamplingPattern single;
  single.mask = BinaryMask(s);
  single.mask.set(3, 7, true);
  const auto one = apply_forward(x, single, 0.0, rng);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK((one.y[i] != cdouble{}) == (i == 3 * 16 + 7));

  const auto pat = gen_random2d(s, 3.0, 0, 9);
  const auto meas = apply_forward(x, pat, 0.0, rng);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(meas.y[i] == (pat.mask[i] ? x[i] : cdouble{}));
  CHECK(apply_forward(meas.y, pat, 0.0, rng).y == meas.y);

  CHECK_THROWS_AS(apply_forward(random_grid(Shape{8, 16}, Domain::KSpace, 1), pat, 0.0, rng), Error);
  CHECK_THROWS_AS(apply_forward(x, pat, -1.0, rng), Error);
}

TEST_CASE("apply_forward noise has the requested spread and zeros off the pattern") {
  const Shape s{64, 64};
  const ComplexGrid x(s, Domain::KSpace);
  const auto pat = gen_random2d(s, 2.0, 0, 4);
  Rng rng = derive_stream(2);
  const auto meas = apply_forward(x, pat, 0.5, rng);
  double sum2 = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!pat.mask[i]) {
      CHECK(meas.y[i] == cdouble{});
      continue;
    }
    sum2 += std::norm(meas.y[i]);
    n += 2;
  }
  CHECK(std::abs(sum2 / n / 0.25 - 1.0) < 0.1);
}
