#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "strainforge/config.hpp"
#include "strainforge/errors.hpp"
#include "strainforge/population.hpp"

using namespace strainforge;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

bool same_samples(const EnsembleResult& a, const EnsembleResult& b) {
  if (a.samples.size() != b.samples.size()) return false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& x = a.samples[i];
    const auto& y = b.samples[i];
    if (x.x_nm != y.x_nm || x.y_nm != y.y_nm || x.depth_nm != y.depth_nm || x.orientation_id != y.orientation_id ||
        !(x.strain == y.strain) || x.gss_ghz != y.gss_ghz)
      return false;
  }
  return a.summary.mean == b.summary.mean && a.summary.std == b.summary.std &&
         a.summary.histogram.edges == b.summary.histogram.edges &&
         a.summary.histogram.densities == b.summary.histogram.densities;
}

const SivParameters kParams;
const LayerStack kStack = default_layer_stack();
const PostDepositionModel kPost{};
constexpr std::uint64_t kSeed = 424242;

}  // namespace

TEST_CASE("pre-deposition ensemble") {
  SUBCASE("zero sigma sits on the floor") {
    const auto r = sample_pre_deposition(1000, {0.0, Frame::Defect}, kParams, kSeed);
    for (const auto& s : r.samples) CHECK(s.gss_ghz == 46.0);
  }
  SUBCASE("every splitting respects the floor") {
    for (Frame frame : {Frame::Defect, Frame::Crystal}) {
      const auto r = sample_pre_deposition(20000, {3e-5, frame}, kParams, kSeed);
      for (const auto& s : r.samples) REQUIRE(s.gss_ghz >= 46.0);
      CHECK(r.samples.front().strain.frame() == Frame::Crystal);
    }
  }
  SUBCASE("thread count never changes the output") {
    const auto a = sample_pre_deposition(50000, {1.9e-5, Frame::Defect}, kParams, kSeed, {1, 0});
    const auto b = sample_pre_deposition(50000, {1.9e-5, Frame::Defect}, kParams, kSeed, {4, 0});
    CHECK(same_samples(a, b));
  }
  SUBCASE("summary is recomputable from samples") {
    const auto r = sample_pre_deposition(10000, {1.9e-5, Frame::Defect}, kParams, kSeed);
    const auto s = summarize(r.samples);
    CHECK(s.mean == r.summary.mean);
    CHECK(s.std == r.summary.std);
    CHECK(s.histogram.densities == r.summary.histogram.densities);
    CHECK(s.histogram.integral() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("errors") {
    CHECK(code_of([] { sample_pre_deposition(0, {1e-5, Frame::Defect}, kParams, kSeed); }) ==
          ErrorCode::EmptyRequest);
    CHECK(code_of([] { sample_pre_deposition(10, {-1e-5, Frame::Defect}, kParams, kSeed); }) ==
          ErrorCode::InvalidParameter);
    CHECK(code_of([] { summarize({}); }) == ErrorCode::EmptyRequest);
  }
}

TEST_CASE("post-deposition ensemble") {
  const auto field = solve_beam_state(kStack.with_film_stress(700.0));
  SUBCASE("zero stress without intrinsic strain sits on the floor") {
    const auto zero = solve_beam_state(kStack.with_film_stress(0.0));
    const auto r = sample_post_deposition(2000, kPost, kStack.section, zero, kParams, kSeed);
    for (const auto& s : r.samples) CHECK(s.gss_ghz == 46.0);
  }
  SUBCASE("sites lie inside the section and the aperture") {
    const auto r = sample_post_deposition(20000, kPost, kStack.section, field, kParams, kSeed);
    for (const auto& s : r.samples) {
      REQUIRE(kStack.section.contains({s.x_nm, kStack.section.top_nm() - s.depth_nm}));
      REQUIRE(std::abs(s.x_nm) <= 30.0);
      REQUIRE(std::abs(s.y_nm) <= 30.0);
      REQUIRE(s.orientation_id >= 0);
      REQUIRE(s.orientation_id < 4);
      REQUIRE(s.gss_ghz >= 46.0);
    }
  }
  SUBCASE("thread count never changes the output") {
    PostDepositionModel with_intrinsic = kPost;
    with_intrinsic.include_intrinsic = true;
    with_intrinsic.intrinsic = {1.9e-5, Frame::Defect};
    const auto a = sample_post_deposition(30000, with_intrinsic, kStack.section, field, kParams, kSeed, {1, 0});
    const auto b = sample_post_deposition(30000, with_intrinsic, kStack.section, field, kParams, kSeed, {3, 0});
    CHECK(same_samples(a, b));
  }
  SUBCASE("placement that keeps missing the substrate is reported") {
    PostDepositionModel deep = kPost;
    deep.positions.depth_mean_nm = 1000.0;
    deep.positions.depth_straggle_nm = 1.0;
    CHECK(code_of([&] { sample_post_deposition(10, deep, kStack.section, field, kParams, kSeed); }) ==
          ErrorCode::DegenerateGeometry);
  }
}

TEST_CASE("calibrate_sigma") {
  CHECK(calibrate_sigma(46.0, 5000, kSeed, kParams) == 0.0);
  CHECK(code_of([] { calibrate_sigma(45.0, 5000, kSeed, kParams); }) == ErrorCode::Infeasible);
  const double a = calibrate_sigma(119.0, 20000, kSeed, kParams);
  const double b = calibrate_sigma(119.0, 20000, kSeed, kParams, Frame::Defect, 3);
  CHECK(a == b);
  const auto r = sample_pre_deposition(20000, {a, Frame::Defect}, kParams, kSeed);
  CHECK(r.summary.mean == doctest::Approx(119.0).epsilon(1e-6));
}

TEST_CASE("calibrate_film_stress") {
  constexpr std::size_t n = 20000;
  CHECK(calibrate_film_stress(46.0, kStack, kPost, kParams, n, kSeed) == 0.0);
  CHECK(code_of([&] { calibrate_film_stress(30.0, kStack, kPost, kParams, n, kSeed); }) == ErrorCode::Infeasible);
  const double s60 = calibrate_film_stress(608.0, kStack, kPost, kParams, n, kSeed);
  LayerStack thick = kStack;
  thick.film.thickness_nm = 120.0;
  const double s120 = calibrate_film_stress(608.0, thick, kPost, kParams, n, kSeed);
  CHECK(s60 > 0.0);
  CHECK(s120 < s60);
  const auto r =
      sample_post_deposition(n, kPost, kStack.section, solve_beam_state(kStack.with_film_stress(s60)), kParams, kSeed);
  CHECK(r.summary.mean == doctest::Approx(608.0).epsilon(1e-6));
}

TEST_CASE("property: ensemble mean is monotone under common random numbers") {
  double prev = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double m = sample_pre_deposition(5000, {k * 2e-6, Frame::Defect}, kParams, kSeed).summary.mean;
    CHECK(m >= prev);
    prev = m;
  }
  prev = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const auto f = solve_beam_state(kStack.with_film_stress(k * 50.0));
    const double m = sample_post_deposition(5000, kPost, kStack.section, f, kParams, kSeed).summary.mean;
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("property: doubling n moves the mean by less than 3 std / sqrt(n)") {
  const auto field = solve_beam_state(kStack.with_film_stress(770.0));
  for (std::size_t n : {50000u, 100000u}) {
    const auto a = sample_pre_deposition(n, {1.9e-5, Frame::Defect}, kParams, kSeed);
    const auto b = sample_pre_deposition(2 * n, {1.9e-5, Frame::Defect}, kParams, kSeed + 1);
    CHECK(std::abs(a.summary.mean - b.summary.mean) < 3 * a.summary.std / std::sqrt(double(n)));
    const auto c = sample_post_deposition(n, kPost, kStack.section, field, kParams, kSeed);
    const auto d = sample_post_deposition(2 * n, kPost, kStack.section, field, kParams, kSeed + 1);
    CHECK(std::abs(c.summary.mean - d.summary.mean) < 3 * c.summary.std / std::sqrt(double(n)));
  }
}

TEST_CASE("property: post-deposition splittings dominate above 200 GHz") {
  constexpr std::size_t n = 100000;
  const double sigma = calibrate_sigma(119.0, n, kSeed, kParams);
  const double stress = calibrate_film_stress(608.0, kStack, kPost, kParams, n, kSeed);
  const auto pre = sample_pre_deposition(n, {sigma, Frame::Defect}, kParams, kSeed);
  const auto post = sample_post_deposition(n, kPost, kStack.section, solve_beam_state(kStack.with_film_stress(stress)),
                                           kParams, kSeed);
  for (double g = 200.0; g <= 3000.0; g += 25.0) {
    CAPTURE(g);
    CHECK(post.summary.cdf(g) <= pre.summary.cdf(g));
  }
}
