#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "strainforge/errors.hpp"
#include "strainforge/thermal.hpp"

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

}  // namespace

TEST_CASE("thermal occupation") {
  // x = ln 2 gives exactly one phonon.
  const double t = 1.0;
  const double g = std::log(2.0) * t / kKelvinPerGhz;
  CHECK(thermal_occupation(g, t) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(thermal_occupation(51.0 / kKelvinPerGhz, 1.0) < 1e-21);
  CHECK(thermal_occupation(554.0, 1.5) == doctest::Approx(1.0 / std::expm1(554.0 * 0.0479924307 / 1.5)).epsilon(1e-8));
  CHECK(thermal_occupation(554.0, 1.5) == doctest::Approx(2.0e-8).epsilon(0.01));
  // Boltzmann and Bose-Einstein agree near the reference point.
  CHECK(thermal_occupation(554.0, 1.5, OccupationModel::Boltzmann) ==
        doctest::Approx(thermal_occupation(554.0, 1.5)).epsilon(1e-7));
  CHECK(code_of([] { thermal_occupation(0.0, 1.0); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { thermal_occupation(10.0, -1.0); }) == ErrorCode::InvalidDomain);
}

TEST_CASE("relative upward rate") {
  CHECK(gamma_up_relative(554.0, 1.5) == 1.0);
  CHECK(gamma_up_relative(554.0, 3.0) > 1.0);
  const double ratio = 8.0 * thermal_occupation(1108.0, 1.5) / thermal_occupation(554.0, 1.5);
  CHECK(gamma_up_relative(1108.0, 1.5) == doctest::Approx(ratio).epsilon(1e-9));
  CHECK(gamma_up_relative(1108.0, 1.5) == doctest::Approx(1.6037e-7).epsilon(1e-3));
}

TEST_CASE("operational temperature") {
  CHECK(std::abs(operational_temperature(554.0) - 1.5) < 1e-9);
  CHECK(operational_temperature(608.0) > 1.5);
  const double t46 = operational_temperature(46.0);
  CHECK(t46 == doctest::Approx(oracle::top_bisection(46.0)).epsilon(1e-8));
  // High-precision evaluation of the same equation.
  CHECK(t46 == doctest::Approx(0.215177672549).epsilon(1e-9));
  CHECK(code_of([] { operational_temperature(-5.0); }) == ErrorCode::InvalidDomain);
  // Root below the bracket.
  CHECK(code_of([] { operational_temperature(1e-6); }) == ErrorCode::InvalidDomain);

  ThermalReference other{300.0, 0.8, OccupationModel::BoseEinstein};
  CHECK(std::abs(operational_temperature(300.0, other) - 0.8) < 1e-9);
  ThermalReference boltz{554.0, 1.5, OccupationModel::Boltzmann};
  CHECK(operational_temperature(1108.0, boltz) == doctest::Approx(operational_temperature(1108.0)).epsilon(1e-6));
}

TEST_CASE("property: monotone and self-consistent on a 100-point grid") {
  double prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double g = 46.0 + 30.0 * i;
    const double t = operational_temperature(g);
    CHECK(t > prev);
    CHECK(gamma_up_relative(g, t) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(t == doctest::Approx(oracle::top_bisection(g)).epsilon(1e-8));
    prev = t;
  }
}

TEST_CASE("operability curve") {
  const std::vector<double> at_ref(50, 554.0);
  const std::vector<double> temps{1.0, 1.5};
  const auto c = operability_curve(at_ref, temps);
  CHECK(c[0].probability == 1.0);
  CHECK(c[1].probability == 1.0);

  std::vector<double> gss;
  for (int i = 0; i < 500; ++i) gss.push_back(46.0 + 3.0 * i);
  std::vector<double> grid;
  for (int k = 1; k <= 80; ++k) grid.push_back(k / 20.0);
  const auto curve = operability_curve(gss, grid, {}, 2);
  REQUIRE(curve.size() == grid.size());
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k].probability <= curve[k - 1].probability);
  const auto tops = operational_temperatures(gss);
  CHECK(tops == operational_temperatures(gss, {}, 4));
  std::size_t above = 0;
  for (double t : tops) above += t >= 1.5;
  CHECK(curve[29].temp_k == 1.5);
  CHECK(curve[29].probability == double(above) / gss.size());
}
