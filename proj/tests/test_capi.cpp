#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strainforge/strainforge.h"

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Context {
  sf_context* ptr = nullptr;
  explicit Context(const char* json = nullptr) {
    const sf_status s = json ? sf_context_create_from_json(json, &ptr) : sf_context_create(nullptr, &ptr);
    REQUIRE(s == SF_OK);
  }
  ~Context() { sf_context_destroy(ptr); }
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("strainforge_capi_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(sf_version()) == "1.0.0");
  CHECK(std::string(sf_status_name(SF_OK)) == "Ok");
  CHECK(std::string(sf_status_name(SF_ERR_INVALID_DOMAIN)) == "InvalidDomain");
}

TEST_CASE("context creation") {
  Context ctx;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  CHECK(sf_context_default_seed(ctx.ptr, &seed) == SF_OK);
  CHECK(sf_context_default_n(ctx.ptr, &n) == SF_OK);
  CHECK(n == 1000000);
  // The shipped geometry carries a thick film.
  CHECK(sf_context_warning_count(ctx.ptr) >= 1);
  CHECK(sf_context_warning(ctx.ptr, 1000) == nullptr);

  sf_context* bad = nullptr;
  CHECK(sf_context_create_from_json("{not json", &bad) == SF_ERR_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::string(sf_last_error()).size() > 0);
  CHECK(sf_context_create_from_json(R"({"schema_version": 1, "bogus": 1})", &bad) == SF_ERR_CONFIG);
  CHECK(sf_context_create("/nonexistent/config.json", &bad) != SF_OK);
  CHECK(sf_context_create(nullptr, nullptr) == SF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("environment fallback for the config path") {
  const fs::path dir = scratch("env");
  std::ofstream(dir / "c.json") << R"({"schema_version": 1, "siv": {"lambda_so_ghz": 50.0}})";
  ::setenv("STRAINFORGE_CONFIG", (dir / "c.json").c_str(), 1);
  sf_context* ctx = nullptr;
  REQUIRE(sf_context_create(nullptr, &ctx) == SF_OK);
  ::unsetenv("STRAINFORGE_CONFIG");
  const double zero[6] = {0, 0, 0, 0, 0, 0};
  double g = 0;
  CHECK(sf_ground_state_splitting(ctx, zero, SF_FRAME_CRYSTAL, 0, &g) == SF_OK);
  CHECK(g == 50.0);
  sf_context_destroy(ctx);
}

TEST_CASE("point evaluations") {
  Context ctx;
  const double zero[6] = {0, 0, 0, 0, 0, 0};
  double g = 0;
  CHECK(sf_ground_state_splitting(ctx.ptr, zero, SF_FRAME_CRYSTAL, 3, &g) == SF_OK);
  CHECK(g == 46.0);
  const double xx[6] = {1e-4, 0, 0, 0, 0, 0};
  CHECK(sf_ground_state_splitting(ctx.ptr, xx, SF_FRAME_DEFECT, 0, &g) == SF_OK);
  CHECK(g == doctest::Approx(std::sqrt(46.0 * 46.0 + 4 * 130.0 * 130.0)));
  CHECK(sf_ground_state_splitting(ctx.ptr, xx, SF_FRAME_CRYSTAL, 4, &g) == SF_ERR_INVALID_ARGUMENT);
  CHECK(sf_ground_state_splitting(ctx.ptr, xx, SF_FRAME_BEAM, 0, &g) == SF_ERR_FRAME_MISMATCH);

  double t = 0;
  CHECK(sf_operational_temperature(ctx.ptr, 554.0, &t) == SF_OK);
  CHECK(std::abs(t - 1.5) < 1e-9);
  CHECK(sf_operational_temperature(ctx.ptr, -5.0, &t) == SF_ERR_INVALID_DOMAIN);
  CHECK(std::string(sf_last_error()).find("InvalidDomain") != std::string::npos);
  double r = 0;
  CHECK(sf_gamma_up_relative(ctx.ptr, 554.0, 1.5, &r) == SF_OK);
  CHECK(r == 1.0);
}

TEST_CASE("depth profile") {
  Context ctx;
  const fs::path dir = scratch("profile");
  CHECK(sf_mechanics_depth_profile(ctx.ptr, kNaN, 5.0, (dir / "p.csv").c_str()) == SF_OK);
  const std::string text = slurp(dir / "p.csv");
  CHECK(text.rfind("depth_nm,eps_xx,eps_yy,eps_zz\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 28);
  CHECK(sf_mechanics_depth_profile(ctx.ptr, kNaN, 0.0, (dir / "q.csv").c_str()) != SF_OK);
}

TEST_CASE("ensembles") {
  Context ctx;
  sf_ensemble* e = nullptr;
  CHECK(sf_sample(ctx.ptr, SF_PHASE_PRE, 0, 1, kNaN, &e) == SF_ERR_EMPTY_REQUEST);
  REQUIRE(sf_sample(ctx.ptr, SF_PHASE_PRE, 2000, 1, 0.0, &e) == SF_OK);
  sf_summary s{};
  CHECK(sf_ensemble_summary(e, &s) == SF_OK);
  CHECK(s.n == 2000);
  CHECK(s.mean_ghz == 46.0);
  sf_ensemble_destroy(e);

  REQUIRE(sf_sample(ctx.ptr, SF_PHASE_POST, 3000, 9, kNaN, &e) == SF_OK);
  CHECK(sf_ensemble_size(e) == 3000);
  std::vector<double> gss(3000);
  CHECK(sf_ensemble_gss(e, gss.data(), gss.size()) == SF_OK);
  CHECK(*std::min_element(gss.begin(), gss.end()) >= 46.0);
  char* json = nullptr;
  REQUIRE(sf_ensemble_summary_json(e, &json) == SF_OK);
  const auto j = nlohmann::json::parse(json);
  sf_string_free(json);
  CHECK(sf_ensemble_summary(e, &s) == SF_OK);
  CHECK(j.at("mean_ghz").get<double>() == s.mean_ghz);

  const fs::path dir = scratch("ensemble");
  CHECK(sf_ensemble_write_csv(e, (dir / "s.csv").c_str()) == SF_OK);
  const std::string text = slurp(dir / "s.csv");
  CHECK(text.rfind("index,x_nm,y_nm,depth_nm,orientation_id,eps_xx,eps_yy,eps_zz,eps_xy,eps_yz,eps_zx,gss_ghz\n", 0) ==
        0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3001);
  sf_ensemble_destroy(e);
}

TEST_CASE("calibration") {
  Context ctx;
  double sigma = 0;
  CHECK(sf_calibrate(ctx.ptr, SF_CALIBRATE_SIGMA, 119.0, 20000, 5, &sigma) == SF_OK);
  CHECK(sigma == doctest::Approx(1.9e-5).epsilon(0.25));
  CHECK(sf_calibrate(ctx.ptr, SF_CALIBRATE_SIGMA, 40.0, 20000, 5, &sigma) == SF_ERR_INFEASIBLE);
  double stress = 0;
  CHECK(sf_calibrate(ctx.ptr, SF_CALIBRATE_STRESS, 46.0, 20000, 5, &stress) == SF_OK);
  CHECK(stress == 0.0);
}

TEST_CASE("report and spectra jobs") {
  Context ctx;
  const fs::path out = scratch("report");
  REQUIRE(sf_report(ctx.ptr, 3, 20000, out.c_str()) == SF_OK);
  for (const char* f : {"gss_pdf.csv", "top_vs_gss.csv", "operability.csv", "summary.json"})
    CHECK(fs::exists(out / f));
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary.at("schema_version") == 1);
  CHECK(summary.at("n") == 20000);
  CHECK(summary.at("pre_mean_ghz").get<double>() == doctest::Approx(119.0).epsilon(1e-6));
  CHECK(summary.at("post_mean_ghz").get<double>() == doctest::Approx(608.0).epsilon(1e-6));

  const fs::path spectra = scratch("spectra");
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.04);
  for (int k = 0; k < 3; ++k) {
    std::ofstream f(spectra / ("s" + std::to_string(k) + ".csv"));
    f << "frequency_ghz,intensity\n";
    for (int i = 0; i < 600; ++i) {
      const double x = 406000.0 + i;
      const double y = 16.0 / ((x - 406100) * (x - 406100) + 16.0) + 16.0 / ((x - 406300 - 50 * k) * (x - 406300 - 50 * k) + 16.0);
      f << x << "," << std::max(0.0, y + noise(rng)) << "\n";
    }
  }
  const fs::path json = spectra / "result.json";
  CHECK(sf_spectra_analyze(ctx.ptr, spectra.c_str(), "post", json.c_str(), (spectra / "hist.csv").c_str()) == SF_OK);
  const auto r = nlohmann::json::parse(slurp(json));
  CHECK(r.at("gss_summary").at("n") == 3);
  CHECK(r.at("gss_summary").at("mean_ghz").get<double>() == doctest::Approx(250.0).epsilon(0.01));
  CHECK(fs::exists(spectra / "hist.csv"));
  CHECK(sf_spectra_analyze(ctx.ptr, "/nonexistent/dir", "x", json.c_str(), nullptr) != SF_OK);
}

TEST_CASE("null handles are rejected") {
  double x = 0;
  CHECK(sf_operational_temperature(nullptr, 554.0, &x) == SF_ERR_INVALID_ARGUMENT);
  CHECK(sf_ensemble_size(nullptr) == 0);
  CHECK(sf_ensemble_summary(nullptr, nullptr) == SF_ERR_INVALID_ARGUMENT);
  sf_context_destroy(nullptr);
  sf_ensemble_destroy(nullptr);
  sf_string_free(nullptr);
}
