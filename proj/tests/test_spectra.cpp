#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "strainforge/errors.hpp"
#include "strainforge/spectra.hpp"

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

std::string ramp_csv(bool descending, const std::string& header = "frequency_ghz,intensity") {
  std::ostringstream out;
  out << header << "\n";
  for (int i = 0; i < 20; ++i) {
    const int k = descending ? 19 - i : i;
    out << 406000 + 10 * k << "," << (k % 7) * 1.5 << "\n";
  }
  return out.str();
}

Spectrum lines(const std::vector<oracle::Line>& l, double f0, double f1, double snr, std::uint64_t seed,
               const std::string& tag = {}) {
  std::mt19937_64 rng(seed);
  return oracle::to_spectrum(oracle::lorentzians(l, f0, f1, 1.0, snr, 0.0, rng), "", tag);
}

Peak peak_at(double c) { return Peak{c, 1.0, 1.0, 10.0}; }

}  // namespace

TEST_CASE("load_spectrum") {
  SUBCASE("well formed") {
    std::istringstream in(ramp_csv(false));
    const auto s = load_spectrum(in, "ramp");
    CHECK(s.points.size() == 20);
    CHECK(s.points[3].frequency_ghz == 406030.0);
    CHECK(s.points[3].intensity == 4.5);
    CHECK(s.axis_source == "frequency_ghz");
  }
  SUBCASE("descending input is sorted") {
    std::istringstream a(ramp_csv(false)), b(ramp_csv(true));
    CHECK(load_spectrum(a).points == load_spectrum(b).points);
  }
  SUBCASE("headerless, comments and blank lines") {
    std::string text = "# exported\n\n" + ramp_csv(false).substr(std::string("frequency_ghz,intensity\n").size());
    std::istringstream in(text);
    CHECK(load_spectrum(in).points.size() == 20);
  }
  SUBCASE("non-numeric row names its line") {
    std::string text = ramp_csv(false);
    text.insert(text.find("406050"), "406045,abc\n");
    std::istringstream in(text);
    try {
      load_spectrum(in, "bad");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
  }
  SUBCASE("duplicate frequency") {
    std::string text = ramp_csv(false) + "406050,1\n";
    std::istringstream in(text);
    CHECK(code_of([&] { load_spectrum(in); }) == ErrorCode::DuplicateAbscissa);
  }
  SUBCASE("too few points") {
    std::istringstream in("1,1\n2,2\n3,3\n");
    CHECK(code_of([&] { load_spectrum(in); }) == ErrorCode::InvalidParameter);
  }
  SUBCASE("wavelength and THz axes") {
    std::ostringstream out;
    out << "wavelength_nm,intensity\n";
    for (int i = 0; i < 20; ++i) out << 737.0 + 0.01 * i << ",1\n";
    std::istringstream in(out.str());
    const auto s = load_spectrum(in);
    CHECK(s.axis_source == "wavelength_nm->frequency_ghz");
    CHECK(s.points.back().frequency_ghz == doctest::Approx(299792458.0 / 737.0).epsilon(1e-14));
    std::istringstream thz(ramp_csv(false, "frequency_thz,intensity"));
    CHECK(load_spectrum(thz).points.front().frequency_ghz == 406000e3);
  }
}

TEST_CASE("parser round trip is bit exact") {
  auto s = lines({{406600.123, 7.3, 1.0}, {406712.9, 9.1, 0.7}}, 406500, 406800, 15, 3);
  std::ostringstream out;
  write_spectrum(out, s);
  std::istringstream in(out.str());
  CHECK(load_spectrum(in).points == s.points);
}

TEST_CASE("detect_peaks on synthetic traces") {
  SUBCASE("single Gaussian") {
    Spectrum s;
    const double c = 406633.3;
    for (int i = 0; i < 400; ++i) {
      const double f = 406500.0 + i;
      s.points.push_back({f, 100.0 * std::exp(-0.5 * (f - c) * (f - c) / 36.0)});
    }
    const auto p = detect_peaks(s);
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p[0].center_ghz - c) < 1.0);
    CHECK(p[0].width_ghz == doctest::Approx(2.3548 * 6).epsilon(0.05));
  }
  SUBCASE("flat trace") {
    Spectrum s;
    for (int i = 0; i < 100; ++i) s.points.push_back({1.0 * i, 5.0});
    CHECK(detect_peaks(s).empty());
  }
  SUBCASE("four Lorentzians spaced 50 GHz at SNR 20") {
    const std::vector<oracle::Line> truth = {
        {406600, 8, 1.0}, {406650, 10, 0.8}, {406700, 9, 0.9}, {406750, 8, 0.75}};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto p = detect_peaks(lines(truth, 406500, 406850, 20, seed));
      CAPTURE(seed);
      REQUIRE(p.size() == 4);
      for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(p[k].center_ghz - truth[k].center_ghz) < truth[k].fwhm_ghz / 2);
    }
  }
  SUBCASE("window must be shorter than the trace") {
    Spectrum s;
    for (int i = 0; i < 16; ++i) s.points.push_back({1.0 * i, 1.0});
    CHECK(code_of([&] { detect_peaks(s, {17, 0.1}); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { detect_peaks(s, {4, 0.1}); }) == ErrorCode::InvalidParameter);
  }
}

TEST_CASE("property: rescaling intensity keeps the peak count") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = lines({{1000, 10, 1}, {1080, 12, 0.6}, {1130, 8, 0.4}}, 900, 1300, 12, seed);
    const auto ref = detect_peaks(s).size();
    for (double k : {1e-3, 7.0, 1e6}) {
      Spectrum t = s;
      for (auto& p : t.points) p.intensity *= k;
      CHECK(detect_peaks(t).size() == ref);
    }
  }
}

TEST_CASE("property: mirrored trace gives mirrored centres") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = lines({{1000, 10, 1}, {1060, 12, 0.6}, {1200, 8, 0.8}}, 900, 1300, 15, seed);
    Spectrum m;
    const double pivot = s.points.front().frequency_ghz + s.points.back().frequency_ghz;
    for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) m.points.push_back({pivot - it->frequency_ghz, it->intensity});
    const auto a = detect_peaks(s);
    const auto b = detect_peaks(m);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(b[b.size() - 1 - k].center_ghz == doctest::Approx(pivot - a[k].center_ghz).epsilon(1e-12));
      CHECK(b[b.size() - 1 - k].prominence == doctest::Approx(a[k].prominence).epsilon(1e-12));
    }
  }
}

TEST_CASE("classify_and_extract") {
  auto a = classify_and_extract({peak_at(406650), peak_at(406600)});
  CHECK(a.is_single_emitter);
  REQUIRE(a.gss_ghz.has_value());
  CHECK(*a.gss_ghz == 50.0);

  std::vector<Peak> six;
  for (int k = 0; k < 6; ++k) six.push_back(peak_at(406600 + 40 * k));
  a = classify_and_extract(six);
  CHECK(!a.is_single_emitter);
  CHECK(!a.gss_ghz.has_value());

  a = classify_and_extract({peak_at(406600)});
  CHECK(a.is_single_emitter);
  CHECK(!a.gss_ghz.has_value());
  CHECK(!classify_and_extract({}).is_single_emitter);

  // Extra lines above the second-lowest leave gss alone while the count stays <= 4.
  std::vector<Peak> p{peak_at(406600), peak_at(406710)};
  for (double extra : {406900.0, 406750.0}) {
    p.push_back(peak_at(extra));
    CHECK(*classify_and_extract(p).gss_ghz == doctest::Approx(110.0));
  }
  p.push_back(peak_at(407000));
  CHECK(!classify_and_extract(p).gss_ghz.has_value());
}

TEST_CASE("pool_transitions") {
  const auto one = lines({{1000, 10, 1}}, 900, 1100, 0, 1, "narrow");
  const std::vector<Spectrum> same(5, one);
  const auto pooled = pool_transitions(same);
  const auto& h = pooled.at("narrow").histogram;
  CHECK(pooled.at("narrow").centers_ghz.size() == 5);
  CHECK(*std::max_element(h.densities.begin(), h.densities.end()) * (h.edges[1] - h.edges[0]) ==
        doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> spread(0.0, 1.0);
  std::vector<Spectrum> batch;
  for (int i = 0; i < 40; ++i) {
    const double z = spread(rng);
    batch.push_back(lines({{1500 + 10 * z, 8, 1}}, 1000, 2000, 25, 100 + i, "tight"));
    batch.push_back(lines({{1500 + 50 * z, 8, 1}}, 1000, 2000, 25, 200 + i, "wide"));
  }
  const auto both = pool_transitions(batch);
  const auto sd = [](const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
  };
  REQUIRE(both.at("tight").centers_ghz.size() == 40);
  REQUIRE(both.at("wide").centers_ghz.size() == 40);
  CHECK(sd(both.at("wide").centers_ghz) >= 4.0 * sd(both.at("tight").centers_ghz));
  CHECK(code_of([] { pool_transitions({}); }) == ErrorCode::EmptyRequest);
}

TEST_CASE("batch_gss_stats") {
  SUBCASE("matches direct arithmetic on eleven spectra") {
    std::vector<Spectrum> batch;
    std::vector<double> truth;
    for (int k = 0; k < 11; ++k) {
      const double g = 400.0 + 40.0 * k;
      truth.push_back(g);
      batch.push_back(lines({{406000, 9, 1}, {406000 + g, 11, 0.8}}, 405800, 407000, 25, 50 + k));
    }
    const auto st = batch_gss_stats(batch);
    REQUIRE(st.n == 11);
    const double mean = std::accumulate(st.gss_ghz.begin(), st.gss_ghz.end(), 0.0) / 11.0;
    double ss = 0.0;
    for (double g : st.gss_ghz) ss += (g - mean) * (g - mean);
    CHECK(st.mean_ghz == doctest::Approx(mean).epsilon(1e-14));
    CHECK(st.std_ghz == doctest::Approx(std::sqrt(ss / 10.0)).epsilon(1e-13));
    CHECK(st.sem_ghz == doctest::Approx(st.std_ghz / std::sqrt(11.0)).epsilon(1e-14));
    for (int k = 0; k < 11; ++k) CHECK(std::abs(st.gss_ghz[k] - truth[k]) < 4.5);
  }
  SUBCASE("std 295 over eleven emitters gives an 89 GHz standard error") {
    std::vector<Spectrum> batch;
    for (int k = -5; k <= 5; ++k) {
      // Centres on the 1 GHz grid so the extracted splitting is exact.
      const double g = std::round(608.0 + 295.0 * k / std::sqrt(11.0));
      batch.push_back(lines({{406000, 9, 1}, {406000 + g, 9, 1}}, 405900, 407300, 0, 1));
    }
    const auto st = batch_gss_stats(batch);
    CHECK(std::abs(st.std_ghz - 295.0) < 1.0);
    CHECK(std::abs(st.sem_ghz - 295.0 / std::sqrt(11.0)) < 1.0);
    CHECK(std::abs(st.sem_ghz - 89.0) < 1.0);
  }
  SUBCASE("no single emitters") {
    std::vector<Spectrum> batch;
    for (int k = 0; k < 3; ++k) {
      std::vector<oracle::Line> many;
      for (int j = 0; j < 6; ++j) many.push_back({406000.0 + 60 * j, 8, 1.0});
      batch.push_back(lines(many, 405900, 406500, 25, 7 + k));
    }
    CHECK(code_of([&] { batch_gss_stats(batch); }) == ErrorCode::NoSingleEmitters);
    CHECK(code_of([] { batch_gss_stats({}); }) == ErrorCode::EmptyRequest);
  }
}
