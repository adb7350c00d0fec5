#include "strainforge/pipeline.hpp"

#include <algorithm>
#include <vector>

#include <fmt/format.h>

#include "strainforge/errors.hpp"
#include "strainforge/io.hpp"
#include "strainforge/thermal.hpp"

namespace strainforge {

using nlohmann::json;

json ReportSummary::to_json() const {
  return json{
      {"schema_version", kSummarySchemaVersion},
      {"seed", seed},
      {"n", n},
      {"calibrated_sigma", calibrated_sigma},
      {"calibrated_stress_mpa", calibrated_stress_mpa},
      {"pre_mean_ghz", pre_mean_ghz},
      {"pre_std_ghz", pre_std_ghz},
      {"pre_sem_ghz", pre_sem_ghz},
      {"post_mean_ghz", post_mean_ghz},
      {"post_std_ghz", post_std_ghz},
      {"post_sem_ghz", post_sem_ghz},
      {"post_median_strain_magnitude", post_median_strain_magnitude},
      {"pre_p_top_ge_1p5k", pre_p_top_ge_1p5k},
      {"pre_p_top_ge_2p0k", pre_p_top_ge_2p0k},
      {"p_top_ge_1p5k", p_top_ge_1p5k},
      {"p_top_ge_2p0k", p_top_ge_2p0k},
  };
}

namespace {

std::vector<double> common_edges(const std::vector<double>& a, const std::vector<double>& b, std::size_t bins) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  if (bins == 0) return freedman_diaconis_edges(pooled);
  const auto [mn, mx] = std::minmax_element(pooled.begin(), pooled.end());
  const double lo = *mn, hi = *mx > *mn ? *mx : *mn + 1.0;
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  edges.back() = hi;
  return edges;
}

}  // namespace

ReportSummary run_report(const Config& config, const ReportOptions& options, const std::filesystem::path& out_dir) {
  const std::size_t n = options.n == 0 ? config.monte_carlo.n : options.n;
  const std::uint64_t seed = options.seed;
  const unsigned threads = options.threads;
  const SamplingOptions sampling{threads, config.histogram_bins};

  ReportSummary summary;
  summary.seed = seed;
  summary.n = n;

  summary.calibrated_sigma = calibrate_sigma(config.monte_carlo.target_pre_mean_ghz, n, seed, config.siv,
                                             config.intrinsic.sample_frame, threads);
  const EnsembleResult pre = sample_pre_deposition(
      n, IntrinsicStrainModel{summary.calibrated_sigma, config.intrinsic.sample_frame}, config.siv, seed, sampling);

  summary.calibrated_stress_mpa = calibrate_film_stress(config.monte_carlo.target_post_mean_ghz, config.stack,
                                                        config.post, config.siv, n, seed, threads);
  const LayerStack stack = config.stack.with_film_stress(summary.calibrated_stress_mpa);
  const EnsembleResult post = sample_post_deposition(n, config.post, stack.section, solve_beam_state(stack),
                                                     config.siv, seed, sampling);

  summary.pre_mean_ghz = pre.summary.mean;
  summary.pre_std_ghz = pre.summary.std;
  summary.pre_sem_ghz = pre.summary.sem;
  summary.post_mean_ghz = post.summary.mean;
  summary.post_std_ghz = post.summary.std;
  summary.post_sem_ghz = post.summary.sem;
  {
    std::vector<double> mags;
    mags.reserve(post.samples.size());
    for (const auto& s : post.samples) mags.push_back(s.strain.magnitude());
    summary.post_median_strain_magnitude = EmpiricalCdf(std::move(mags)).quantile(0.5);
  }

  const std::vector<double> pre_gss = pre.gss_values();
  const std::vector<double> post_gss = post.gss_values();

  // Densities on one shared grid.
  const std::vector<double> edges = common_edges(pre_gss, post_gss, config.histogram_bins);
  const Histogram pre_hist = histogram_from_edges(pre_gss, edges);
  const Histogram post_hist = histogram_from_edges(post_gss, edges);
  std::string pdf = "bin_lo_ghz,bin_hi_ghz,bin_center_ghz,pre_density,post_density\n";
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    pdf += fmt::format("{},{},{},{},{}\n", edges[i], edges[i + 1], 0.5 * (edges[i] + edges[i + 1]),
                       pre_hist.densities[i], post_hist.densities[i]);

  std::string top_curve = "gss_ghz,top_k\n";
  std::vector<double> gss_grid{config.siv.lambda_so_ghz};
  for (int g = 50; g <= 3000; g += 10)
    if (g > config.siv.lambda_so_ghz) gss_grid.push_back(g);
  for (double g : gss_grid) top_curve += fmt::format("{},{}\n", g, operational_temperature(g, config.thermal));

  std::vector<double> temps;
  for (int k = 1; k <= 80; ++k) temps.push_back(k / 20.0);
  const auto pre_curve =
      operability_from_temperatures(operational_temperatures(pre_gss, config.thermal, threads), temps);
  const auto post_curve =
      operability_from_temperatures(operational_temperatures(post_gss, config.thermal, threads), temps);
  std::string operability = "temp_k,p_pre,p_post\n";
  for (std::size_t i = 0; i < temps.size(); ++i) {
    operability += fmt::format("{},{},{}\n", temps[i], pre_curve[i].probability, post_curve[i].probability);
    if (temps[i] == 1.5) {
      summary.pre_p_top_ge_1p5k = pre_curve[i].probability;
      summary.p_top_ge_1p5k = post_curve[i].probability;
    } else if (temps[i] == 2.0) {
      summary.pre_p_top_ge_2p0k = pre_curve[i].probability;
      summary.p_top_ge_2p0k = post_curve[i].probability;
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory " + out_dir.string());
  write_file_atomic(out_dir / "gss_pdf.csv", pdf);
  write_file_atomic(out_dir / "top_vs_gss.csv", top_curve);
  write_file_atomic(out_dir / "operability.csv", operability);
  write_file_atomic(out_dir / "summary.json", summary.to_json().dump(2) + "\n");
  return summary;
}

json run_spectra_batch(const Config& config, const std::filesystem::path& dir, const std::string& batch_tag,
                       const std::filesystem::path& out_json, const std::filesystem::path& histogram_csv) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::EmptyRequest, "no .csv spectra in " + dir.string());

  const PeakDetectionParams& detection = config.spectra.detection;
  std::vector<Spectrum> batch;
  json records = json::array();
  for (const auto& path : files) {
    Spectrum s = load_spectrum_file(path);
    s.batch_tag = batch_tag;
    const EmitterAssignment a = classify_and_extract(detect_peaks(s, detection));
    json peaks = json::array();
    for (const auto& p : a.peaks)
      peaks.push_back({{"center_ghz", p.center_ghz},
                       {"height", p.height},
                       {"prominence", p.prominence},
                       {"width_ghz", p.width_ghz}});
    records.push_back({{"file", path.filename().string()},
                       {"axis_source", s.axis_source},
                       {"n_points", s.points.size()},
                       {"peaks", peaks},
                       {"is_single_emitter", a.is_single_emitter},
                       {"gss_ghz", a.gss_ghz ? json(*a.gss_ghz) : json(nullptr)}});
    batch.push_back(std::move(s));
  }

  const GssBatchStats stats = batch_gss_stats(batch, detection);
  const auto pooled = pool_transitions(batch, detection, config.spectra.histogram_bins);

  std::string hist = "batch_tag,bin_lo_ghz,bin_hi_ghz,density\n";
  for (const auto& [tag, entry] : pooled)
    for (std::size_t i = 0; i < entry.histogram.bins(); ++i)
      hist += fmt::format("{},{},{},{}\n", tag, entry.histogram.edges[i], entry.histogram.edges[i + 1],
                          entry.histogram.densities[i]);

  json out{
      {"schema_version", kSummarySchemaVersion},
      {"batch_tag", batch_tag},
      {"detection",
       {{"smoothing_window", detection.smoothing_window},
        {"min_prominence_fraction", detection.min_prominence_fraction}}},
      {"spectra", records},
      {"gss_summary",
       {{"n", stats.n}, {"mean_ghz", stats.mean_ghz}, {"std_ghz", stats.std_ghz}, {"sem_ghz", stats.sem_ghz}}},
  };
  write_file_atomic(out_json, out.dump(2) + "\n");
  write_file_atomic(histogram_csv, hist);
  return out;
}

}  // namespace strainforge
