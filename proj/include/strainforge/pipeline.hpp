#pragma once

// End-to-end jobs behind the report and spectra subcommands.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "strainforge/config.hpp"

namespace strainforge {

inline constexpr int kSummarySchemaVersion = 1;

struct ReportOptions {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  unsigned threads = 1;  // never changes the output
};

struct ReportSummary {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double calibrated_sigma = 0.0;
  double calibrated_stress_mpa = 0.0;
  double pre_mean_ghz = 0.0, pre_std_ghz = 0.0, pre_sem_ghz = 0.0;
  double post_mean_ghz = 0.0, post_std_ghz = 0.0, post_sem_ghz = 0.0;
  double post_median_strain_magnitude = 0.0;
  double pre_p_top_ge_1p5k = 0.0, pre_p_top_ge_2p0k = 0.0;
  double p_top_ge_1p5k = 0.0, p_top_ge_2p0k = 0.0;

  nlohmann::json to_json() const;
};

// Calibrates both ensembles and writes gss_pdf.csv, top_vs_gss.csv,
// operability.csv and summary.json into out_dir.
ReportSummary run_report(const Config& config, const ReportOptions& options, const std::filesystem::path& out_dir);

// Loads every *.csv in dir (sorted by file name), tags it with batch_tag and
// writes per-spectrum records plus batch statistics to out_json and the pooled
// transition histogram to histogram_csv.
nlohmann::json run_spectra_batch(const Config& config, const std::filesystem::path& dir, const std::string& batch_tag,
                                 const std::filesystem::path& out_json, const std::filesystem::path& histogram_csv);

}  // namespace strainforge
