#pragma once

// Photoluminescence spectrum ingestion, peak finding and ground-state
// splitting extraction from single-emitter spectra.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strainforge/statistics.hpp"

namespace strainforge {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr std::size_t kMinSpectrumPoints = 16;

struct SpectrumPoint {
  double frequency_ghz = 0.0;
  double intensity = 0.0;

  bool operator==(const SpectrumPoint&) const = default;
};

struct Spectrum {
  std::vector<SpectrumPoint> points;  // strictly increasing frequency
  std::string label;
  std::string batch_tag;
  // Axis as read from the source, e.g. "frequency_ghz" or "wavelength_nm->frequency_ghz".
  std::string axis_source = "frequency_ghz";

  void validate() const;
};

struct Peak {
  double center_ghz = 0.0;
  double height = 0.0;
  double prominence = 0.0;
  double width_ghz = 0.0;  // full width at half prominence
};

struct PeakDetectionParams {
  std::size_t smoothing_window = 5;      // odd point count
  double min_prominence_fraction = 0.1;  // of the smoothed maximum

  void validate() const;
};

struct EmitterAssignment {
  std::vector<Peak> peaks;
  bool is_single_emitter = false;
  std::optional<double> gss_ghz;
};

// Two-column CSV. An optional header selects the axis: frequency_ghz,
// frequency_thz or wavelength_nm (converted to GHz). Without a header the
// first column is GHz. Blank lines and '#' comments are skipped.
Spectrum load_spectrum(std::istream& in, const std::string& label = {});
Spectrum load_spectrum_file(const std::filesystem::path& path);

// frequency_ghz,intensity with round-trip precision.
void write_spectrum(std::ostream& out, const Spectrum& s);

// Centered moving average; windows are truncated at the ends.
std::vector<double> moving_average(const std::vector<double>& y, std::size_t window);

std::vector<Peak> detect_peaks(const Spectrum& s, const PeakDetectionParams& params = {});

EmitterAssignment classify_and_extract(std::vector<Peak> peaks);

struct PooledTransitions {
  std::vector<double> centers_ghz;
  Histogram histogram;
};

// Peak centres of every spectrum pooled per batch tag.
std::map<std::string, PooledTransitions> pool_transitions(const std::vector<Spectrum>& batch,
                                                          const PeakDetectionParams& params = {},
                                                          std::size_t histogram_bins = 0);

struct GssBatchStats {
  std::size_t n = 0;
  double mean_ghz = 0.0;
  double std_ghz = 0.0;
  double sem_ghz = 0.0;
  std::vector<double> gss_ghz;
};

GssBatchStats batch_gss_stats(const std::vector<Spectrum>& batch, const PeakDetectionParams& params = {});

}  // namespace strainforge
