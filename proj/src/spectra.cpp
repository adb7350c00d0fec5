#include "strainforge/spectra.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "strainforge/errors.hpp"

namespace strainforge {

void Spectrum::validate() const {
  if (points.size() < kMinSpectrumPoints)
    throw Error(ErrorCode::InvalidParameter, fmt::format("spectrum '{}' has {} points, need at least {}", label,
                                                         points.size(), kMinSpectrumPoints));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].frequency_ghz) || !std::isfinite(points[i].intensity))
      throw Error(ErrorCode::InvalidParameter, "spectrum contains non-finite values");
    if (points[i].intensity < 0.0) throw Error(ErrorCode::InvalidParameter, "spectrum intensity is negative");
    if (i > 0 && !(points[i].frequency_ghz > points[i - 1].frequency_ghz))
      throw Error(ErrorCode::InvalidParameter, "spectrum frequencies must be strictly increasing");
  }
}

void PeakDetectionParams::validate() const {
  if (smoothing_window == 0 || smoothing_window % 2 == 0)
    throw Error(ErrorCode::InvalidParameter, "smoothing window must be a positive odd point count");
  if (!(min_prominence_fraction >= 0.0 && min_prominence_fraction <= 1.0))
    throw Error(ErrorCode::InvalidParameter, "min_prominence_fraction must lie in [0, 1]");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

enum class Axis { FrequencyGhz, FrequencyThz, WavelengthNm };

}  // namespace

Spectrum load_spectrum(std::istream& in, const std::string& label) {
  Spectrum s;
  s.label = label;
  Axis axis = Axis::FrequencyGhz;
  bool seen_data_or_header = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;

    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
      throw Error(ErrorCode::ParseError, fmt::format("{}line {}: expected two comma-separated columns",
                                                     label.empty() ? "" : label + ": ", line_no));
    const std::string_view first = trim(row.substr(0, comma));
    const std::string_view second = trim(row.substr(comma + 1));

    double x = 0.0, y = 0.0;
    const bool numeric = parse_double(first, x) && parse_double(second, y);
    if (!numeric && !seen_data_or_header) {
      const std::string name = lower(first);
      if (name == "frequency_ghz") axis = Axis::FrequencyGhz;
      else if (name == "frequency_thz") axis = Axis::FrequencyThz;
      else if (name == "wavelength_nm") axis = Axis::WavelengthNm;
      else
        throw Error(ErrorCode::ParseError,
                    fmt::format("{}line {}: unknown axis column '{}'", label.empty() ? "" : label + ": ", line_no,
                                std::string(first)));
      seen_data_or_header = true;
      continue;
    }
    if (!numeric)
      throw Error(ErrorCode::ParseError, fmt::format("{}line {}: non-numeric row '{}'",
                                                     label.empty() ? "" : label + ": ", line_no, std::string(row)));
    seen_data_or_header = true;
    if (y < 0.0)
      throw Error(ErrorCode::ParseError,
                  fmt::format("{}line {}: negative intensity", label.empty() ? "" : label + ": ", line_no));
    double f = x;
    switch (axis) {
      case Axis::FrequencyGhz: break;
      case Axis::FrequencyThz: f = x * 1e3; break;
      case Axis::WavelengthNm:
        if (!(x > 0.0))
          throw Error(ErrorCode::ParseError,
                      fmt::format("{}line {}: wavelength must be positive", label.empty() ? "" : label + ": ", line_no));
        f = kSpeedOfLight / x;  // c / (lambda * 1e-9 m) in units of 1e9 Hz
        break;
    }
    s.points.push_back({f, y});
  }

  switch (axis) {
    case Axis::FrequencyGhz: s.axis_source = "frequency_ghz"; break;
    case Axis::FrequencyThz: s.axis_source = "frequency_thz->frequency_ghz"; break;
    case Axis::WavelengthNm: s.axis_source = "wavelength_nm->frequency_ghz"; break;
  }

  std::stable_sort(s.points.begin(), s.points.end(),
                   [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.frequency_ghz < b.frequency_ghz; });
  for (std::size_t i = 1; i < s.points.size(); ++i)
    if (s.points[i].frequency_ghz == s.points[i - 1].frequency_ghz)
      throw Error(ErrorCode::DuplicateAbscissa,
                  fmt::format("{}duplicate frequency {} GHz", label.empty() ? "" : label + ": ", s.points[i].frequency_ghz));
  s.validate();
  return s;
}

Spectrum load_spectrum_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return load_spectrum(in, path.filename().string());
}

void write_spectrum(std::ostream& out, const Spectrum& s) {
  out << "frequency_ghz,intensity\n";
  for (const auto& p : s.points) out << fmt::format("{},{}\n", p.frequency_ghz, p.intensity);
}

std::vector<double> moving_average(const std::vector<double>& y, std::size_t window) {
  const std::size_t n = y.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += y[k];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<Peak> detect_peaks(const Spectrum& s, const PeakDetectionParams& params) {
  params.validate();
  const std::size_t n = s.points.size();
  if (params.smoothing_window >= n)
    throw Error(ErrorCode::InvalidParameter,
                fmt::format("smoothing window {} must be smaller than the {} data points", params.smoothing_window, n));

  std::vector<double> f(n), raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = s.points[i].frequency_ghz;
    raw[i] = s.points[i].intensity;
  }
  const std::vector<double> y = moving_average(raw, params.smoothing_window);
  const double ymax = *std::max_element(y.begin(), y.end());
  if (!(ymax > 0.0)) return {};
  const double threshold = params.min_prominence_fraction * ymax;

  std::vector<Peak> peaks;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(y[i] > y[i - 1])) {
      ++i;
      continue;
    }
    // Plateau [i, j] of equal values.
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n || !(y[j + 1] < y[i])) {
      i = j + 1;
      continue;
    }

    const double h = y[i];
    double left_min = h;
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] > h) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = h;
    for (std::size_t k = j + 1; k < n; ++k) {
      if (y[k] > h) break;
      right_min = std::min(right_min, y[k]);
    }
    const double prominence = h - std::max(left_min, right_min);

    if (prominence > 0.0 && prominence >= threshold) {
      Peak p;
      p.height = h;
      p.prominence = prominence;
      if (i == j) {
        const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        double delta = denom != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
        delta = std::clamp(delta, -0.5, 0.5);
        p.center_ghz = delta >= 0.0 ? f[i] + delta * (f[i + 1] - f[i]) : f[i] + delta * (f[i] - f[i - 1]);
      } else {
        p.center_ghz = 0.5 * (f[i] + f[j]);
      }

      const double level = h - 0.5 * prominence;
      double left = f.front();
      for (std::size_t k = i; k-- > 0;) {
        if (y[k] <= level) {
          left = f[k] + (level - y[k]) / (y[k + 1] - y[k]) * (f[k + 1] - f[k]);
          break;
        }
      }
      double right = f.back();
      for (std::size_t k = j + 1; k < n; ++k) {
        if (y[k] <= level) {
          right = f[k] - (level - y[k]) / (y[k - 1] - y[k]) * (f[k] - f[k - 1]);
          break;
        }
      }
      p.width_ghz = right - left;
      peaks.push_back(p);
    }
    i = j + 1;
  }
  return peaks;
}

EmitterAssignment classify_and_extract(std::vector<Peak> peaks) {
  EmitterAssignment a;
  std::sort(peaks.begin(), peaks.end(), [](const Peak& l, const Peak& r) { return l.center_ghz < r.center_ghz; });
  a.is_single_emitter = !peaks.empty() && peaks.size() <= 4;
  // The two lowest-frequency lines are the C and D transitions.
  if (a.is_single_emitter && peaks.size() >= 2) a.gss_ghz = peaks[1].center_ghz - peaks[0].center_ghz;
  a.peaks = std::move(peaks);
  return a;
}

std::map<std::string, PooledTransitions> pool_transitions(const std::vector<Spectrum>& batch,
                                                          const PeakDetectionParams& params,
                                                          std::size_t histogram_bins) {
  if (batch.empty()) throw Error(ErrorCode::EmptyRequest, "no spectra to pool");
  std::map<std::string, PooledTransitions> pooled;
  for (const auto& s : batch) {
    auto& entry = pooled[s.batch_tag];
    for (const auto& p : detect_peaks(s, params)) entry.centers_ghz.push_back(p.center_ghz);
  }
  for (auto& [tag, entry] : pooled) {
    if (entry.centers_ghz.empty()) continue;
    entry.histogram = summarize_values(entry.centers_ghz, histogram_bins).histogram;
  }
  return pooled;
}

GssBatchStats batch_gss_stats(const std::vector<Spectrum>& batch, const PeakDetectionParams& params) {
  if (batch.empty()) throw Error(ErrorCode::EmptyRequest, "no spectra in batch");
  GssBatchStats stats;
  for (const auto& s : batch) {
    const EmitterAssignment a = classify_and_extract(detect_peaks(s, params));
    if (a.gss_ghz) stats.gss_ghz.push_back(*a.gss_ghz);
  }
  if (stats.gss_ghz.empty())
    throw Error(ErrorCode::NoSingleEmitters, "no spectrum in the batch has a single-emitter splitting");
  const Summary summary = summarize_values(stats.gss_ghz);
  stats.n = summary.n;
  stats.mean_ghz = summary.mean;
  stats.std_ghz = summary.std;
  stats.sem_ghz = summary.sem;
  return stats;
}

}  // namespace strainforge
