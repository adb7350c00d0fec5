#include "strainforge/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "strainforge/errors.hpp"

namespace strainforge {

double Histogram::integral() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) s += densities[i] * (edges[i + 1] - edges[i]);
  return s;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : sorted_(std::move(values)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const noexcept {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
  if (sorted_.empty()) throw Error(ErrorCode::EmptyRequest, "quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level outside [0, 1]");
  const double h = p * static_cast<double>(sorted_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted_.size() - 1);
  return sorted_[lo] + (h - static_cast<double>(lo)) * (sorted_[hi] - sorted_[lo]);
}

std::vector<double> freedman_diaconis_edges(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyRequest, "cannot bin an empty sample");
  const EmpiricalCdf cdf(std::vector<double>(values.begin(), values.end()));
  const double lo = cdf.sorted().front();
  const double hi = cdf.sorted().back();
  if (hi == lo) return {lo - 0.5, lo + 0.5};

  const double n = static_cast<double>(values.size());
  const double iqr = cdf.quantile(0.75) - cdf.quantile(0.25);
  std::size_t bins = 0;
  if (iqr > 0.0) {
    const double width = 2.0 * iqr / std::cbrt(n);
    bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  } else {
    bins = static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;
  }
  bins = std::clamp<std::size_t>(bins, 1, 100000);
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  edges.back() = hi;
  return edges;
}

Histogram histogram_from_edges(std::span<const double> values, std::vector<double> edges) {
  if (edges.size() < 2) throw Error(ErrorCode::InvalidArgument, "histogram needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw Error(ErrorCode::InvalidArgument, "histogram edges must increase");

  const std::size_t bins = edges.size() - 1;
  std::vector<double> counts(bins, 0.0);
  double total = 0.0;
  for (double v : values) {
    if (!(v >= edges.front() && v <= edges.back())) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= bins) bin = bins - 1;
    counts[bin] += 1.0;
    total += 1.0;
  }
  Histogram h;
  h.densities.resize(bins, 0.0);
  if (total > 0.0)
    for (std::size_t i = 0; i < bins; ++i) h.densities[i] = counts[i] / (total * (edges[i + 1] - edges[i]));
  h.edges = std::move(edges);
  return h;
}

Summary summarize_values(std::span<const double> values, std::size_t bin_count) {
  if (values.empty()) throw Error(ErrorCode::EmptyRequest, "cannot summarize an empty sample");
  Summary s;
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  s.sem = s.std / std::sqrt(static_cast<double>(s.n));

  std::vector<double> edges;
  if (bin_count == 0) {
    edges = freedman_diaconis_edges(values);
  } else {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn, hi = (*mx > *mn) ? *mx : *mn + 1.0;
    edges.resize(bin_count + 1);
    for (std::size_t i = 0; i <= bin_count; ++i)
      edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bin_count);
    edges.back() = hi;
  }
  s.histogram = histogram_from_edges(values, std::move(edges));
  s.cdf = EmpiricalCdf(std::vector<double>(values.begin(), values.end()));
  return s;
}

}  // namespace strainforge
