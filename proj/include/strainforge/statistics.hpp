#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace strainforge {

struct Histogram {
  std::vector<double> edges;      // size = bins + 1, ascending
  std::vector<double> densities;  // probability density per bin

  std::size_t bins() const noexcept { return densities.size(); }
  // Sum of density * width; 1 for a normalized histogram.
  double integral() const noexcept;
};

class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  explicit EmpiricalCdf(std::vector<double> values);

  // Fraction of values <= x.
  double operator()(double x) const noexcept;
  // Type-7 (linear interpolation) sample quantile, p in [0, 1].
  double quantile(double p) const;
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // n-1 denominator; 0 when n == 1
  double sem = 0.0;
  Histogram histogram;
  EmpiricalCdf cdf;
};

// Freedman-Diaconis bin edges. Falls back to Sturges bins when the IQR is 0,
// and to a single unit-width bin when all values are identical.
std::vector<double> freedman_diaconis_edges(std::span<const double> values);

// Density histogram on the given edges; values outside [front, back] are
// dropped before normalization, the last bin is closed on the right.
Histogram histogram_from_edges(std::span<const double> values, std::vector<double> edges);

// bin_count == 0 selects the Freedman-Diaconis rule.
Summary summarize_values(std::span<const double> values, std::size_t bin_count = 0);

}  // namespace strainforge
