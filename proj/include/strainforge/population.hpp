#pragma once

// Monte Carlo ensembles of SiV emitters before and after film deposition, and
// the two calibration fits that scale the strain models to a measured mean
// splitting.
//
// Every sample i draws from its own generator seeded by (seed, i); output is
// identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "strainforge/core_model.hpp"
#include "strainforge/mechanics.hpp"
#include "strainforge/statistics.hpp"

namespace strainforge {

struct IntrinsicStrainModel {
  double sigma = 0.0;
  // Frame in which the six components are drawn i.i.d.; Defect or Crystal.
  Frame sample_frame = Frame::Defect;

  void validate() const;
};

struct PositionDistribution {
  double aperture_x_nm = 60.0;  // lateral, across the beam
  double aperture_y_nm = 60.0;  // along the beam
  double depth_mean_nm = 35.0;
  double depth_straggle_nm = 10.0;

  void validate() const;
};

struct EmitterSample {
  double x_nm = 0.0;
  double y_nm = 0.0;
  double depth_nm = 0.0;
  int orientation_id = 0;
  StrainTensor strain;  // crystal frame
  double gss_ghz = 0.0;
};

struct EnsembleResult {
  std::vector<EmitterSample> samples;
  Summary summary;

  std::vector<double> gss_values() const;
};

struct SamplingOptions {
  unsigned threads = 1;
  std::size_t histogram_bins = 0;  // 0: Freedman-Diaconis
};

struct PostDepositionModel {
  PositionDistribution positions;
  bool include_intrinsic = false;
  IntrinsicStrainModel intrinsic;
};

EnsembleResult sample_pre_deposition(std::size_t n, const IntrinsicStrainModel& model, const SivParameters& params,
                                     std::uint64_t seed, const SamplingOptions& options = {});

EnsembleResult sample_post_deposition(std::size_t n, const PostDepositionModel& model, const CrossSection& section,
                                      const StrainField& field, const SivParameters& params, std::uint64_t seed,
                                      const SamplingOptions& options = {});

Summary summarize(const std::vector<EmitterSample>& samples, std::size_t histogram_bins = 0);

// Smallest-error sigma whose fixed-seed ensemble mean matches target_mean_ghz.
double calibrate_sigma(double target_mean_ghz, std::size_t n, std::uint64_t seed, const SivParameters& params,
                       Frame sample_frame = Frame::Defect, unsigned threads = 1);

// Equivalent film stress (MPa) whose fixed-seed post-deposition mean matches
// target_mean_ghz.
double calibrate_film_stress(double target_mean_ghz, const LayerStack& stack, const PostDepositionModel& model,
                             const SivParameters& params, std::size_t n, std::uint64_t seed, unsigned threads = 1);

}  // namespace strainforge
