#pragma once

// JSON configuration. Every key carries its unit in the name; unknown keys are
// rejected and missing keys keep their defaults (the shipped
// config/default.json spells out every default).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "strainforge/core_model.hpp"
#include "strainforge/mechanics.hpp"
#include "strainforge/population.hpp"
#include "strainforge/spectra.hpp"
#include "strainforge/thermal.hpp"

namespace strainforge {

inline constexpr int kConfigSchemaVersion = 1;

// Apex-down triangular diamond beam, 300 nm wide and 135 nm deep, with a
// 60 nm SiN film on the flat top face.
LayerStack default_layer_stack();

struct MonteCarloSettings {
  std::size_t n = 1000000;
  std::uint64_t seed = 20231001;
  double target_pre_mean_ghz = 119.0;
  double target_post_mean_ghz = 608.0;
};

struct SpectraSettings {
  PeakDetectionParams detection;
  std::size_t histogram_bins = 0;
};

struct Config {
  SivParameters siv;
  LayerStack stack = default_layer_stack();
  IntrinsicStrainModel intrinsic{1.9e-5, Frame::Defect};
  PostDepositionModel post{PositionDistribution{}, false, IntrinsicStrainModel{1.9e-5, Frame::Defect}};
  std::size_t histogram_bins = 0;
  ThermalReference thermal;
  SpectraSettings spectra;
  MonteCarloSettings monte_carlo;

  void validate() const;
};

Config default_config();
Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& c);
Config load_config(const std::filesystem::path& path);

}  // namespace strainforge
