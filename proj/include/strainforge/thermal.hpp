#pragma once

// Phonon-limited operating temperature. The upward orbital relaxation rate
// scales as gss^3 n(gss, T); an emitter is "operable" at T when that rate does
// not exceed its value at a reference emitter (gss_ref, temp_ref).

#include <span>
#include <vector>

namespace strainforge {

// h / k_B in kelvin per GHz (exact SI constants).
inline constexpr double kKelvinPerGhz = 6.62607015e-34 / 1.380649e-23 * 1e9;

enum class OccupationModel { BoseEinstein, Boltzmann };

struct ThermalReference {
  double gss_ref_ghz = 554.0;
  double temp_ref_k = 1.5;
  OccupationModel occupation = OccupationModel::BoseEinstein;

  void validate() const;
};

double thermal_occupation(double gss_ghz, double temp_k, OccupationModel model = OccupationModel::BoseEinstein);

double gamma_up_relative(double gss_ghz, double temp_k, const ThermalReference& ref = {});

// Bracket [1e-3 K, 300 K]; absolute accuracy well below 1e-4 K.
double operational_temperature(double gss_ghz, const ThermalReference& ref = {});

struct OperabilityPoint {
  double temp_k = 0.0;
  double probability = 0.0;
};

// T_op for every splitting, in input order.
std::vector<double> operational_temperatures(std::span<const double> gss_ghz, const ThermalReference& ref = {},
                                             unsigned threads = 1);

// Fraction of operational temperatures >= each grid temperature.
std::vector<OperabilityPoint> operability_from_temperatures(std::vector<double> top_k, std::span<const double> temps_k);

std::vector<OperabilityPoint> operability_curve(std::span<const double> gss_ghz, std::span<const double> temps_k,
                                                const ThermalReference& ref = {}, unsigned threads = 1);

}  // namespace strainforge
