#include "strainforge/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "strainforge/errors.hpp"
#include "strainforge/parallel.hpp"

namespace strainforge {

namespace {

constexpr double kBracketLowK = 1e-3;
constexpr double kBracketHighK = 300.0;
constexpr int kMaxIterations = 200;

void require_domain(double gss_ghz, double temp_k) {
  if (!(gss_ghz > 0.0) || !std::isfinite(gss_ghz))
    throw Error(ErrorCode::InvalidDomain, "splitting must be positive, got " + std::to_string(gss_ghz) + " GHz");
  if (!(temp_k > 0.0) || !std::isfinite(temp_k))
    throw Error(ErrorCode::InvalidDomain, "temperature must be positive, got " + std::to_string(temp_k) + " K");
}

double log_occupation(double gss_ghz, double temp_k, OccupationModel model) {
  const double x = kKelvinPerGhz * gss_ghz / temp_k;
  if (model == OccupationModel::Boltzmann) return -x;
  // log(1 / (e^x - 1)) = -x - log(1 - e^-x)
  return -x - std::log1p(-std::exp(-x));
}

double log_rate(double gss_ghz, double temp_k, OccupationModel model) {
  return 3.0 * std::log(gss_ghz) + log_occupation(gss_ghz, temp_k, model);
}

}  // namespace

void ThermalReference::validate() const {
  if (!(gss_ref_ghz > 0.0) || !(temp_ref_k > 0.0))
    throw Error(ErrorCode::InvalidDomain, "thermal reference splitting and temperature must be positive");
}

double thermal_occupation(double gss_ghz, double temp_k, OccupationModel model) {
  require_domain(gss_ghz, temp_k);
  const double x = kKelvinPerGhz * gss_ghz / temp_k;
  if (model == OccupationModel::Boltzmann) return std::exp(-x);
  return 1.0 / std::expm1(x);
}

double gamma_up_relative(double gss_ghz, double temp_k, const ThermalReference& ref) {
  require_domain(gss_ghz, temp_k);
  ref.validate();
  if (gss_ghz == ref.gss_ref_ghz && temp_k == ref.temp_ref_k) return 1.0;
  return std::exp(log_rate(gss_ghz, temp_k, ref.occupation) -
                  log_rate(ref.gss_ref_ghz, ref.temp_ref_k, ref.occupation));
}

double operational_temperature(double gss_ghz, const ThermalReference& ref) {
  require_domain(gss_ghz, 1.0);
  ref.validate();
  const double target = log_rate(ref.gss_ref_ghz, ref.temp_ref_k, ref.occupation);
  const auto residual = [&](double t) { return log_rate(gss_ghz, t, ref.occupation) - target; };

  double lo = kBracketLowK, hi = kBracketHighK;
  if (residual(lo) > 0.0 || residual(hi) < 0.0)
    throw Error(ErrorCode::InvalidDomain, "operational temperature for " + std::to_string(gss_ghz) +
                                              " GHz lies outside [1e-3, 300] K");
  for (int i = 0; i < kMaxIterations && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (r == 0.0) return mid;
    (r < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> operational_temperatures(std::span<const double> gss_ghz, const ThermalReference& ref,
                                             unsigned threads) {
  std::vector<double> top(gss_ghz.size());
  parallel_for(gss_ghz.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) top[i] = operational_temperature(gss_ghz[i], ref);
  });
  return top;
}

std::vector<OperabilityPoint> operability_from_temperatures(std::vector<double> top_k, std::span<const double> temps_k) {
  if (top_k.empty()) throw Error(ErrorCode::EmptyRequest, "operability curve needs at least one emitter");
  if (!std::is_sorted(temps_k.begin(), temps_k.end()))
    throw Error(ErrorCode::InvalidArgument, "temperature grid must be sorted ascending");
  std::sort(top_k.begin(), top_k.end());
  std::vector<OperabilityPoint> curve;
  curve.reserve(temps_k.size());
  const double n = static_cast<double>(top_k.size());
  for (double t : temps_k) {
    const auto first_ge = std::lower_bound(top_k.begin(), top_k.end(), t);
    curve.push_back({t, static_cast<double>(top_k.end() - first_ge) / n});
  }
  return curve;
}

std::vector<OperabilityPoint> operability_curve(std::span<const double> gss_ghz, std::span<const double> temps_k,
                                                const ThermalReference& ref, unsigned threads) {
  if (gss_ghz.empty()) throw Error(ErrorCode::EmptyRequest, "operability curve needs at least one emitter");
  if (!std::is_sorted(temps_k.begin(), temps_k.end()))
    throw Error(ErrorCode::InvalidArgument, "temperature grid must be sorted ascending");
  return operability_from_temperatures(operational_temperatures(gss_ghz, ref, threads), temps_k);
}

}  // namespace strainforge
