#include "strainforge/strainforge.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "strainforge/config.hpp"
#include "strainforge/errors.hpp"
#include "strainforge/io.hpp"
#include "strainforge/parallel.hpp"
#include "strainforge/pipeline.hpp"

struct sf_context {
  strainforge::Config config;
  unsigned threads = 1;
  std::vector<std::string> warnings;
};

struct sf_ensemble {
  strainforge::EnsembleResult result;
};

namespace {

using namespace strainforge;

thread_local std::string last_error;

sf_status fail(sf_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
sf_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return SF_OK;
  } catch (const Error& e) {
    return fail(static_cast<sf_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SF_ERR_CONFIG, std::string("ConfigError: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(SF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SF_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, message);
}

sf_context* make_context(Config config) {
  auto* ctx = new sf_context{std::move(config), default_thread_count(), {}};
  ctx->warnings = ctx->config.stack.warnings();
  return ctx;
}

}  // namespace

extern "C" {

const char* sf_version(void) { return "1.0.0"; }

const char* sf_status_name(sf_status status) {
  if (status == SF_OK) return "Ok";
  if (status == SF_ERR_INTERNAL) return "InternalError";
  return error_name(static_cast<ErrorCode>(status));
}

const char* sf_last_error(void) { return last_error.c_str(); }

sf_status sf_context_create(const char* config_path, sf_context** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = nullptr;
    const char* path = config_path;
    if (path == nullptr || *path == '\0') path = std::getenv("STRAINFORGE_CONFIG");
    Config config = (path != nullptr && *path != '\0') ? load_config(path) : default_config();
    *out = make_context(std::move(config));
  });
}

sf_status sf_context_create_from_json(const char* json_text, sf_context** out) {
  return guarded([&] {
    require(out != nullptr && json_text != nullptr, "arguments must not be null");
    *out = nullptr;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
    *out = make_context(config_from_json(j));
  });
}

void sf_context_destroy(sf_context* ctx) { delete ctx; }

sf_status sf_context_set_threads(sf_context* ctx, unsigned threads) {
  return guarded([&] {
    require(ctx != nullptr, "context must not be null");
    ctx->threads = threads == 0 ? default_thread_count() : threads;
  });
}

sf_status sf_context_default_seed(const sf_context* ctx, uint64_t* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "arguments must not be null");
    *out = ctx->config.monte_carlo.seed;
  });
}

sf_status sf_context_default_n(const sf_context* ctx, size_t* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "arguments must not be null");
    *out = ctx->config.monte_carlo.n;
  });
}

size_t sf_context_warning_count(const sf_context* ctx) { return ctx == nullptr ? 0 : ctx->warnings.size(); }

const char* sf_context_warning(const sf_context* ctx, size_t index) {
  if (ctx == nullptr || index >= ctx->warnings.size()) return nullptr;
  return ctx->warnings[index].c_str();
}

sf_status sf_ground_state_splitting(const sf_context* ctx, const double strain[6], sf_frame frame,
                                    int orientation_id, double* out_ghz) {
  return guarded([&] {
    require(ctx != nullptr && strain != nullptr && out_ghz != nullptr, "arguments must not be null");
    std::array<double, 6> c{};
    std::copy(strain, strain + 6, c.begin());
    const SivParameters& params = ctx->config.siv;
    switch (frame) {
      case SF_FRAME_DEFECT:
        *out_ghz = ground_state_splitting(eg_couplings(StrainTensor(c, Frame::Defect), params), params);
        break;
      case SF_FRAME_CRYSTAL:
        *out_ghz = ground_state_splitting(StrainTensor(c, Frame::Crystal), DefectOrientation::get(orientation_id),
                                          params);
        break;
      default:
        throw Error(ErrorCode::FrameMismatch, "splitting needs Crystal or Defect strain");
    }
  });
}

sf_status sf_gamma_up_relative(const sf_context* ctx, double gss_ghz, double temp_k, double* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "arguments must not be null");
    *out = gamma_up_relative(gss_ghz, temp_k, ctx->config.thermal);
  });
}

sf_status sf_operational_temperature(const sf_context* ctx, double gss_ghz, double* out_k) {
  return guarded([&] {
    require(ctx != nullptr && out_k != nullptr, "arguments must not be null");
    *out_k = operational_temperature(gss_ghz, ctx->config.thermal);
  });
}

sf_status sf_mechanics_depth_profile(const sf_context* ctx, double film_stress_mpa, double step_nm,
                                     const char* out_path) {
  return guarded([&] {
    require(ctx != nullptr, "context must not be null");
    LayerStack stack = ctx->config.stack;
    if (!std::isnan(film_stress_mpa)) stack.film.intrinsic_stress_mpa = film_stress_mpa;
    const StrainField field = solve_beam_state(stack);
    if (out_path == nullptr) {
      write_depth_profile_csv(std::cout, field, step_nm);
      std::cout.flush();
      return;
    }
    std::ostringstream buf;
    write_depth_profile_csv(buf, field, step_nm);
    write_file_atomic(out_path, buf.str());
  });
}

sf_status sf_sample(const sf_context* ctx, sf_phase phase, size_t n, uint64_t seed, double override_value,
                    sf_ensemble** out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "arguments must not be null");
    *out = nullptr;
    const Config& c = ctx->config;
    const SamplingOptions options{ctx->threads, c.histogram_bins};
    auto ensemble = std::make_unique<sf_ensemble>();
    if (phase == SF_PHASE_PRE) {
      IntrinsicStrainModel model = c.intrinsic;
      if (!std::isnan(override_value)) model.sigma = override_value;
      ensemble->result = sample_pre_deposition(n, model, c.siv, seed, options);
    } else if (phase == SF_PHASE_POST) {
      LayerStack stack = c.stack;
      if (!std::isnan(override_value)) stack.film.intrinsic_stress_mpa = override_value;
      ensemble->result =
          sample_post_deposition(n, c.post, stack.section, solve_beam_state(stack), c.siv, seed, options);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown phase");
    }
    *out = ensemble.release();
  });
}

void sf_ensemble_destroy(sf_ensemble* ensemble) { delete ensemble; }

size_t sf_ensemble_size(const sf_ensemble* ensemble) {
  return ensemble == nullptr ? 0 : ensemble->result.samples.size();
}

sf_status sf_ensemble_summary(const sf_ensemble* ensemble, sf_summary* out) {
  return guarded([&] {
    require(ensemble != nullptr && out != nullptr, "arguments must not be null");
    const Summary& s = ensemble->result.summary;
    *out = sf_summary{s.n, s.mean, s.std, s.sem};
  });
}

sf_status sf_ensemble_gss(const sf_ensemble* ensemble, double* out, size_t capacity) {
  return guarded([&] {
    require(ensemble != nullptr && (out != nullptr || capacity == 0), "arguments must not be null");
    const auto& samples = ensemble->result.samples;
    const size_t count = std::min(capacity, samples.size());
    for (size_t i = 0; i < count; ++i) out[i] = samples[i].gss_ghz;
  });
}

sf_status sf_ensemble_write_csv(const sf_ensemble* ensemble, const char* path) {
  return guarded([&] {
    require(ensemble != nullptr && path != nullptr, "arguments must not be null");
    std::ostringstream buf;
    write_samples_csv(buf, ensemble->result);
    write_file_atomic(path, buf.str());
  });
}

sf_status sf_ensemble_summary_json(const sf_ensemble* ensemble, char** out_json) {
  return guarded([&] {
    require(ensemble != nullptr && out_json != nullptr, "arguments must not be null");
    *out_json = nullptr;
    const Summary& s = ensemble->result.summary;
    nlohmann::json hist{{"edges_ghz", s.histogram.edges}, {"densities", s.histogram.densities}};
    const nlohmann::json j{{"schema_version", kSummarySchemaVersion},
                           {"n", s.n},
                           {"mean_ghz", s.mean},
                           {"std_ghz", s.std},
                           {"sem_ghz", s.sem},
                           {"median_ghz", s.cdf.quantile(0.5)},
                           {"histogram", hist}};
    const std::string text = j.dump(2);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_json = buf;
  });
}

sf_status sf_calibrate(const sf_context* ctx, sf_calibration what, double target_mean_ghz, size_t n, uint64_t seed,
                       double* out) {
  return guarded([&] {
    require(ctx != nullptr && out != nullptr, "arguments must not be null");
    const Config& c = ctx->config;
    if (what == SF_CALIBRATE_SIGMA)
      *out = calibrate_sigma(target_mean_ghz, n, seed, c.siv, c.intrinsic.sample_frame, ctx->threads);
    else if (what == SF_CALIBRATE_STRESS)
      *out = calibrate_film_stress(target_mean_ghz, c.stack, c.post, c.siv, n, seed, ctx->threads);
    else
      throw Error(ErrorCode::InvalidArgument, "unknown calibration target");
  });
}

sf_status sf_report(const sf_context* ctx, uint64_t seed, size_t n, const char* out_dir) {
  return guarded([&] {
    require(ctx != nullptr && out_dir != nullptr, "arguments must not be null");
    run_report(ctx->config, ReportOptions{seed, n, ctx->threads}, out_dir);
  });
}

sf_status sf_spectra_analyze(const sf_context* ctx, const char* dir, const char* batch_tag, const char* out_json_path,
                             const char* histogram_csv_path) {
  return guarded([&] {
    require(ctx != nullptr && dir != nullptr && batch_tag != nullptr && out_json_path != nullptr &&
                histogram_csv_path != nullptr,
            "arguments must not be null");
    run_spectra_batch(ctx->config, dir, batch_tag, out_json_path, histogram_csv_path);
  });
}

void sf_string_free(char* s) { std::free(s); }

}  // extern "C"
