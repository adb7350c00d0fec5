// strainforge command-line front end. Talks to the library only through the
// C API in strainforge.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "strainforge/strainforge.h"

namespace {

constexpr int kExitDomainError = 1;
constexpr int kExitUsageError = 2;

struct ContextDeleter {
  void operator()(sf_context* ctx) const { sf_context_destroy(ctx); }
};
struct EnsembleDeleter {
  void operator()(sf_ensemble* e) const { sf_ensemble_destroy(e); }
};
using ContextPtr = std::unique_ptr<sf_context, ContextDeleter>;
using EnsemblePtr = std::unique_ptr<sf_ensemble, EnsembleDeleter>;

struct DomainFailure {
  sf_status status;
};

void check(sf_status status) {
  if (status != SF_OK) throw DomainFailure{status};
}

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
};

void print_warnings(const sf_context* ctx) {
  for (std::size_t i = 0; i < sf_context_warning_count(ctx); ++i)
    std::fprintf(stderr, "strainforge: warning: %s\n", sf_context_warning(ctx, i));
}

void add_common(CLI::App& app, GlobalOptions& g) {
  app.add_option("--config", g.config_path, "JSON config (falls back to $STRAINFORGE_CONFIG, then built-in defaults)");
  app.add_option_function<std::uint64_t>(
      "--seed",
      [&g](const std::uint64_t& s) {
        g.seed = s;
        g.seed_given = true;
      },
      "Random seed (default from config)");
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores; results do not depend on it");
}

ContextPtr open_context(const GlobalOptions& g) {
  sf_context* raw = nullptr;
  check(sf_context_create(g.config_path.empty() ? nullptr : g.config_path.c_str(), &raw));
  ContextPtr ctx(raw);
  check(sf_context_set_threads(ctx.get(), g.threads));
  return ctx;
}

std::uint64_t effective_seed(const sf_context* ctx, const GlobalOptions& g) {
  if (g.seed_given) return g.seed;
  std::uint64_t seed = 0;
  check(sf_context_default_seed(ctx, &seed));
  return seed;
}

std::size_t effective_n(const sf_context* ctx, std::size_t n) {
  if (n != 0) return n;
  check(sf_context_default_n(ctx, &n));
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strain engineering toolkit for SiV centres in thin-film-stressed diamond nanobeams"};
  app.require_subcommand(1);
  GlobalOptions global;
  add_common(app, global);

  constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  // mechanics
  auto* mechanics = app.add_subcommand("mechanics", "Beam strain profile");
  add_common(*mechanics, global);
  bool depth_profile = false;
  double step_nm = 1.0;
  double mech_stress = kUnset;
  std::string mech_out;
  mechanics->add_flag("--depth-profile", depth_profile, "Dump depth_nm,eps_xx,eps_yy,eps_zz CSV")->required();
  mechanics->add_option("--step-nm", step_nm, "Depth step")->check(CLI::PositiveNumber);
  mechanics->add_option("--stress-mpa", mech_stress, "Override the film stress");
  mechanics->add_option("--out", mech_out, "Output CSV (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "Monte Carlo ensemble of emitters");
  add_common(*sample, global);
  std::string phase;
  std::size_t sample_n = 0;
  std::string sample_out;
  double sample_sigma = kUnset, sample_stress = kUnset;
  sample->add_option("--phase", phase, "pre or post deposition")->required()->check(CLI::IsMember({"pre", "post"}));
  sample->add_option("--n", sample_n, "Number of emitters (default from config)");
  sample->add_option("--out", sample_out, "Samples CSV")->required();
  sample->add_option("--sigma", sample_sigma, "Override intrinsic strain sigma (pre)");
  sample->add_option("--stress-mpa", sample_stress, "Override film stress (post)");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Fit sigma or film stress to a target mean splitting");
  add_common(*calibrate, global);
  std::string what;
  double target_ghz = 0.0;
  std::size_t calibrate_n = 0;
  calibrate->add_option("--what", what, "sigma or stress")->required()->check(CLI::IsMember({"sigma", "stress"}));
  calibrate->add_option("--target-ghz", target_ghz, "Target ensemble mean")->required();
  calibrate->add_option("--n", calibrate_n, "Number of emitters (default from config)");

  // top
  auto* top = app.add_subcommand("top", "Operational temperature for a ground-state splitting");
  add_common(*top, global);
  double gss_ghz = 0.0;
  top->add_option("--gss-ghz", gss_ghz, "Ground-state splitting")->required();

  // report
  auto* report = app.add_subcommand("report", "Calibrate both ensembles and write plot-ready CSV/JSON");
  add_common(*report, global);
  std::string out_dir = ".";
  std::size_t report_n = 0;
  report->add_option("--out-dir", out_dir, "Output directory");
  report->add_option("--n", report_n, "Number of emitters per ensemble (default from config)");

  // spectra
  auto* spectra = app.add_subcommand("spectra", "Peak detection and splitting statistics for a batch of spectra");
  add_common(*spectra, global);
  std::string spectra_dir, batch_tag, stats_out, histogram_out;
  spectra->add_option("--dir", spectra_dir, "Directory of CSV spectra")->required();
  spectra->add_option("--batch-tag", batch_tag, "Batch label, e.g. pre or post")->required();
  spectra->add_option("--out", stats_out, "Statistics JSON")->required();
  spectra->add_option("--histogram-out", histogram_out, "Pooled histogram CSV (default <out>_histogram.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "strainforge: %s\n", e.what());
    std::fprintf(stderr, "%s", app.help().c_str());
    return kExitUsageError;
  }

  try {
    ContextPtr ctx = open_context(global);
    const std::uint64_t seed = effective_seed(ctx.get(), global);
    if (*mechanics || *report || (*sample && phase == "post") || (*calibrate && what == "stress"))
      print_warnings(ctx.get());

    if (*mechanics) {
      check(sf_mechanics_depth_profile(ctx.get(), mech_stress, step_nm, mech_out.empty() ? nullptr : mech_out.c_str()));
    } else if (*sample) {
      const bool pre = phase == "pre";
      sf_ensemble* raw = nullptr;
      check(sf_sample(ctx.get(), pre ? SF_PHASE_PRE : SF_PHASE_POST, effective_n(ctx.get(), sample_n), seed,
                      pre ? sample_sigma : sample_stress, &raw));
      EnsemblePtr ensemble(raw);
      check(sf_ensemble_write_csv(ensemble.get(), sample_out.c_str()));
      char* json = nullptr;
      check(sf_ensemble_summary_json(ensemble.get(), &json));
      std::printf("%s\n", json);
      sf_string_free(json);
    } else if (*calibrate) {
      double value = 0.0;
      const std::size_t n = effective_n(ctx.get(), calibrate_n);
      check(sf_calibrate(ctx.get(), what == "sigma" ? SF_CALIBRATE_SIGMA : SF_CALIBRATE_STRESS, target_ghz, n, seed,
                         &value));
      std::printf("{\"what\": \"%s\", \"target_ghz\": %.17g, \"n\": %zu, \"seed\": %llu, \"%s\": %.17g}\n",
                  what.c_str(), target_ghz, n, static_cast<unsigned long long>(seed),
                  what == "sigma" ? "sigma" : "stress_mpa", value);
    } else if (*top) {
      double t = 0.0;
      check(sf_operational_temperature(ctx.get(), gss_ghz, &t));
      std::printf("%.4f K\n", t);
    } else if (*report) {
      check(sf_report(ctx.get(), seed, report_n, out_dir.c_str()));
      std::printf("wrote gss_pdf.csv, top_vs_gss.csv, operability.csv, summary.json to %s\n", out_dir.c_str());
    } else if (*spectra) {
      if (histogram_out.empty()) {
        std::filesystem::path p(stats_out);
        histogram_out = (p.parent_path() / (p.stem().string() + "_histogram.csv")).string();
      }
      check(sf_spectra_analyze(ctx.get(), spectra_dir.c_str(), batch_tag.c_str(), stats_out.c_str(),
                               histogram_out.c_str()));
    }
  } catch (const DomainFailure&) {
    std::fprintf(stderr, "strainforge: %s\n", sf_last_error());
    return kExitDomainError;
  }
  return 0;
}
