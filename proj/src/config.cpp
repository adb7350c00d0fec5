#include "strainforge/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "strainforge/errors.hpp"

namespace strainforge {

using nlohmann::json;

LayerStack default_layer_stack() {
  return LayerStack{
      Layer{0.0, 1100.0, 0.07, 0.0},
      CrossSection({{-150.0, 135.0}, {0.0, 0.0}, {150.0, 135.0}}),
      Layer{60.0, 250.0, 0.25, 700.0},
      1.0,
  };
}

void Config::validate() const {
  siv.validate();
  stack.validate();
  intrinsic.validate();
  post.positions.validate();
  if (post.include_intrinsic) post.intrinsic.validate();
  thermal.validate();
  spectra.detection.validate();
  if (monte_carlo.n == 0) throw Error(ErrorCode::ConfigError, "monte_carlo.n must be at least 1");
}

Config default_config() { return Config{}; }

namespace {

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || item.key() == key;
    if (!ok) throw Error(ErrorCode::ConfigError, "unknown key '" + where + "." + item.key() + "'");
  }
}

double get_number(const json& j, const std::string& where, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorCode::ConfigError, where + "." + key + " must be a number");
  return v.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& where, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw Error(ErrorCode::ConfigError, where + "." + key + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& where, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw Error(ErrorCode::ConfigError, where + "." + key + " must be a boolean");
  return j.at(key).get<bool>();
}

std::string get_string(const json& j, const std::string& where, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw Error(ErrorCode::ConfigError, where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

Frame parse_sample_frame(const std::string& s) {
  if (s == "defect") return Frame::Defect;
  if (s == "crystal") return Frame::Crystal;
  throw Error(ErrorCode::ConfigError, "population.intrinsic_sample_frame must be 'defect' or 'crystal'");
}

OccupationModel parse_occupation(const std::string& s) {
  if (s == "bose_einstein") return OccupationModel::BoseEinstein;
  if (s == "boltzmann") return OccupationModel::Boltzmann;
  throw Error(ErrorCode::ConfigError, "thermal.occupation must be 'bose_einstein' or 'boltzmann'");
}

CrossSection parse_polygon(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, "mechanics.substrate.cross_section_nm must be an array");
  std::vector<Point2> pts;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw Error(ErrorCode::ConfigError, "cross_section_nm entries must be [lateral, vertical] number pairs");
    pts.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return CrossSection(std::move(pts));
}

}  // namespace

Config config_from_json(const json& j) {
  require_object(j, "config", {"schema_version", "siv", "mechanics", "population", "thermal", "spectra", "monte_carlo"});
  if (j.contains("schema_version") && get_unsigned(j, "config", "schema_version", 0) != kConfigSchemaVersion)
    throw Error(ErrorCode::ConfigError, "unsupported schema_version (expected " +
                                            std::to_string(kConfigSchemaVersion) + ")");
  Config c;

  if (j.contains("siv")) {
    const json& s = j.at("siv");
    require_object(s, "siv", {"lambda_so_ghz", "d_ghz_per_strain", "f_ghz_per_strain"});
    c.siv.lambda_so_ghz = get_number(s, "siv", "lambda_so_ghz", c.siv.lambda_so_ghz);
    c.siv.d_ghz_per_strain = get_number(s, "siv", "d_ghz_per_strain", c.siv.d_ghz_per_strain);
    c.siv.f_ghz_per_strain = get_number(s, "siv", "f_ghz_per_strain", c.siv.f_ghz_per_strain);
  }

  if (j.contains("mechanics")) {
    const json& m = j.at("mechanics");
    require_object(m, "mechanics", {"substrate", "film", "beam_axis", "biaxiality_factor"});
    if (get_string(m, "mechanics", "beam_axis", "[110]") != "[110]")
      throw Error(ErrorCode::ConfigError, "mechanics.beam_axis: only \"[110]\" is supported");
    c.stack.biaxiality_factor = get_number(m, "mechanics", "biaxiality_factor", c.stack.biaxiality_factor);
    if (m.contains("substrate")) {
      const json& s = m.at("substrate");
      require_object(s, "mechanics.substrate", {"youngs_modulus_gpa", "poisson_ratio", "cross_section_nm"});
      c.stack.substrate.youngs_modulus_gpa =
          get_number(s, "mechanics.substrate", "youngs_modulus_gpa", c.stack.substrate.youngs_modulus_gpa);
      c.stack.substrate.poisson_ratio =
          get_number(s, "mechanics.substrate", "poisson_ratio", c.stack.substrate.poisson_ratio);
      if (s.contains("cross_section_nm")) c.stack.section = parse_polygon(s.at("cross_section_nm"));
    }
    if (m.contains("film")) {
      const json& f = m.at("film");
      require_object(f, "mechanics.film", {"thickness_nm", "youngs_modulus_gpa", "poisson_ratio", "intrinsic_stress_mpa"});
      c.stack.film.thickness_nm = get_number(f, "mechanics.film", "thickness_nm", c.stack.film.thickness_nm);
      c.stack.film.youngs_modulus_gpa =
          get_number(f, "mechanics.film", "youngs_modulus_gpa", c.stack.film.youngs_modulus_gpa);
      c.stack.film.poisson_ratio = get_number(f, "mechanics.film", "poisson_ratio", c.stack.film.poisson_ratio);
      c.stack.film.intrinsic_stress_mpa =
          get_number(f, "mechanics.film", "intrinsic_stress_mpa", c.stack.film.intrinsic_stress_mpa);
    }
  }

  if (j.contains("population")) {
    const json& p = j.at("population");
    require_object(p, "population",
                   {"sigma_unstrained", "intrinsic_sample_frame", "aperture_x_nm", "aperture_y_nm", "depth_mean_nm",
                    "depth_straggle_nm", "post_include_intrinsic", "histogram_bins"});
    c.intrinsic.sigma = get_number(p, "population", "sigma_unstrained", c.intrinsic.sigma);
    c.intrinsic.sample_frame = parse_sample_frame(get_string(p, "population", "intrinsic_sample_frame", "defect"));
    auto& pos = c.post.positions;
    pos.aperture_x_nm = get_number(p, "population", "aperture_x_nm", pos.aperture_x_nm);
    pos.aperture_y_nm = get_number(p, "population", "aperture_y_nm", pos.aperture_y_nm);
    pos.depth_mean_nm = get_number(p, "population", "depth_mean_nm", pos.depth_mean_nm);
    pos.depth_straggle_nm = get_number(p, "population", "depth_straggle_nm", pos.depth_straggle_nm);
    c.post.include_intrinsic = get_bool(p, "population", "post_include_intrinsic", c.post.include_intrinsic);
    c.histogram_bins = get_unsigned(p, "population", "histogram_bins", c.histogram_bins);
  }
  c.post.intrinsic = c.intrinsic;

  if (j.contains("thermal")) {
    const json& t = j.at("thermal");
    require_object(t, "thermal", {"gss_ref_ghz", "temp_ref_k", "occupation"});
    c.thermal.gss_ref_ghz = get_number(t, "thermal", "gss_ref_ghz", c.thermal.gss_ref_ghz);
    c.thermal.temp_ref_k = get_number(t, "thermal", "temp_ref_k", c.thermal.temp_ref_k);
    c.thermal.occupation = parse_occupation(get_string(t, "thermal", "occupation", "bose_einstein"));
  }

  if (j.contains("spectra")) {
    const json& s = j.at("spectra");
    require_object(s, "spectra", {"smoothing_window", "min_prominence_fraction", "histogram_bins"});
    c.spectra.detection.smoothing_window =
        get_unsigned(s, "spectra", "smoothing_window", c.spectra.detection.smoothing_window);
    c.spectra.detection.min_prominence_fraction =
        get_number(s, "spectra", "min_prominence_fraction", c.spectra.detection.min_prominence_fraction);
    c.spectra.histogram_bins = get_unsigned(s, "spectra", "histogram_bins", c.spectra.histogram_bins);
  }

  if (j.contains("monte_carlo")) {
    const json& m = j.at("monte_carlo");
    require_object(m, "monte_carlo", {"n", "seed", "target_pre_mean_ghz", "target_post_mean_ghz"});
    c.monte_carlo.n = get_unsigned(m, "monte_carlo", "n", c.monte_carlo.n);
    c.monte_carlo.seed = get_unsigned(m, "monte_carlo", "seed", c.monte_carlo.seed);
    c.monte_carlo.target_pre_mean_ghz =
        get_number(m, "monte_carlo", "target_pre_mean_ghz", c.monte_carlo.target_pre_mean_ghz);
    c.monte_carlo.target_post_mean_ghz =
        get_number(m, "monte_carlo", "target_post_mean_ghz", c.monte_carlo.target_post_mean_ghz);
  }

  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

json config_to_json(const Config& c) {
  json polygon = json::array();
  for (const auto& p : c.stack.section.vertices()) polygon.push_back({p.lateral_nm, p.vertical_nm});
  return json{
      {"schema_version", kConfigSchemaVersion},
      {"siv",
       {{"lambda_so_ghz", c.siv.lambda_so_ghz},
        {"d_ghz_per_strain", c.siv.d_ghz_per_strain},
        {"f_ghz_per_strain", c.siv.f_ghz_per_strain}}},
      {"mechanics",
       {{"beam_axis", "[110]"},
        {"biaxiality_factor", c.stack.biaxiality_factor},
        {"substrate",
         {{"youngs_modulus_gpa", c.stack.substrate.youngs_modulus_gpa},
          {"poisson_ratio", c.stack.substrate.poisson_ratio},
          {"cross_section_nm", polygon}}},
        {"film",
         {{"thickness_nm", c.stack.film.thickness_nm},
          {"youngs_modulus_gpa", c.stack.film.youngs_modulus_gpa},
          {"poisson_ratio", c.stack.film.poisson_ratio},
          {"intrinsic_stress_mpa", c.stack.film.intrinsic_stress_mpa}}}}},
      {"population",
       {{"sigma_unstrained", c.intrinsic.sigma},
        {"intrinsic_sample_frame", c.intrinsic.sample_frame == Frame::Crystal ? "crystal" : "defect"},
        {"aperture_x_nm", c.post.positions.aperture_x_nm},
        {"aperture_y_nm", c.post.positions.aperture_y_nm},
        {"depth_mean_nm", c.post.positions.depth_mean_nm},
        {"depth_straggle_nm", c.post.positions.depth_straggle_nm},
        {"post_include_intrinsic", c.post.include_intrinsic},
        {"histogram_bins", c.histogram_bins}}},
      {"thermal",
       {{"gss_ref_ghz", c.thermal.gss_ref_ghz},
        {"temp_ref_k", c.thermal.temp_ref_k},
        {"occupation", c.thermal.occupation == OccupationModel::Boltzmann ? "boltzmann" : "bose_einstein"}}},
      {"spectra",
       {{"smoothing_window", c.spectra.detection.smoothing_window},
        {"min_prominence_fraction", c.spectra.detection.min_prominence_fraction},
        {"histogram_bins", c.spectra.histogram_bins}}},
      {"monte_carlo",
       {{"n", c.monte_carlo.n},
        {"seed", c.monte_carlo.seed},
        {"target_pre_mean_ghz", c.monte_carlo.target_pre_mean_ghz},
        {"target_post_mean_ghz", c.monte_carlo.target_post_mean_ghz}}},
  };
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace strainforge
