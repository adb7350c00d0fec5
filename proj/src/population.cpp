#include "strainforge/population.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "strainforge/errors.hpp"
#include "strainforge/parallel.hpp"
#include "strainforge/random.hpp"

namespace strainforge {

void IntrinsicStrainModel::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidParameter, "sigma must be >= 0");
  if (sample_frame != Frame::Defect && sample_frame != Frame::Crystal)
    throw Error(ErrorCode::InvalidParameter, "intrinsic strain is sampled in the Defect or Crystal frame");
}

void PositionDistribution::validate() const {
  if (!(aperture_x_nm > 0.0) || !(aperture_y_nm > 0.0))
    throw Error(ErrorCode::InvalidParameter, "aperture dimensions must be positive");
  if (!(depth_mean_nm > 0.0)) throw Error(ErrorCode::InvalidParameter, "depth mean must be positive");
  if (!(depth_straggle_nm >= 0.0)) throw Error(ErrorCode::InvalidParameter, "depth straggle must be >= 0");
}

std::vector<double> EnsembleResult::gss_values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.gss_ghz);
  return out;
}

namespace {

constexpr int kMaxPlacementAttempts = 100;
// Unit draws are scaled into a tensor at this strain before taking couplings,
// which are linear in strain.
constexpr double kUnitScale = 1e-3;

struct RandomTensorDraw {
  int orientation_id = 0;
  std::array<double, 6> normals{};
};

int draw_orientation(SplitMix64& rng) {
  std::uniform_int_distribution<int> pick(0, DefectOrientation::kCount - 1);
  return pick(rng);
}

std::array<double, 6> draw_normals(SplitMix64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<double, 6> z{};
  for (double& v : z) v = normal(rng);
  return z;
}

// Crystal- and defect-frame versions of a random tensor with component std sigma.
std::pair<StrainTensor, StrainTensor> random_tensor(const std::array<double, 6>& normals, double sigma,
                                                    Frame frame, const DefectOrientation& o) {
  std::array<double, 6> c{};
  for (std::size_t k = 0; k < 6; ++k) c[k] = sigma * normals[k];
  if (frame == Frame::Defect) {
    StrainTensor defect(c, Frame::Defect);
    return {rotate_strain(defect, o.rotation.transpose(), Frame::Crystal), defect};
  }
  StrainTensor crystal(c, Frame::Crystal);
  return {crystal, defect_frame_strain(crystal, o)};
}

struct Site {
  double x_nm = 0.0, y_nm = 0.0, depth_nm = 0.0;
  int orientation_id = 0;
};

Site draw_site(SplitMix64& rng, const PositionDistribution& pos, const CrossSection& section) {
  Site s;
  s.orientation_id = draw_orientation(rng);
  std::uniform_real_distribution<double> ux(-0.5 * pos.aperture_x_nm, 0.5 * pos.aperture_x_nm);
  std::uniform_real_distribution<double> uy(-0.5 * pos.aperture_y_nm, 0.5 * pos.aperture_y_nm);
  std::normal_distribution<double> depth(pos.depth_mean_nm, pos.depth_straggle_nm);
  s.y_nm = uy(rng);
  // The aperture is centred on the film's top edge.
  const double centre = section.film_left_nm() + 0.5 * section.film_width_nm();
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    const double x = ux(rng);
    const double d = depth(rng);
    if (d > 0.0 && d < section.depth_extent_nm() && section.contains({centre + x, section.top_nm() - d})) {
      s.x_nm = x;
      s.depth_nm = d;
      return s;
    }
  }
  throw Error(ErrorCode::DegenerateGeometry, "emitter placement left the substrate " +
                                                 std::to_string(kMaxPlacementAttempts) + " consecutive times");
}

void require_nonempty(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyRequest, "ensemble size must be at least 1");
}

// Bisection on a continuous nondecreasing mean(x) over [0, inf) with mean(0)
// at the floor. Returns the bracket endpoint whose mean is closest to target.
double bisect_mean(double target, double floor_value, double initial_hi, const std::function<double(double)>& mean,
                   const char* what) {
  if (!(target >= floor_value))
    throw Error(ErrorCode::Infeasible, std::string(what) + ": target mean " + std::to_string(target) +
                                           " GHz is below the unstrained floor " + std::to_string(floor_value) +
                                           " GHz");
  if (target == floor_value) return 0.0;

  double lo = 0.0, hi = initial_hi;
  double mean_hi = mean(hi);
  for (int i = 0; mean_hi < target; ++i) {
    if (i == 200) throw Error(ErrorCode::Infeasible, std::string(what) + ": could not bracket target mean");
    lo = hi;
    hi *= 2.0;
    mean_hi = mean(hi);
  }
  double mean_lo = lo == 0.0 ? floor_value : mean(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double m = mean(mid);
    if (m < target) {
      lo = mid;
      mean_lo = m;
    } else {
      hi = mid;
      mean_hi = m;
    }
    if (std::abs(m - target) < 1e-6) return mid;
  }
  return (target - mean_lo) <= (mean_hi - target) ? lo : hi;
}

}  // namespace

Summary summarize(const std::vector<EmitterSample>& samples, std::size_t histogram_bins) {
  if (samples.empty()) throw Error(ErrorCode::EmptyRequest, "no samples to summarize");
  std::vector<double> gss;
  gss.reserve(samples.size());
  for (const auto& s : samples) gss.push_back(s.gss_ghz);
  return summarize_values(gss, histogram_bins);
}

EnsembleResult sample_pre_deposition(std::size_t n, const IntrinsicStrainModel& model, const SivParameters& params,
                                     std::uint64_t seed, const SamplingOptions& options) {
  require_nonempty(n);
  model.validate();
  params.validate();

  EnsembleResult result;
  result.samples.resize(n);
  parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = sample_stream(seed, i);
      const int oid = draw_orientation(rng);
      const auto normals = draw_normals(rng);
      const DefectOrientation& o = DefectOrientation::get(oid);
      const auto [crystal, defect] = random_tensor(normals, model.sigma, model.sample_frame, o);
      EmitterSample& s = result.samples[i];
      s.orientation_id = oid;
      s.strain = crystal;
      s.gss_ghz = ground_state_splitting(eg_couplings(defect, params), params);
    }
  });
  result.summary = summarize(result.samples, options.histogram_bins);
  return result;
}

EnsembleResult sample_post_deposition(std::size_t n, const PostDepositionModel& model, const CrossSection& section,
                                      const StrainField& field, const SivParameters& params, std::uint64_t seed,
                                      const SamplingOptions& options) {
  require_nonempty(n);
  model.positions.validate();
  if (model.include_intrinsic) model.intrinsic.validate();
  params.validate();

  EnsembleResult result;
  result.samples.resize(n);
  parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = sample_stream(seed, i);
      const Site site = draw_site(rng, model.positions, section);
      const DefectOrientation& o = DefectOrientation::get(site.orientation_id);
      StrainTensor crystal = beam_to_crystal(strain_at(field, site.depth_nm));
      if (model.include_intrinsic) {
        const auto normals = draw_normals(rng);
        crystal = crystal + random_tensor(normals, model.intrinsic.sigma, model.intrinsic.sample_frame, o).first;
      }
      EmitterSample& s = result.samples[i];
      s.x_nm = site.x_nm;
      s.y_nm = site.y_nm;
      s.depth_nm = site.depth_nm;
      s.orientation_id = site.orientation_id;
      s.strain = crystal;
      s.gss_ghz = ground_state_splitting(crystal, o, params);
    }
  });
  result.summary = summarize(result.samples, options.histogram_bins);
  return result;
}

double calibrate_sigma(double target_mean_ghz, std::size_t n, std::uint64_t seed, const SivParameters& params,
                       Frame sample_frame, unsigned threads) {
  require_nonempty(n);
  params.validate();
  IntrinsicStrainModel{0.0, sample_frame}.validate();

  // Common random numbers: squared coupling magnitude per sample at unit sigma.
  std::vector<double> unit_r2(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = sample_stream(seed, i);
      const int oid = draw_orientation(rng);
      const auto normals = draw_normals(rng);
      const auto defect = random_tensor(normals, kUnitScale, sample_frame, DefectOrientation::get(oid)).second;
      const EgCouplings c = eg_couplings(defect, params);
      const double a = c.alpha_ghz / kUnitScale, b = c.beta_ghz / kUnitScale;
      unit_r2[i] = a * a + b * b;
    }
  });

  const double l2 = params.lambda_so_ghz * params.lambda_so_ghz;
  const auto mean = [&](double sigma) {
    const double s2 = sigma * sigma;
    return deterministic_sum(n, threads, [&](std::size_t i) { return std::sqrt(l2 + 4.0 * s2 * unit_r2[i]); }) /
           static_cast<double>(n);
  };
  return bisect_mean(target_mean_ghz, params.lambda_so_ghz, 1e-5, mean, "calibrate_sigma");
}

double calibrate_film_stress(double target_mean_ghz, const LayerStack& stack, const PostDepositionModel& model,
                             const SivParameters& params, std::size_t n, std::uint64_t seed, unsigned threads) {
  require_nonempty(n);
  params.validate();
  model.positions.validate();
  if (model.include_intrinsic) model.intrinsic.validate();

  constexpr double kReferenceStress = 100.0;  // MPa
  const StrainField field = solve_beam_state(stack.with_film_stress(kReferenceStress));

  struct Couplings {
    double film_alpha, film_beta, intrinsic_alpha, intrinsic_beta;
  };
  std::vector<Couplings> cache(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = sample_stream(seed, i);
      const Site site = draw_site(rng, model.positions, stack.section);
      const DefectOrientation& o = DefectOrientation::get(site.orientation_id);
      const StrainTensor crystal = beam_to_crystal(strain_at(field, site.depth_nm));
      const EgCouplings film = eg_couplings(defect_frame_strain(crystal, o), params);
      EgCouplings intrinsic;
      if (model.include_intrinsic) {
        const auto normals = draw_normals(rng);
        const auto crystal_intrinsic =
            random_tensor(normals, model.intrinsic.sigma, model.intrinsic.sample_frame, o).first;
        intrinsic = eg_couplings(defect_frame_strain(crystal_intrinsic, o), params);
      }
      cache[i] = {film.alpha_ghz / kReferenceStress, film.beta_ghz / kReferenceStress, intrinsic.alpha_ghz,
                  intrinsic.beta_ghz};
    }
  });

  const double l2 = params.lambda_so_ghz * params.lambda_so_ghz;
  const auto mean = [&](double stress) {
    return deterministic_sum(n, threads,
                             [&](std::size_t i) {
                               const Couplings& c = cache[i];
                               const double a = stress * c.film_alpha + c.intrinsic_alpha;
                               const double b = stress * c.film_beta + c.intrinsic_beta;
                               return std::sqrt(l2 + 4.0 * (a * a + b * b));
                             }) /
           static_cast<double>(n);
  };
  // With intrinsic strain the zero-stress mean sits above lambda_so.
  const double floor_value = model.include_intrinsic ? mean(0.0) : params.lambda_so_ghz;
  return bisect_mean(target_mean_ghz, floor_value, kReferenceStress, mean, "calibrate_film_stress");
}

}  // namespace strainforge
