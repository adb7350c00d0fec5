#pragma once

// Strain tensor algebra and the SiV ground-state splitting model.
//
// Strain enters the ground-state orbital doublet through the two E_g
// combinations
//
//   alpha = d (e_xx - e_yy) + f e_zx
//   beta  = -2 d e_xy       + f e_yz
//
// evaluated in the defect frame (Z along the <111> symmetry axis). The
// splitting between the lower and upper orbital branches is
//
//   gss = sqrt(lambda_so^2 + 4 (alpha^2 + beta^2)).

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace strainforge {

enum class Frame { Crystal, Beam, Defect };

const char* frame_name(Frame frame) noexcept;

// Symmetric 3x3 small strain, stored as (xx, yy, zz, xy, yz, zx).
// Off-diagonals are tensor (not engineering) shear components.
class StrainTensor {
 public:
  static constexpr double kMaxComponent = 0.1;

  StrainTensor() = default;
  explicit StrainTensor(Frame frame) : frame_(frame) {}
  StrainTensor(const std::array<double, 6>& components, Frame frame);

  static StrainTensor from_matrix(const Eigen::Matrix3d& m, Frame frame);
  static StrainTensor hydrostatic(double s, Frame frame);

  Eigen::Matrix3d matrix() const;

  const std::array<double, 6>& components() const noexcept { return c_; }
  Frame frame() const noexcept { return frame_; }

  double xx() const noexcept { return c_[0]; }
  double yy() const noexcept { return c_[1]; }
  double zz() const noexcept { return c_[2]; }
  double xy() const noexcept { return c_[3]; }
  double yz() const noexcept { return c_[4]; }
  double zx() const noexcept { return c_[5]; }

  double trace() const noexcept { return c_[0] + c_[1] + c_[2]; }
  // Frobenius norm; rotation invariant.
  double magnitude() const noexcept;

  // Componentwise sum; frames must agree.
  StrainTensor operator+(const StrainTensor& other) const;
  StrainTensor scaled(double k) const;

  bool operator==(const StrainTensor&) const = default;

 private:
  std::array<double, 6> c_{};
  Frame frame_ = Frame::Crystal;
};

struct SivParameters {
  double lambda_so_ghz = 46.0;
  // Ground-state E_g susceptibilities (Meesala et al., PRB 97, 205444).
  double d_ghz_per_strain = 1.3e6;
  double f_ghz_per_strain = -0.25e6;

  void validate() const;
};

struct DefectOrientation {
  int id = 0;
  Eigen::Vector3d axis;      // normalized <111> direction, crystal coordinates
  Eigen::Matrix3d rotation;  // rows are the defect X, Y, Z axes in crystal coordinates

  static constexpr int kCount = 4;

  // Orientation 0 is [111] with X along [-1-12] and Y along [1-10]; the other
  // three are its images under the C2 rotations about [001], [010], [100]:
  // ids 1..3 are [-1-11], [-11-1], [1-1-1].
  static const DefectOrientation& get(int id);
  static const std::array<DefectOrientation, kCount>& all();
};

struct EgCouplings {
  double alpha_ghz = 0.0;
  double beta_ghz = 0.0;
};

// rot must be a proper rotation; returns rot * eps * rot^T tagged target_frame.
StrainTensor rotate_strain(const StrainTensor& eps, const Eigen::Matrix3d& rot, Frame target_frame);

StrainTensor defect_frame_strain(const StrainTensor& eps_crystal, const DefectOrientation& orientation);

EgCouplings eg_couplings(const StrainTensor& eps_defect, const SivParameters& params);

double ground_state_splitting(const EgCouplings& c, const SivParameters& params);

// Convenience: crystal-frame strain straight to gss for one orientation.
double ground_state_splitting(const StrainTensor& eps_crystal, const DefectOrientation& orientation,
                              const SivParameters& params);

}  // namespace strainforge
