#include "strainforge/core_model.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "strainforge/errors.hpp"

namespace strainforge {

const char* frame_name(Frame frame) noexcept {
  switch (frame) {
    case Frame::Crystal: return "Crystal";
    case Frame::Beam: return "Beam";
    case Frame::Defect: return "Defect";
  }
  return "?";
}

StrainTensor::StrainTensor(const std::array<double, 6>& components, Frame frame)
    : c_(components), frame_(frame) {
  for (double v : c_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "strain component is not finite");
    if (std::abs(v) >= kMaxComponent)
      throw Error(ErrorCode::InvalidArgument,
                  "strain component " + std::to_string(v) + " outside small-strain regime");
  }
}

StrainTensor StrainTensor::from_matrix(const Eigen::Matrix3d& m, Frame frame) {
  // Average the off-diagonal pairs; callers produce matrices that are
  // symmetric up to rounding.
  return StrainTensor({m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(1, 2) + m(2, 1)),
                       0.5 * (m(2, 0) + m(0, 2))},
                      frame);
}

StrainTensor StrainTensor::hydrostatic(double s, Frame frame) { return StrainTensor({s, s, s, 0, 0, 0}, frame); }

Eigen::Matrix3d StrainTensor::matrix() const {
  Eigen::Matrix3d m;
  m << c_[0], c_[3], c_[5],
       c_[3], c_[1], c_[4],
       c_[5], c_[4], c_[2];
  return m;
}

double StrainTensor::magnitude() const noexcept {
  double s = c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2];
  s += 2.0 * (c_[3] * c_[3] + c_[4] * c_[4] + c_[5] * c_[5]);
  return std::sqrt(s);
}

StrainTensor StrainTensor::operator+(const StrainTensor& other) const {
  if (other.frame_ != frame_)
    throw Error(ErrorCode::FrameMismatch,
                std::string("cannot add ") + frame_name(other.frame_) + " strain to " + frame_name(frame_));
  std::array<double, 6> sum{};
  for (std::size_t i = 0; i < 6; ++i) sum[i] = c_[i] + other.c_[i];
  return StrainTensor(sum, frame_);
}

StrainTensor StrainTensor::scaled(double k) const {
  std::array<double, 6> out{};
  for (std::size_t i = 0; i < 6; ++i) out[i] = k * c_[i];
  return StrainTensor(out, frame_);
}

void SivParameters::validate() const {
  if (!(lambda_so_ghz > 0.0) || !std::isfinite(lambda_so_ghz))
    throw Error(ErrorCode::InvalidParameter, "lambda_so_ghz must be positive and finite");
  if (!std::isfinite(d_ghz_per_strain) || !std::isfinite(f_ghz_per_strain))
    throw Error(ErrorCode::InvalidParameter, "strain susceptibilities must be finite");
}

namespace {

constexpr double kRotationTolerance = 1e-10;

void require_rotation(const Eigen::Matrix3d& rot) {
  if (!rot.allFinite()) throw Error(ErrorCode::InvalidRotation, "rotation has non-finite entries");
  const double ortho = (rot * rot.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = rot.determinant();
  if (ortho > kRotationTolerance || std::abs(det - 1.0) > kRotationTolerance)
    throw Error(ErrorCode::InvalidRotation, "matrix is not a proper rotation (orthonormality error " +
                                                std::to_string(ortho) + ", det " + std::to_string(det) + ")");
}

std::array<DefectOrientation, DefectOrientation::kCount> build_orientations() {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  Eigen::Matrix3d base;
  base.row(0) = Eigen::Vector3d(-1, -1, 2) / s6;
  base.row(1) = Eigen::Vector3d(1, -1, 0) / s2;
  base.row(2) = Eigen::Vector3d(1, 1, 1) / s3;

  // C2 about z, y, x; each maps [111] to one of the other three axes.
  const std::array<Eigen::Matrix3d, 4> ops = {
      Eigen::Matrix3d::Identity(),
      Eigen::Vector3d(-1, -1, 1).asDiagonal().toDenseMatrix(),
      Eigen::Vector3d(-1, 1, -1).asDiagonal().toDenseMatrix(),
      Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix(),
  };

  std::array<DefectOrientation, DefectOrientation::kCount> out;
  for (int i = 0; i < DefectOrientation::kCount; ++i) {
    // Rows transform as vectors: row' = op * row, i.e. R' = R * op^T.
    out[i].id = i;
    out[i].rotation = base * ops[i].transpose();
    out[i].axis = out[i].rotation.row(2).transpose();
  }
  return out;
}

}  // namespace

const std::array<DefectOrientation, DefectOrientation::kCount>& DefectOrientation::all() {
  static const auto table = build_orientations();
  return table;
}

const DefectOrientation& DefectOrientation::get(int id) {
  if (id < 0 || id >= kCount)
    throw Error(ErrorCode::InvalidArgument, "orientation id " + std::to_string(id) + " not in [0, 4)");
  return all()[static_cast<std::size_t>(id)];
}

StrainTensor rotate_strain(const StrainTensor& eps, const Eigen::Matrix3d& rot, Frame target_frame) {
  require_rotation(rot);
  const Eigen::Matrix3d out = rot * eps.matrix() * rot.transpose();
  return StrainTensor::from_matrix(out, target_frame);
}

StrainTensor defect_frame_strain(const StrainTensor& eps_crystal, const DefectOrientation& orientation) {
  if (eps_crystal.frame() != Frame::Crystal)
    throw Error(ErrorCode::FrameMismatch,
                std::string("defect_frame_strain expects Crystal strain, got ") + frame_name(eps_crystal.frame()));
  return rotate_strain(eps_crystal, orientation.rotation, Frame::Defect);
}

EgCouplings eg_couplings(const StrainTensor& eps, const SivParameters& params) {
  if (eps.frame() != Frame::Defect)
    throw Error(ErrorCode::FrameMismatch,
                std::string("eg_couplings expects Defect strain, got ") + frame_name(eps.frame()));
  const double d = params.d_ghz_per_strain;
  const double f = params.f_ghz_per_strain;
  return {d * (eps.xx() - eps.yy()) + f * eps.zx(), -2.0 * d * eps.xy() + f * eps.yz()};
}

double ground_state_splitting(const EgCouplings& c, const SivParameters& params) {
  if (!std::isfinite(params.lambda_so_ghz) || params.lambda_so_ghz < 0.0)
    throw Error(ErrorCode::InvalidParameter, "lambda_so_ghz must be non-negative and finite");
  const double l = params.lambda_so_ghz;
  return std::sqrt(l * l + 4.0 * (c.alpha_ghz * c.alpha_ghz + c.beta_ghz * c.beta_ghz));
}

double ground_state_splitting(const StrainTensor& eps_crystal, const DefectOrientation& orientation,
                              const SivParameters& params) {
  return ground_state_splitting(eg_couplings(defect_frame_strain(eps_crystal, orientation), params), params);
}

}  // namespace strainforge
