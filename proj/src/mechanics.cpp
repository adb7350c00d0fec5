#include "strainforge/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "strainforge/errors.hpp"

namespace strainforge {

void Layer::validate(bool check_thickness) const {
  if (check_thickness && !(thickness_nm > 0.0))
    throw Error(ErrorCode::InvalidGeometry, "layer thickness must be positive");
  if (!(youngs_modulus_gpa > 0.0) || !std::isfinite(youngs_modulus_gpa))
    throw Error(ErrorCode::InvalidParameter, "Young's modulus must be positive");
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
    throw Error(ErrorCode::InvalidParameter, "Poisson ratio must lie in [0, 0.5)");
  if (!std::isfinite(intrinsic_stress_mpa)) throw Error(ErrorCode::InvalidParameter, "stress must be finite");
}

namespace {

double cross(Point2 a, Point2 b) { return a.lateral_nm * b.vertical_nm - b.lateral_nm * a.vertical_nm; }

double orient(Point2 a, Point2 b, Point2 c) {
  return (b.lateral_nm - a.lateral_nm) * (c.vertical_nm - a.vertical_nm) -
         (b.vertical_nm - a.vertical_nm) * (c.lateral_nm - a.lateral_nm);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.lateral_nm, b.lateral_nm) <= p.lateral_nm && p.lateral_nm <= std::max(a.lateral_nm, b.lateral_nm) &&
         std::min(a.vertical_nm, b.vertical_nm) <= p.vertical_nm && p.vertical_nm <= std::max(a.vertical_nm, b.vertical_nm);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

struct PolygonMoments {
  double area = 0.0;
  double first = 0.0;   // integral of v dA
  double second = 0.0;  // integral of v^2 dA
};

PolygonMoments polygon_moments(const std::vector<Point2>& pts) {
  PolygonMoments m;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = pts[i], b = pts[(i + 1) % n];
    const double c = cross(a, b);
    m.area += c;
    m.first += c * (a.vertical_nm + b.vertical_nm);
    m.second += c * (a.vertical_nm * a.vertical_nm + a.vertical_nm * b.vertical_nm + b.vertical_nm * b.vertical_nm);
  }
  m.area /= 2.0;
  m.first /= 6.0;
  m.second /= 12.0;
  return m;
}

}  // namespace

CrossSection::CrossSection(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw Error(ErrorCode::InvalidGeometry, "cross-section needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i], b = vertices_[(i + 1) % n];
    if (!std::isfinite(a.lateral_nm) || !std::isfinite(a.vertical_nm))
      throw Error(ErrorCode::InvalidGeometry, "cross-section vertex is not finite");
    if (a.lateral_nm == b.lateral_nm && a.vertical_nm == b.vertical_nm)
      throw Error(ErrorCode::InvalidGeometry, "cross-section has a zero-length edge");
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Point2 a1 = vertices_[i], a2 = vertices_[(i + 1) % n];
      const Point2 b1 = vertices_[j], b2 = vertices_[(j + 1) % n];
      if (adjacent) continue;
      if (segments_intersect(a1, a2, b1, b2))
        throw Error(ErrorCode::InvalidGeometry, "cross-section polygon is self-intersecting");
    }
  }

  const double area = polygon_moments(vertices_).area;
  if (!(area > 0.0))
    throw Error(ErrorCode::InvalidGeometry, "cross-section must have positive area with counterclockwise vertices");

  top_ = vertices_.front().vertical_nm;
  bottom_ = top_;
  for (const auto& p : vertices_) {
    top_ = std::max(top_, p.vertical_nm);
    bottom_ = std::min(bottom_, p.vertical_nm);
  }
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i], b = vertices_[(i + 1) % n];
    if (a.vertical_nm == top_ && b.vertical_nm == top_) {
      if (found) throw Error(ErrorCode::InvalidGeometry, "cross-section has more than one top edge");
      found = true;
      film_left_ = std::min(a.lateral_nm, b.lateral_nm);
      film_right_ = std::max(a.lateral_nm, b.lateral_nm);
    }
  }
  if (!found) throw Error(ErrorCode::InvalidGeometry, "cross-section has no horizontal top edge for the film");
}

bool CrossSection::contains(Point2 p) const noexcept {
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = vertices_[i], b = vertices_[j];
    if ((a.vertical_nm > p.vertical_nm) != (b.vertical_nm > p.vertical_nm)) {
      const double x = a.lateral_nm + (p.vertical_nm - a.vertical_nm) * (b.lateral_nm - a.lateral_nm) /
                                          (b.vertical_nm - a.vertical_nm);
      if (p.lateral_nm < x) inside = !inside;
    }
  }
  return inside;
}

SectionProperties section_properties(const CrossSection& cs, double youngs_modulus_gpa) {
  const PolygonMoments m = polygon_moments(cs.vertices());
  SectionProperties p;
  p.area_nm2 = m.area;
  p.centroid_vertical_nm = m.first / m.area;
  p.centroid_depth_nm = cs.top_nm() - p.centroid_vertical_nm;
  p.second_moment_nm4 = m.second - m.area * p.centroid_vertical_nm * p.centroid_vertical_nm;
  p.bending_stiffness = youngs_modulus_gpa * p.second_moment_nm4;
  return p;
}

void LayerStack::validate() const {
  substrate.validate(false);
  film.validate(true);
  if (!(biaxiality_factor >= 0.0) || !std::isfinite(biaxiality_factor))
    throw Error(ErrorCode::InvalidParameter, "biaxiality factor must be finite and non-negative");
}

std::vector<std::string> LayerStack::warnings() const {
  std::vector<std::string> out;
  const double depth = section.depth_extent_nm();
  if (film.thickness_nm > 0.2 * depth)
    out.push_back("film thickness " + std::to_string(film.thickness_nm) + " nm exceeds 20% of substrate depth " +
                  std::to_string(depth) + " nm; thin-film assumptions are stretched");
  return out;
}

LayerStack LayerStack::with_film_stress(double stress_mpa) const {
  LayerStack copy = *this;
  copy.film.intrinsic_stress_mpa = stress_mpa;
  return copy;
}

StrainField solve_beam_state(const LayerStack& stack) {
  stack.validate();
  const CrossSection& cs = stack.section;
  const PolygonMoments sub = polygon_moments(cs.vertices());

  const double w = cs.film_width_nm();
  const double v0 = cs.top_nm(), v1 = cs.top_nm() + stack.film.thickness_nm;
  const double film_area = w * (v1 - v0);
  const double film_first = w * (v1 * v1 - v0 * v0) / 2.0;
  const double film_second = w * (v1 * v1 * v1 - v0 * v0 * v0) / 3.0;

  const double es = stack.substrate.youngs_modulus_gpa;
  const double ef = stack.film.youngs_modulus_gpa;
  // MPa -> GPa for the eigenstrain; biaxial relaxation of the film.
  const double eigen = stack.film.intrinsic_stress_mpa * 1e-3 * (1.0 - stack.film.poisson_ratio) / ef;

  // Film stress ef (a + b v + eigen), substrate stress es (a + b v).
  const double k00 = es * sub.area + ef * film_area;
  const double k01 = es * sub.first + ef * film_first;
  const double k11 = es * sub.second + ef * film_second;
  const double r0 = -ef * eigen * film_area;
  const double r1 = -ef * eigen * film_first;

  // Shift to the modulus-weighted centroid so the 2x2 system is diagonal.
  const double vn = k01 / k00;
  const double k11c = k11 - k00 * vn * vn;
  const double r1c = r1 - r0 * vn;

  StrainField field;
  field.neutral_axis_nm = vn;
  field.membrane_strain = r0 / k00;
  field.curvature_per_nm = r1c / k11c;
  field.biaxiality_factor = stack.biaxiality_factor;
  field.substrate_poisson = stack.substrate.poisson_ratio;
  field.top_nm = cs.top_nm();
  field.bottom_nm = cs.bottom_nm();
  field.film_eigenstrain = eigen;
  return field;
}

StrainTensor strain_at(const StrainField& field, double depth_nm) {
  if (!(depth_nm >= 0.0 && depth_nm <= field.depth_extent_nm()))
    throw Error(ErrorCode::OutOfDomain, "depth " + std::to_string(depth_nm) + " nm outside substrate [0, " +
                                            std::to_string(field.depth_extent_nm()) + "]");
  const double eyy = field.axial_strain_at_vertical(field.top_nm - depth_nm);
  const double exx = field.biaxiality_factor * eyy;
  const double nu = field.substrate_poisson;
  const double ezz = -nu * (exx + eyy) / (1.0 - nu);
  return StrainTensor({exx, eyy, ezz, 0.0, 0.0, 0.0}, Frame::Beam);
}

const Eigen::Matrix3d& beam_rotation() {
  static const Eigen::Matrix3d rot = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3d r;
    r << s, -s, 0.0,
          s, s, 0.0,
          0.0, 0.0, 1.0;
    return r;
  }();
  return rot;
}

StrainTensor beam_to_crystal(const StrainTensor& eps_beam) {
  if (eps_beam.frame() != Frame::Beam)
    throw Error(ErrorCode::FrameMismatch,
                std::string("beam_to_crystal expects Beam strain, got ") + frame_name(eps_beam.frame()));
  return rotate_strain(eps_beam, beam_rotation().transpose(), Frame::Crystal);
}

}  // namespace strainforge
