#pragma once

// Composite Euler-Bernoulli model of a thin stressed film on a prismatic
// cantilever. The cross-section lies in the (lateral, vertical) plane, which
// is the beam-frame (x, z) plane; the beam axis y runs along crystal [110].
//
// The film carries a misfit eigenstrain sigma_f (1 - nu_f) / E_f. Axial
// strain through the composite section is e(v) = a + b v, with a and b fixed
// by zero net axial force and zero net bending moment.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "strainforge/core_model.hpp"

namespace strainforge {

struct Layer {
  double thickness_nm = 0.0;  // unused for the substrate; the polygon sets its shape
  double youngs_modulus_gpa = 0.0;
  double poisson_ratio = 0.0;
  double intrinsic_stress_mpa = 0.0;  // tensile positive

  void validate(bool check_thickness = true) const;
};

struct Point2 {
  double lateral_nm = 0.0;
  double vertical_nm = 0.0;
};

class CrossSection {
 public:
  // Counterclockwise simple polygon. The film sits on the unique horizontal
  // edge at the maximum vertical coordinate.
  explicit CrossSection(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  double top_nm() const noexcept { return top_; }
  double bottom_nm() const noexcept { return bottom_; }
  double depth_extent_nm() const noexcept { return top_ - bottom_; }
  double film_width_nm() const noexcept { return film_right_ - film_left_; }
  double film_left_nm() const noexcept { return film_left_; }

  bool contains(Point2 p) const noexcept;

 private:
  std::vector<Point2> vertices_;
  double top_ = 0.0;
  double bottom_ = 0.0;
  double film_left_ = 0.0;
  double film_right_ = 0.0;
};

struct SectionProperties {
  double area_nm2 = 0.0;
  double centroid_vertical_nm = 0.0;  // in polygon coordinates
  double centroid_depth_nm = 0.0;     // below the top edge
  double second_moment_nm4 = 0.0;     // about the horizontal centroidal axis
  double bending_stiffness = 0.0;     // E * I, GPa nm^4
};

SectionProperties section_properties(const CrossSection& cs, double youngs_modulus_gpa);

struct LayerStack {
  Layer substrate;
  CrossSection section;
  Layer film;
  double biaxiality_factor = 1.0;

  void validate() const;
  // Non-fatal diagnostics (e.g. film not thin relative to the substrate).
  std::vector<std::string> warnings() const;
  LayerStack with_film_stress(double stress_mpa) const;
};

struct StrainField {
  double neutral_axis_nm = 0.0;  // vertical coordinate of the modulus-weighted centroid
  double membrane_strain = 0.0;  // axial strain at the neutral axis
  double curvature_per_nm = 0.0; // d(axial strain)/d(vertical)
  double biaxiality_factor = 1.0;
  double substrate_poisson = 0.0;
  double top_nm = 0.0;
  double bottom_nm = 0.0;
  double film_eigenstrain = 0.0;

  // Axial strain at a vertical coordinate (either layer).
  double axial_strain_at_vertical(double vertical_nm) const noexcept {
    return membrane_strain + curvature_per_nm * (vertical_nm - neutral_axis_nm);
  }
  double depth_extent_nm() const noexcept { return top_nm - bottom_nm; }
};

StrainField solve_beam_state(const LayerStack& stack);

// Beam-frame tensor at a depth below the film/substrate interface.
StrainTensor strain_at(const StrainField& field, double depth_nm);

// Rows: beam x || [1-10], y || [110], z || [001] in crystal coordinates.
const Eigen::Matrix3d& beam_rotation();

StrainTensor beam_to_crystal(const StrainTensor& eps_beam);

}  // namespace strainforge
