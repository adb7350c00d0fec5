#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "strainforge/mechanics.hpp"
#include "strainforge/population.hpp"

namespace strainforge {

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// index,x_nm,y_nm,depth_nm,orientation_id,eps_xx,eps_yy,eps_zz,eps_xy,eps_yz,eps_zx,gss_ghz
void write_samples_csv(std::ostream& out, const EnsembleResult& ensemble);

// depth_nm,eps_xx,eps_yy,eps_zz (beam frame) from the interface to the bottom.
void write_depth_profile_csv(std::ostream& out, const StrainField& field, double step_nm);

}  // namespace strainforge
