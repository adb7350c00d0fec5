#include "strainforge/io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <system_error>

#include <fmt/format.h>

#include "strainforge/errors.hpp"

namespace strainforge {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename into " + path.string());
  }
}

void write_samples_csv(std::ostream& out, const EnsembleResult& ensemble) {
  out << "index,x_nm,y_nm,depth_nm,orientation_id,eps_xx,eps_yy,eps_zz,eps_xy,eps_yz,eps_zx,gss_ghz\n";
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < ensemble.samples.size(); ++i) {
    const EmitterSample& s = ensemble.samples[i];
    const auto& c = s.strain.components();
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{},{},{},{}\n", i, s.x_nm, s.y_nm, s.depth_nm,
                   s.orientation_id, c[0], c[1], c[2], c[3], c[4], c[5], s.gss_ghz);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_depth_profile_csv(std::ostream& out, const StrainField& field, double step_nm) {
  if (!(step_nm > 0.0)) throw Error(ErrorCode::InvalidArgument, "depth step must be positive");
  out << "depth_nm,eps_xx,eps_yy,eps_zz\n";
  const double extent = field.depth_extent_nm();
  const auto steps = static_cast<std::size_t>(std::floor(extent / step_nm + 1e-9));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double depth = std::min(extent, static_cast<double>(k) * step_nm);
    const StrainTensor e = strain_at(field, depth);
    out << fmt::format("{},{},{},{}\n", depth, e.xx(), e.yy(), e.zz());
  }
}

}  // namespace strainforge
