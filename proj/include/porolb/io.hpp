#pragma once

#include <string>
#include <utility>
#include <vector>

#include "porolb/geometry.hpp"
#include "porolb/profile.hpp"
#include "porolb/simulation.hpp"

namespace porolb {

/// Profile CSV: metadata as `# key = value` comment lines, then a header
/// `z,U_superficial,U_intrinsic,epsilon,U_normalized` and one row per plane.
/// Doubles are printed with 17 significant digits so rereads are exact.
void write_profile_csv(const std::string& path, const ProfileData& profile);
ProfileData read_profile_csv(const std::string& path);

/// Two aligned profiles on a's z grid (b interpolated), for comparison plots.
void write_comparison_csv(const std::string& path, const ProfileData& a,
                          const std::string& name_a, const ProfileData& b,
                          const std::string& name_b);

/// Key-value run report, one `key = value` per line.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

/// Legacy VTK structured points with the measured velocity vector field,
/// density fluctuation and flags.
void write_vtk(const std::string& path, const Simulation& sim);

/// Sphere pack CSV: `x,y,z,r` with a `# box = lx ly lz plate_z` comment.
void write_sphere_csv(const std::string& path, const SpherePack& pack);
SpherePack read_sphere_csv(const std::string& path);

/// Voxel file: one ASCII header line `porolb-voxel 1 nx ny nz px py pz`
/// followed by nx*ny*nz raw flag bytes (0 fluid, 1 solid, 2 wall), x fastest.
void write_voxel_file(const std::string& path, const VoxelGeometry& geom);
/// Rebuilds links from flags with q = 1/2 (file carries no surface data).
VoxelGeometry read_voxel_file(const std::string& path);

std::string format_double(double v);

}  // namespace porolb
