#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "porolb/boundary.hpp"
#include "porolb/field.hpp"
#include "porolb/lattice.hpp"
#include "porolb/profile.hpp"

namespace porolb {

struct Sphere {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.0;
};

struct Box3 {
  double lx = 0.0, ly = 0.0, lz = 0.0;
};

/// A settled random sphere packing. Horizontal coordinates are periodic in
/// the box; the supporting plate may sit below z = 0 (offset-plate mode).
struct SpherePack {
  std::vector<Sphere> spheres;
  Box3 box;
  double bottom_plate_z = 0.0;
  std::uint64_t seed = 0;
  double achieved_height = 0.0;  // max over spheres of z + r
};

struct PackingParams {
  Box3 box;
  double r_mean = 8.0;
  double r_spread = 0.5;  // radii uniform in r_mean * (1 +- r_spread)
  double target_fill_height = 0.0;
  double bottom_plate_z = 0.0;
  std::uint64_t seed = 1;
  int max_consecutive_rejects = 400;
  double headroom = -1.0;  // acceptance cap above the target; default r_mean
};

/// Sequential drop-and-roll deposition: sample (x, y), drop from the top,
/// roll on contacts to a stable rest (plate support, or a contact set whose
/// normals can balance gravity). Deterministic for a fixed seed.
/// Throws GeometryError when the target fill height is not reached before
/// the rejection budget is exhausted.
SpherePack generate_packing(const PackingParams& params);

struct VoxelizeOptions {
  PeriodicAxes periodic{true, true, false};
  bool wall_z_lo = false;  // flag layer z=0 as WALL, surface plane at z=1
  bool wall_z_hi = false;  // flag layer z=nz-1 as WALL, plane at z=nz-1
  double q_clamp_min = 0.05;
  WallScheme scheme = WallScheme::CLI;  // recorded only; links carry q for both
};

/// Voxelized geometry: per-cell flags, one boundary link per fluid->solid
/// lattice direction with its exact wall distance q, and the per-plane
/// porosity (fluid fraction).
struct VoxelGeometry {
  Dims dims;
  PeriodicAxes periodic{true, true, false};
  std::vector<std::uint8_t> flags;
  std::vector<BoundaryLink> links;
  std::vector<double> porosity;  // one entry per z-plane
  std::int64_t fluid_cells = 0;
  int q_fallback_count = 0;  // links where no exact surface hit was found
  std::optional<double> wall_plane_lo, wall_plane_hi;  // channel plate elevations

  CellFlag flag(std::int64_t cell) const { return static_cast<CellFlag>(flags[cell]); }
};

/// Cell centers sit at (i+1/2, j+1/2, k+1/2); a cell is SOLID when its
/// center lies inside any sphere (periodic images included) or at/below the
/// plate. q values come from exact ray-sphere / ray-plane intersections,
/// clamped from below at options.q_clamp_min.
/// Throws GeometryError when no fluid cells remain and ConfigError when a
/// non-periodic open face leaves links unresolved.
VoxelGeometry voxelize(const SpherePack& pack, Dims dims, const VoxelizeOptions& options);

/// Convenience: geometry of an empty channel or box (no spheres).
VoxelGeometry make_box_geometry(Dims dims, const VoxelizeOptions& options);

/// Per-plane porosity recounted from the flags, as a ProfileData with zeroed
/// velocity columns; plane coordinates sit at cell centers.
ProfileData porosity_profile(const VoxelGeometry& geom);

}  // namespace porolb
