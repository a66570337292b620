#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "porolb/errors.hpp"
#include "porolb/geometry.hpp"

using namespace porolb;

namespace {

double min_image_distance(const Vec3& a, const Vec3& b, const Box3& box) {
  double dx = a[0] - b[0];
  double dy = a[1] - b[1];
  dx -= box.lx * std::round(dx / box.lx);
  dy -= box.ly * std::round(dy / box.ly);
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double bulk_porosity(const VoxelGeometry& geom, int z_lo, int z_hi) {
  std::int64_t fluid = 0, total = 0;
  for (int z = z_lo; z <= z_hi; ++z) {
    fluid += std::llround(geom.porosity[z] * geom.dims.nx * geom.dims.ny);
    total += static_cast<std::int64_t>(geom.dims.nx) * geom.dims.ny;
  }
  return static_cast<double>(fluid) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("single sphere comes to rest on the plate") {
  PackingParams pp;
  pp.box = {40, 40, 40};
  pp.r_mean = 8.0;
  pp.r_spread = 0.0;
  pp.target_fill_height = 0.0;
  pp.bottom_plate_z = 0.0;
  pp.seed = 123;
  pp.max_consecutive_rejects = 1;  // accept cap blocks everything beyond layer one
  pp.headroom = 16.0;
  const SpherePack pack = generate_packing(pp);
  REQUIRE(pack.spheres.size() >= 1);
  CHECK(pack.spheres[0].center[2] == pp.bottom_plate_z + 8.0);
}

TEST_CASE("packing is deterministic for a fixed seed") {
  PackingParams pp;
  pp.box = {40, 40, 60};
  pp.r_mean = 5.0;
  pp.r_spread = 0.5;
  pp.target_fill_height = 20.0;
  pp.seed = 77;
  const SpherePack a = generate_packing(pp);
  const SpherePack b = generate_packing(pp);
  REQUIRE(a.spheres.size() == b.spheres.size());
  for (std::size_t i = 0; i < a.spheres.size(); ++i) {
    CHECK(a.spheres[i].center[0] == b.spheres[i].center[0]);
    CHECK(a.spheres[i].center[1] == b.spheres[i].center[1]);
    CHECK(a.spheres[i].center[2] == b.spheres[i].center[2]);
    CHECK(a.spheres[i].radius == b.spheres[i].radius);
  }
}

TEST_CASE("packing respects the overlap tolerance") {
  PackingParams pp;
  pp.box = {50, 50, 60};
  pp.r_mean = 5.0;
  pp.r_spread = 0.5;
  pp.target_fill_height = 25.0;
  pp.seed = 9;
  const SpherePack pack = generate_packing(pp);
  REQUIRE(pack.spheres.size() > 10);
  for (std::size_t i = 0; i < pack.spheres.size(); ++i) {
    for (std::size_t j = i + 1; j < pack.spheres.size(); ++j) {
      const double d =
          min_image_distance(pack.spheres[i].center, pack.spheres[j].center, pack.box);
      const double rr = pack.spheres[i].radius + pack.spheres[j].radius;
      const double tol = 1e-6 * std::min(pack.spheres[i].radius, pack.spheres[j].radius);
      CHECK(d >= rr - tol);
    }
  }
}

TEST_CASE("random loose packing lands in the expected porosity band") {
  PackingParams pp;
  pp.box = {100, 100, 100};
  pp.r_mean = 8.0;
  pp.r_spread = 0.5;
  pp.target_fill_height = 50.0;
  pp.seed = 2024;
  const SpherePack pack = generate_packing(pp);
  CHECK(pack.achieved_height >= 50.0);

  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  const VoxelGeometry geom = voxelize(pack, {100, 100, 100}, opt);
  // Bulk window away from the plate and the loose top surface.
  const double eps = bulk_porosity(geom, 10, 40);
  CHECK(eps >= 0.36);
  CHECK(eps <= 0.45);
}

TEST_CASE("packing failure reports the achieved height") {
  PackingParams pp;
  pp.box = {20, 20, 20};
  pp.r_mean = 6.0;
  pp.r_spread = 0.0;
  pp.target_fill_height = 500.0;  // unreachable under the acceptance cap
  pp.seed = 3;
  pp.max_consecutive_rejects = 50;
  CHECK_THROWS_AS(generate_packing(pp), GeometryError);
}

TEST_CASE("voxelize: empty pack is all fluid") {
  SpherePack pack;
  pack.box = {8, 8, 8};
  VoxelizeOptions opt;
  opt.periodic = {true, true, true};
  const VoxelGeometry geom = voxelize(pack, {8, 8, 8}, opt);
  CHECK(geom.fluid_cells == 8 * 8 * 8);
  CHECK(geom.links.empty());
  for (double e : geom.porosity) CHECK(e == 1.0);
}

TEST_CASE("voxelize: sphere voxel volume within 10% of the analytic volume") {
  SpherePack pack;
  pack.box = {24, 24, 24};
  pack.spheres.push_back({{12.5, 12.5, 12.5}, 4.5});  // centered on a cell center
  VoxelizeOptions opt;
  opt.periodic = {true, true, true};
  const VoxelGeometry geom = voxelize(pack, {24, 24, 24}, opt);
  const std::int64_t solid = geom.dims.cells() - geom.fluid_cells;
  const double analytic = 4.0 / 3.0 * 3.14159265358979323846 * 4.5 * 4.5 * 4.5;
  CHECK(std::abs(solid - analytic) <= 0.10 * analytic);
  CHECK(!geom.links.empty());
  for (const BoundaryLink& l : geom.links) {
    CHECK(l.q > 0.0f);
    CHECK(l.q <= 1.0f);
  }
}

TEST_CASE("voxel porosity error halves when the resolution doubles") {
  const double analytic_fraction = [](double r, double L) {
    return 1.0 - 4.0 / 3.0 * 3.14159265358979323846 * r * r * r / (L * L * L);
  }(4.5, 24.0);
  double errors[2];
  int idx = 0;
  for (int scale : {1, 2}) {
    SpherePack pack;
    const double L = 24.0 * scale;
    pack.box = {L, L, L};
    pack.spheres.push_back({{L / 2 + 0.5, L / 2 + 0.5, L / 2 + 0.5}, 4.5 * scale});
    VoxelizeOptions opt;
    opt.periodic = {true, true, true};
    const VoxelGeometry geom = voxelize(pack, {24 * scale, 24 * scale, 24 * scale}, opt);
    const double eps = static_cast<double>(geom.fluid_cells) / geom.dims.cells();
    errors[idx++] = std::abs(eps - analytic_fraction);
  }
  CHECK(errors[1] <= 0.55 * errors[0]);
}

TEST_CASE("plane walls sit midway: every wall link has q = 1/2") {
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  const VoxelGeometry geom = make_box_geometry({6, 6, 10}, opt);
  REQUIRE(!geom.links.empty());
  for (const BoundaryLink& l : geom.links) CHECK(l.q == 0.5f);
  CHECK(geom.q_fallback_count == 0);
}

TEST_CASE("every fluid->solid direction has exactly one link") {
  SpherePack pack;
  pack.box = {16, 16, 16};
  pack.spheres.push_back({{8.2, 7.9, 8.4}, 3.7});
  VoxelizeOptions opt;
  opt.periodic = {true, true, true};
  const VoxelGeometry geom = voxelize(pack, {16, 16, 16}, opt);
  const LatticeModel& m = LatticeModel::d3q19();
  // Count expected links by brute force.
  std::int64_t expected = 0;
  for (int z = 0; z < 16; ++z) {
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        if (geom.flag(geom.dims.index(x, y, z)) != CellFlag::Fluid) continue;
        for (int k = 1; k < kQ; ++k) {
          const int xn = (x + m.e[k][0] + 16) % 16;
          const int yn = (y + m.e[k][1] + 16) % 16;
          const int zn = (z + m.e[k][2] + 16) % 16;
          if (geom.flag(geom.dims.index(xn, yn, zn)) != CellFlag::Fluid) ++expected;
        }
      }
    }
  }
  CHECK(static_cast<std::int64_t>(geom.links.size()) == expected);
}

TEST_CASE("porosity profile matches an independent per-plane count") {
  PackingParams pp;
  pp.box = {32, 32, 40};
  pp.r_mean = 4.0;
  pp.r_spread = 0.3;
  pp.target_fill_height = 16.0;
  pp.seed = 5;
  const SpherePack pack = generate_packing(pp);
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  const VoxelGeometry geom = voxelize(pack, {32, 32, 40}, opt);
  const ProfileData prof = porosity_profile(geom);
  for (int z = 0; z < 40; ++z) {
    std::int64_t fluid = 0;
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        if (geom.flag(geom.dims.index(x, y, z)) == CellFlag::Fluid) ++fluid;
      }
    }
    CHECK(prof.epsilon[z] == doctest::Approx(fluid / 1024.0).epsilon(1e-15));
    CHECK(prof.epsilon[z] == doctest::Approx(geom.porosity[z]).epsilon(1e-15));
  }
}

TEST_CASE("porosity profile of a half-solid plane") {
  VoxelGeometry geom;
  geom.dims = {4, 4, 3};
  geom.flags.assign(geom.dims.cells(), static_cast<std::uint8_t>(CellFlag::Fluid));
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 2; ++x) {
      geom.flags[geom.dims.index(x, y, 1)] = static_cast<std::uint8_t>(CellFlag::Solid);
    }
  }
  const ProfileData prof = porosity_profile(geom);
  CHECK(prof.epsilon[0] == 1.0);
  CHECK(prof.epsilon[1] == 0.5);
  CHECK(prof.epsilon[2] == 1.0);
}

TEST_CASE("offset plate removes the near-wall porosity spike") {
  const auto build = [](double plate_z, std::uint64_t seed) {
    PackingParams pp;
    pp.box = {48, 48, 60};
    pp.r_mean = 4.0;
    pp.r_spread = 0.5;
    pp.target_fill_height = 24.0;
    pp.bottom_plate_z = plate_z;
    pp.seed = seed;
    const SpherePack pack = generate_packing(pp);
    VoxelizeOptions opt;
    opt.periodic = {true, true, false};
    opt.wall_z_lo = true;
    opt.wall_z_hi = true;
    return voxelize(pack, {48, 48, 60}, opt);
  };
  const VoxelGeometry flush = build(1.0, 21);
  const VoxelGeometry offset = build(1.0 - 2.0 * 4.0, 21);
  // Min porosity over the lowest 2r fluid planes (z = 1 .. 8).
  double min_flush = 1.0, min_offset = 1.0;
  for (int z = 1; z <= 8; ++z) {
    min_flush = std::min(min_flush, flush.porosity[z]);
    min_offset = std::min(min_offset, offset.porosity[z]);
  }
  CHECK(min_offset < min_flush);
}

TEST_CASE("open non-periodic face is a configuration error") {
  SpherePack pack;
  pack.box = {8, 8, 8};
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};  // no z walls either
  CHECK_THROWS_AS(voxelize(pack, {8, 8, 8}, opt), ConfigError);
}
