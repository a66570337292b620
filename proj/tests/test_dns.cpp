#include <doctest.h>

#include <cmath>

#include "porolb/dns.hpp"
#include "porolb/errors.hpp"
#include "porolb/io.hpp"

using namespace porolb;

namespace {

RunConfig channel_config(int height, double nu, double g, WallScheme scheme,
                         double lambda = 3.0 / 16.0) {
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  RunConfig cfg;
  cfg.geometry = make_box_geometry({4, 4, height + 2}, opt);
  cfg.nu = nu;
  cfg.lambda = lambda;
  cfg.scheme = scheme;
  cfg.drive.mode = DriveMode::BodyForce;
  cfg.drive.magnitude = {g, 0.0, 0.0};
  cfg.steady.tolerance = 1e-12;
  cfg.steady.check_interval = 500;
  cfg.steady.max_steps = 500000;
  return cfg;
}

}  // namespace

TEST_CASE("force-driven Poiseuille matches the parabola at every interior cell") {
  const int H = 16;
  const double nu = 1.0 / 6.0, g = 1e-8;
  const RunConfig cfg = channel_config(H, nu, g, WallScheme::SBB);
  const DnsResult run = run_to_steady(cfg);
  REQUIRE(run.stats.converged);
  for (std::size_t i = 0; i < run.profile.z.size(); ++i) {
    const double zz = run.profile.z[i] - run.profile.z0;
    const double exact = g / (2.0 * nu) * zz * (H - zz);
    CHECK(std::abs(run.profile.u_superficial[i] - exact) <= 1e-8 * exact);
  }
  CHECK(run.profile.u_max == doctest::Approx(g * H * H / (8.0 * nu)).epsilon(1e-8));
}

TEST_CASE("pressure drive and the equivalent body force give identical profiles") {
  const int H = 12;
  const double nu = 1.0 / 6.0;
  RunConfig a = channel_config(H, nu, 0.0, WallScheme::SBB);
  a.drive.mode = DriveMode::PressureGradientAsForce;
  a.drive.magnitude = {2e-6, 0.0, 0.0};
  a.drive.channel_length = 200.0;
  const RunConfig b = channel_config(H, nu, 1e-8, WallScheme::SBB);
  const DnsResult ra = run_to_steady(a);
  const DnsResult rb = run_to_steady(b);
  for (std::size_t i = 0; i < ra.profile.z.size(); ++i) {
    CHECK(ra.profile.u_superficial[i] ==
          doctest::Approx(rb.profile.u_superficial[i]).epsilon(1e-12));
  }
}

TEST_CASE("permeability estimator returns H^2/12 on the analytic Poiseuille profile") {
  const double H = 64.0, nu = 0.1, g = 1e-7;
  ProfileData prof;
  prof.nu = nu;
  prof.body_force = {g, 0.0, 0.0};
  const int n = 512;  // fine midpoint sampling; the plane average is exact
  for (int i = 0; i < n; ++i) {
    const double z = (i + 0.5) * H / n;
    prof.z.push_back(z);
    prof.u_superficial.push_back(g / (2.0 * nu) * z * (H - z));
    prof.u_intrinsic.push_back(prof.u_superficial.back());
    prof.epsilon.push_back(1.0);
  }
  const PermeabilityEstimate est = measure_permeability(prof, 0.0, H);
  CHECK(est.k == doctest::Approx(H * H / 12.0).epsilon(1e-10));
  CHECK(!est.plateau_warning);
}

TEST_CASE("superficial equals porosity times intrinsic velocity") {
  PackingParams pp;
  pp.box = {24, 24, 32};
  pp.r_mean = 4.0;
  pp.r_spread = 0.4;
  pp.target_fill_height = 12.0;
  pp.seed = 12;
  pp.bottom_plate_z = 1.0;
  const SpherePack pack = generate_packing(pp);
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  RunConfig cfg;
  cfg.geometry = voxelize(pack, {24, 24, 32}, opt);
  cfg.nu = 1.0 / 6.0;
  cfg.scheme = WallScheme::CLI;
  cfg.drive.magnitude = {1e-8, 0.0, 0.0};
  cfg.steady.tolerance = 1e-9;
  cfg.steady.check_interval = 500;
  cfg.steady.max_steps = 100000;
  const DnsResult run = run_to_steady(cfg);
  for (std::size_t i = 0; i < run.profile.z.size(); ++i) {
    CHECK(run.profile.u_superficial[i] ==
          doctest::Approx(run.profile.epsilon[i] * run.profile.u_intrinsic[i])
              .epsilon(1e-12));
  }
  CHECK(run.stats.cli_fallbacks >= 0);
}

TEST_CASE("Stokes linearity: doubling the drive doubles the profile") {
  PackingParams pp;
  pp.box = {20, 20, 28};
  pp.r_mean = 4.0;
  pp.r_spread = 0.0;
  pp.target_fill_height = 10.0;
  pp.seed = 4;
  pp.bottom_plate_z = 1.0;
  const SpherePack pack = generate_packing(pp);
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  const VoxelGeometry geom = voxelize(pack, {20, 20, 28}, opt);

  ProfileData profiles[2];
  int idx = 0;
  for (double g : {5e-9, 1e-8}) {
    RunConfig cfg;
    cfg.geometry = geom;
    cfg.nu = 1.0 / 6.0;
    cfg.scheme = WallScheme::CLI;
    cfg.drive.magnitude = {g, 0.0, 0.0};
    cfg.steady.tolerance = 1e-11;
    cfg.steady.check_interval = 500;
    cfg.steady.max_steps = 300000;
    profiles[idx++] = run_to_steady(cfg).profile;
  }
  for (std::size_t i = 0; i < profiles[0].z.size(); ++i) {
    if (std::abs(profiles[1].u_superficial[i]) < 1e-18) continue;
    CHECK(2.0 * profiles[0].u_superficial[i] ==
          doctest::Approx(profiles[1].u_superficial[i]).epsilon(1e-3));
  }
}

TEST_CASE("dilute simple-cubic array permeability matches the dilute-drag oracle") {
  // One sphere of radius 4 in a periodic 32^3 box: c = 0.00818.
  const int L = 32;
  const double r = 4.0;
  SpherePack pack;
  pack.box = {double(L), double(L), double(L)};
  pack.spheres.push_back({{L / 2.0, L / 2.0, L / 2.0}, r});
  VoxelizeOptions opt;
  opt.periodic = {true, true, true};
  RunConfig cfg;
  cfg.geometry = voxelize(pack, {L, L, L}, opt);
  cfg.nu = 1.0 / 6.0;
  cfg.lambda = 0.25;
  cfg.scheme = WallScheme::CLI;
  cfg.drive.magnitude = {1e-9, 0.0, 0.0};
  cfg.steady.tolerance = 1e-10;
  cfg.steady.check_interval = 500;
  cfg.steady.max_steps = 500000;
  const DnsResult run = run_to_steady(cfg);
  const PermeabilityEstimate est = measure_permeability(run.profile, 0.0, L);

  // Dilute-limit drag with the first-order periodic lattice correction:
  // F = 6 pi mu r U / S(c), S = 1 - 1.7601 c^(1/3) + c - 1.5593 c^2.
  const double c = 4.0 / 3.0 * 3.14159265358979323846 * r * r * r / (double(L) * L * L);
  const double S = 1.0 - 1.7601 * std::cbrt(c) + c - 1.5593 * c * c;
  const double k_oracle = double(L) * L * L * S / (6.0 * 3.14159265358979323846 * r);
  CHECK(std::abs(est.k - k_oracle) <= 0.15 * k_oracle);
}

TEST_CASE("profile normalization peaks at exactly one") {
  const RunConfig cfg = channel_config(8, 1.0 / 6.0, 1e-8, WallScheme::SBB);
  DnsResult run = run_to_steady(cfg);
  run.profile.normalize();
  int ones = 0;
  for (double v : run.profile.u_normalized) {
    CHECK(v <= 1.0 + 1e-12);
    if (v == 1.0) ++ones;
  }
  CHECK(ones >= 1);
}
