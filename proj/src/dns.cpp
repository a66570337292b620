#include "porolb/dns.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "porolb/errors.hpp"

namespace porolb {

Simulation make_simulation(const RunConfig& cfg) {
  FluidParams params = relaxation_from_magic(cfg.nu, cfg.lambda);
  params.body_force = resolve_drive(cfg.drive);
  return Simulation(cfg.geometry, params, cfg.scheme);
}

DnsResult run_to_steady(const RunConfig& cfg) {
  Simulation sim = make_simulation(cfg);
  ProfileData profile;
  RunStats stats = run_to_steady_state(sim, cfg.steady, &profile);
  return DnsResult{std::move(sim), std::move(profile), stats};
}

PermeabilityEstimate measure_permeability(const ProfileData& profile, double z_lo,
                                          double z_hi) {
  const double g = profile.body_force[profile.stream_axis];
  if (g == 0.0) throw ConfigError("permeability estimator needs a nonzero drive");
  if (profile.nu <= 0.0) throw ConfigError("permeability estimator needs the fluid viscosity");

  PermeabilityEstimate est;
  double sum_u = 0.0, sum_eps = 0.0;
  double eps_min = 1.0, eps_max = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < profile.z.size(); ++i) {
    if (profile.z[i] < z_lo || profile.z[i] > z_hi) continue;
    sum_u += profile.u_superficial[i];
    sum_eps += profile.epsilon[i];
    eps_min = std::min(eps_min, profile.epsilon[i]);
    eps_max = std::max(eps_max, profile.epsilon[i]);
    ++n;
  }
  if (n == 0) throw ConfigError("permeability window contains no profile planes");
  est.u_mean = sum_u / n;
  est.porosity_mean = sum_eps / n;
  est.k = profile.nu * est.u_mean / g;
  est.plateau_warning = (eps_max - eps_min) > 0.02 * std::max(1e-12, est.porosity_mean);
  return est;
}

namespace {

SpherePack scale_pack(const SpherePack& base, int s, double wall_lo) {
  SpherePack out;
  out.box = {base.box.lx * s, base.box.ly * s, base.box.lz * s};
  out.seed = base.seed;
  // Fluid region scales about the bottom wall plane, which stays at z = 1.
  out.bottom_plate_z = wall_lo + s * (base.bottom_plate_z - wall_lo);
  out.spheres.reserve(base.spheres.size());
  for (const Sphere& sp : base.spheres) {
    Sphere q;
    q.center = {sp.center[0] * s, sp.center[1] * s, wall_lo + s * (sp.center[2] - wall_lo)};
    q.radius = sp.radius * s;
    out.spheres.push_back(q);
    out.achieved_height = std::max(out.achieved_height, q.center[2] + q.radius);
  }
  return out;
}

}  // namespace

GridStudyResult grid_study(const SpherePack& base_pack, Dims base_dims,
                           const std::vector<int>& scales, double base_g, double nu,
                           double lambda, WallScheme scheme, const SteadyConfig& steady) {
  GridStudyResult result;
  const int fluid_nz = base_dims.nz - 2;  // wall layers stay one cell thick
  double d_base = 0.0;
  for (const Sphere& s : base_pack.spheres) d_base += 2.0 * s.radius;
  if (!base_pack.spheres.empty()) d_base /= static_cast<double>(base_pack.spheres.size());

  for (int s : scales) {
    const SpherePack pack = scale_pack(base_pack, s, 1.0);
    VoxelizeOptions opt;
    opt.periodic = {true, true, false};
    opt.wall_z_lo = true;
    opt.wall_z_hi = true;
    const Dims dims{base_dims.nx * s, base_dims.ny * s, fluid_nz * s + 2};

    RunConfig cfg;
    cfg.geometry = voxelize(pack, dims, opt);
    cfg.nu = nu;
    cfg.lambda = lambda;
    cfg.scheme = scheme;
    cfg.drive.mode = DriveMode::BodyForce;
    cfg.drive.magnitude = {base_g / (static_cast<double>(s) * s * s), 0.0, 0.0};
    cfg.steady = steady;

    DnsResult run = run_to_steady(cfg);
    result.scales.push_back(s);
    result.diameters.push_back(d_base * s);
    result.stats.push_back(run.stats);
    result.profiles.push_back(std::move(run.profile));
  }
  for (std::size_t i = 1; i < result.profiles.size(); ++i) {
    result.successive_l2.push_back(
        l2_distance_normalized(result.profiles[i - 1], result.profiles[i]));
  }
  return result;
}

ReSweepResult re_sweep(const VoxelGeometry& geom, double sphere_diameter,
                       const std::vector<double>& re_targets, double nu, double lambda,
                       WallScheme scheme, const SteadyConfig& steady, double g_seed) {
  ReSweepResult result;
  double linear_coeff = 0.0;  // U_max per unit body force, from the first run

  for (double re : re_targets) {
    const double u_target = re * nu / sphere_diameter;
    double g = (linear_coeff > 0.0) ? u_target / linear_coeff : g_seed;
    ProfileData profile;
    RunStats stats;
    double u_max = 0.0;
    for (int iter = 0; iter < 4; ++iter) {
      RunConfig cfg;
      cfg.geometry = geom;
      cfg.nu = nu;
      cfg.lambda = lambda;
      cfg.scheme = scheme;
      cfg.drive.mode = DriveMode::BodyForce;
      cfg.drive.magnitude = {g, 0.0, 0.0};
      cfg.steady = steady;
      DnsResult run = run_to_steady(cfg);
      profile = std::move(run.profile);
      stats = run.stats;
      u_max = std::abs(profile.u_max);
      if (u_max <= 0.0) throw NumericalInstability("re_sweep produced a zero profile");
      if (linear_coeff <= 0.0) linear_coeff = u_max / g;
      if (std::abs(u_max - u_target) <= 0.05 * u_target) break;
      g *= u_target / u_max;
    }
    result.re_target.push_back(re);
    result.re_actual.push_back(u_max * sphere_diameter / nu);
    result.g_used.push_back(g);
    result.stats.push_back(stats);

    profile.normalize();
    std::size_t imax = 0;
    for (std::size_t i = 1; i < profile.u_superficial.size(); ++i) {
      if (profile.u_superficial[i] > profile.u_superficial[imax]) imax = i;
    }
    result.z_of_max.push_back(profile.z[imax]);
    double porous_sum = 0.0;
    int porous_n = 0;
    for (std::size_t i = 0; i < profile.z.size(); ++i) {
      if (profile.epsilon[i] < 0.95) {
        porous_sum += profile.u_normalized[i];
        ++porous_n;
      }
    }
    result.porous_u_normalized.push_back(porous_n > 0 ? porous_sum / porous_n : 0.0);
    result.profiles.push_back(std::move(profile));
  }
  return result;
}

}  // namespace porolb
