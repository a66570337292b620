#include "porolb/glbm.hpp"

#include <cmath>
#include <limits>

#include "porolb/errors.hpp"
#include "porolb/geometry.hpp"

namespace porolb {

ProfileData couette_semi_analytic(double u0, double H, double eps, double K, double nu,
                                  double nu_eff, const std::vector<double>& zgrid) {
  const double r = std::sqrt(nu * eps) / std::sqrt(nu_eff * K);
  const double a = 2.0 * u0 / (2.0 * r * K + eps * H);
  ProfileData prof;
  prof.z = zgrid;
  prof.height = H;
  prof.nu = nu;
  prof.u_superficial.resize(zgrid.size());
  prof.u_intrinsic.resize(zgrid.size());
  prof.epsilon.resize(zgrid.size());
  for (std::size_t i = 0; i < zgrid.size(); ++i) {
    const double y = zgrid[i];
    double u;
    if (y >= H / 2.0) {
      u = r * K * a + eps * a * (y - H / 2.0);
    } else {
      u = r * K * a * std::exp(r * (y - H / 2.0));
    }
    prof.u_superficial[i] = u;
    prof.epsilon[i] = (y < H / 2.0) ? eps : 1.0;
    prof.u_intrinsic[i] = u / prof.epsilon[i];
  }
  prof.normalize();
  return prof;
}

CouetteResult run_couette_porous(const CouetteConfig& cfg) {
  const int H = cfg.height;
  const double K = cfg.darcy * H * H;
  const double u0 = cfg.re * cfg.nu / H;
  const double J = cfg.J > 0.0 ? cfg.J : 1.0 / cfg.eps;

  const Dims dims{4, 4, H + 2};
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  VoxelGeometry geom = make_box_geometry(dims, opt);

  // Plane parameters: porous lower half (cell centers below z0 + H/2).
  std::vector<double> eps(dims.nz, 1.0), perm(dims.nz, std::numeric_limits<double>::infinity());
  const double interface_z = 1.0 + H / 2.0;
  for (int z = 0; z < dims.nz; ++z) {
    const double zc = z + 0.5;
    if (zc > 1.0 && zc < interface_z) {
      eps[z] = cfg.eps;
      perm[z] = K;
    }
  }
  GlbmViscosity mode = GlbmViscosity::ConstantRatio;
  if (cfg.J <= 0.0) mode = GlbmViscosity::Rescaled;
  GlbmPlaneParams glbm = make_glbm_params(eps, perm, 0.0, cfg.nu, cfg.lambda, mode, J);

  FluidParams params = relaxation_from_magic(cfg.nu, cfg.lambda);
  Simulation sim(geom, params, WallScheme::SBB);
  sim.set_porous(std::move(glbm));
  sim.set_lid_velocity({u0, 0.0, 0.0});

  CouetteResult result;
  result.stats = run_to_steady_state(sim, cfg.steady, &result.sim);

  // Analytic profile on the same cell centers, measured from the lower wall.
  std::vector<double> y(result.sim.z.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = result.sim.z[i] - 1.0;
  const double nu_eff_p = J * cfg.nu;
  result.analytic = couette_semi_analytic(u0, H, cfg.eps, K, cfg.nu, nu_eff_p, y);
  result.analytic.z = result.sim.z;  // report on the simulation grid

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = result.sim.u_superficial[i] - result.analytic.u_superficial[i];
    num += d * d;
    den += result.analytic.u_superficial[i] * result.analytic.u_superficial[i];
  }
  result.rel_l2 = std::sqrt(num / den);
  return result;
}

std::vector<double> kozeny_carman(const std::vector<double>& eps, double grain_diameter,
                                  double free_threshold,
                                  std::optional<std::pair<double, double>> calibrate) {
  const auto closure = [&](double e) {
    return e * e * e * grain_diameter * grain_diameter / (180.0 * (1.0 - e) * (1.0 - e));
  };
  double factor = 1.0;
  if (calibrate) {
    const double k_closure = closure(calibrate->first);
    if (!(k_closure > 0.0)) throw ConfigError("calibration porosity must be below 1");
    factor = calibrate->second / k_closure;
  }
  std::vector<double> K(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] >= free_threshold) {
      K[i] = std::numeric_limits<double>::infinity();
    } else {
      K[i] = factor * closure(eps[i]);
    }
  }
  return K;
}

GlbmChannelResult run_glbm_channel(const GlbmChannelConfig& cfg) {
  if (cfg.z.size() != cfg.eps.size() || cfg.z.size() != cfg.permeability.size()) {
    throw ConfigError("porosity, permeability and z grids must have equal length");
  }
  // Domain: one wall layer below and above the profiled plane range.
  const int n_fluid = static_cast<int>(cfg.z.size());
  const Dims dims{4, 4, n_fluid + 2};
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  VoxelGeometry geom = make_box_geometry(dims, opt);

  std::vector<double> eps(dims.nz, 1.0), perm(dims.nz, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n_fluid; ++i) {
    eps[i + 1] = std::min(1.0, std::max(1e-3, cfg.eps[i]));
    perm[i + 1] = cfg.permeability[i];
  }
  GlbmViscosity mode = GlbmViscosity::Plain;
  if (cfg.variant == GlbmVariant::Rescaled) mode = GlbmViscosity::Rescaled;
  GlbmPlaneParams glbm = make_glbm_params(eps, perm, 0.0, cfg.nu, cfg.lambda, mode);
  if (cfg.variant == GlbmVariant::DarcyOnly) glbm.eps_in_equilibrium = false;

  FluidParams params = relaxation_from_magic(cfg.nu, cfg.lambda);
  params.body_force = {cfg.g, 0.0, 0.0};
  Simulation sim(geom, params, WallScheme::SBB);
  sim.set_porous(std::move(glbm));

  GlbmChannelResult result;
  result.stats = run_to_steady_state(sim, cfg.steady, &result.profile);
  return result;
}

}  // namespace porolb
