#pragma once

#include <vector>

#include "porolb/geometry.hpp"
#include "porolb/profile.hpp"
#include "porolb/simulation.hpp"

namespace porolb {

/// Pore-scale run description: assembled geometry plus fluid and drive
/// parameters. Relaxation rates follow from (nu, lambda).
struct RunConfig {
  VoxelGeometry geometry;
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  WallScheme scheme = WallScheme::CLI;
  DriveSpec drive;
  SteadyConfig steady;
};

struct DnsResult {
  Simulation sim;
  ProfileData profile;
  RunStats stats;
};

Simulation make_simulation(const RunConfig& cfg);

/// Iterates to steady state and returns the final field (inside sim), the
/// planar-averaged profile, and run statistics.
DnsResult run_to_steady(const RunConfig& cfg);

struct PermeabilityEstimate {
  double k = 0.0;
  double u_mean = 0.0;         // superficial mean over the window
  double porosity_mean = 0.0;  // mean porosity over the window
  bool plateau_warning = false;  // window porosity varies by more than 2%
};

/// Darcy estimator k = mu * <U_superficial> / G over the window [z_lo, z_hi].
/// Uses the profile's stored nu and body force (mu = rho0 nu, rho0 = 1).
PermeabilityEstimate measure_permeability(const ProfileData& profile, double z_lo,
                                          double z_hi);

struct GridStudyResult {
  std::vector<int> scales;
  std::vector<double> diameters;
  std::vector<ProfileData> profiles;
  std::vector<double> successive_l2;  // |scales|-1 distances
  std::vector<RunStats> stats;
};

/// Reruns the same sphere layout at integer resolution scales. The fluid
/// region scales about the bottom wall plane; the drive is scaled by 1/s^3
/// so the Reynolds number stays constant in the Stokes regime.
GridStudyResult grid_study(const SpherePack& base_pack, Dims base_dims,
                           const std::vector<int>& scales, double base_g, double nu,
                           double lambda, WallScheme scheme, const SteadyConfig& steady);

struct ReSweepResult {
  std::vector<double> re_target;
  std::vector<double> re_actual;
  std::vector<double> g_used;
  std::vector<ProfileData> profiles;
  std::vector<double> z_of_max;          // elevation of the velocity maximum
  std::vector<double> porous_u_normalized;  // mean normalized U where eps < 0.95
  std::vector<RunStats> stats;
};

/// Sweeps Re_D = U_max D / nu by adjusting the body force; a linear estimate
/// from the first run is corrected iteratively for inertial targets.
ReSweepResult re_sweep(const VoxelGeometry& geom, double sphere_diameter,
                       const std::vector<double>& re_targets, double nu, double lambda,
                       WallScheme scheme, const SteadyConfig& steady, double g_seed);

}  // namespace porolb
