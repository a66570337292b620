#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "porolb/boundary.hpp"
#include "porolb/field.hpp"
#include "porolb/geometry.hpp"
#include "porolb/lattice.hpp"
#include "porolb/profile.hpp"

namespace porolb {

/// Per-plane parameters of the homogenized (REV-scale) model. Planes with
/// eps = 1 and K = inf behave as free fluid. omega fields are derived from
/// nu_eff(z) and the magic parameter.
struct GlbmPlaneParams {
  std::vector<double> eps;
  std::vector<double> permeability;  // lattice units^2; inf disables the drag
  std::vector<double> omega_plus;
  std::vector<double> omega_minus;
  double forchheimer_cf = 0.0;
  bool eps_in_equilibrium = true;  // false: plain equilibrium + drag only

  bool all_free() const;
};

enum class GlbmViscosity { Plain, Rescaled, ConstantRatio };

/// Builds per-plane GLBM parameters from a porosity profile.
/// Rescaled uses nu_eff = nu / eps; ConstantRatio uses nu_eff = J * nu.
GlbmPlaneParams make_glbm_params(const std::vector<double>& eps,
                                 const std::vector<double>& permeability, double c_F,
                                 double nu, double lambda, GlbmViscosity mode,
                                 double J = 1.0);

/// Implicit velocity update of the drag model: with v_hat = v + (dt/2) eps G,
/// u = v_hat / (c0 + sqrt(c0^2 + c1 |v_hat|)),
/// c0 = (1 + eps dt nu / (2K)) / 2, c1 = (dt/2) eps c_F / sqrt(K).
/// Also returns the total force F = -(eps nu / K) u - (eps c_F / sqrt(K)) |u| u + eps G.
void glbm_force_and_velocity(const Vec3& momentum, double eps, double permeability,
                             double c_F, const Vec3& g, double nu, Vec3& u, Vec3& force);

/// Porosity-bearing equilibrium: quadratic terms scaled by 1/eps. Reduces to
/// the standard equilibrium at eps = 1. Throws ConfigError for eps <= 0.
Populations glbm_equilibrium(double delta_rho, const Vec3& u, double eps,
                             const LatticeModel& m, double rho0 = 1.0);

/// One collide-stream-boundary step over a voxel geometry. Owns the
/// double-buffered field; collision is cell-local, boundary rules write
/// disjoint slots of the next buffer.
class Simulation {
 public:
  Simulation(const VoxelGeometry& geom, const FluidParams& params, WallScheme scheme);

  void set_body_force(const Vec3& g) { params_.body_force = g; }
  const FluidParams& params() const { return params_; }

  /// Marks links into the top wall layer as moving-wall links.
  void set_lid_velocity(const Vec3& u);

  /// Enables the homogenized collision. Vectors must have nz entries.
  void set_porous(GlbmPlaneParams glbm);
  bool porous() const { return glbm_.has_value(); }

  void step();
  long steps_done() const { return steps_; }

  const Dims& dims() const { return dims_; }
  LatticeField& field() { return field_; }
  const LatticeField& field() const { return field_; }
  int cli_fallback_count() const { return cli_fallbacks_; }
  std::int64_t fluid_cells() const { return fluid_cells_; }

  /// Measured macroscopic state: raw moments plus the half-force velocity
  /// correction (core), or the implicit drag solve (porous mode).
  void macroscopic(std::int64_t cell, double& delta_rho, Vec3& u) const;

  /// Planar averages of the stream-axis measured velocity over z-planes,
  /// restricted to the plane range containing fluid. Also tracks the maximum
  /// velocity magnitude seen (stability guard input).
  ProfileData planar_profile(int stream_axis = 0) const;

  /// Max |u| over fluid cells; NaN propagates. Used by the stability guard.
  double max_speed() const;

  /// Initialize all fluid cells to an equilibrium state.
  void initialize_equilibrium(double delta_rho, const Vec3& u);

 private:
  void collide_core();
  void collide_glbm();
  void stream_and_bounce();
  int plane_of(std::int64_t cell) const { return static_cast<int>(cell / (dims_.nx * static_cast<std::int64_t>(dims_.ny))); }

  Dims dims_;
  PeriodicAxes periodic_;
  FluidParams params_;
  WallScheme scheme_;
  LatticeField field_;
  std::vector<BoundaryLink> links_;
  std::vector<double> porosity_;
  std::vector<std::int64_t> plane_fluid_count_;
  std::optional<double> wall_plane_lo_, wall_plane_hi_;
  std::optional<GlbmPlaneParams> glbm_;
  Vec3 lid_velocity_{0.0, 0.0, 0.0};
  int cli_fallbacks_ = 0;
  long steps_ = 0;
  std::int64_t fluid_cells_ = 0;
};

/// Stand-alone streaming of the current buffer into the next one over
/// fluid-fluid links with periodic wraparound, then a buffer swap. Boundary
/// links of `geom` are not touched; intended for fully periodic fields.
void stream(LatticeField& field, const PeriodicAxes& periodic);

struct SteadyConfig {
  double tolerance = 1e-8;
  int check_interval = 1000;
  long max_steps = 2000000;
  double max_speed = 0.3 / 1.7320508075688772;  // 0.3 * c_s
};

struct RunStats {
  long steps = 0;
  double mlups = 0.0;
  double seconds = 0.0;
  bool converged = false;
  double residual = 0.0;
  int cli_fallbacks = 0;
};

/// Runs until the relative L-inf profile change between checks drops below
/// the tolerance. Throws NumericalInstability on non-finite values or
/// velocities beyond the guard; an unconverged run is flagged, not fatal.
RunStats run_to_steady_state(Simulation& sim, const SteadyConfig& cfg,
                             ProfileData* final_profile = nullptr);

}  // namespace porolb
