#pragma once

#include <array>
#include <cstdint>

#include "porolb/field.hpp"
#include "porolb/lattice.hpp"

namespace porolb {

enum class WallScheme : std::uint8_t { SBB, CLI };

/// One fluid->solid lattice link. `direction` points from the fluid cell
/// into the solid; q is the normalized wall distance along the link,
/// q = |x_f1 - x_w| / |x_f1 - x_b| in (0, 1].
struct BoundaryLink {
  std::int64_t fluid_cell = -1;    // x_f1
  std::int64_t second_fluid = -1;  // x_f2 = x_f1 - e_k, or -1 when not fluid
  std::int32_t direction = 0;      // k
  float q = 0.5f;
  bool moving = false;  // link into a moving (lid) wall cell
};

enum class DriveMode : std::uint8_t { BodyForce, PressureGradientAsForce };

/// How the flow is driven. PressureGradientAsForce re-expresses a periodic
/// pressure drop Delta_p over the channel length as a uniform body force.
struct DriveSpec {
  DriveMode mode = DriveMode::BodyForce;
  Vec3 magnitude{0.0, 0.0, 0.0};  // body force, or Delta_p on the stream axis
  PeriodicAxes periodic_axes{true, true, false};
  int stream_axis = 0;
  double channel_length = 0.0;  // required for PressureGradientAsForce
};

/// Body force G fed to the collision. Throws ConfigError for a zero-length
/// axis in pressure mode.
Vec3 resolve_drive(const DriveSpec& spec);

/// Simple bounce-back: f_bar(k)(x_f1, t+1) = f~_k(x_f1, t).
/// Reads post-collision values from the current buffer, writes the next.
void apply_sbb(const BoundaryLink& link, LatticeField& field, const LatticeModel& m);

/// Central linear interpolation:
///   f_bar(k)(x_f1) = c f~_k(x_f2) - c f~_bar(k)(x_f1) + f~_k(x_f1),
///   c = (1-2q)/(1+2q).
/// Requires link.second_fluid >= 0; setup falls back to SBB otherwise.
void apply_cli(const BoundaryLink& link, LatticeField& field, const LatticeModel& m);

/// Velocity bounce-back for a moving wall:
///   f_bar(k)(x_f1) = f~_k(x_f1) - 2 w_k rho0 (e_k . u_wall) / cs^2.
void apply_moving_wall(const BoundaryLink& link, LatticeField& field,
                       const LatticeModel& m, const Vec3& u_wall, double rho0 = 1.0);

}  // namespace porolb
