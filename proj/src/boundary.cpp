#include "porolb/boundary.hpp"

#include <cmath>

#include "porolb/errors.hpp"

namespace porolb {

Vec3 resolve_drive(const DriveSpec& spec) {
  if (spec.mode == DriveMode::BodyForce) return spec.magnitude;
  if (!(spec.channel_length > 0.0)) {
    throw ConfigError("pressure drive requires a positive channel length");
  }
  Vec3 g{0.0, 0.0, 0.0};
  g[spec.stream_axis] = spec.magnitude[spec.stream_axis] / spec.channel_length;
  return g;
}

void apply_sbb(const BoundaryLink& link, LatticeField& field, const LatticeModel& m) {
  const int kb = m.opposite[link.direction];
  field.next(kb)[link.fluid_cell] = field.cur(link.direction)[link.fluid_cell];
}

void apply_cli(const BoundaryLink& link, LatticeField& field, const LatticeModel& m) {
  const int k = link.direction;
  const int kb = m.opposite[k];
  const double q = link.q;
  const double c = (1.0 - 2.0 * q) / (1.0 + 2.0 * q);
  field.next(kb)[link.fluid_cell] = c * field.cur(k)[link.second_fluid] -
                                    c * field.cur(kb)[link.fluid_cell] +
                                    field.cur(k)[link.fluid_cell];
}

void apply_moving_wall(const BoundaryLink& link, LatticeField& field,
                       const LatticeModel& m, const Vec3& u_wall, double rho0) {
  const int k = link.direction;
  const int kb = m.opposite[k];
  const double eu = m.e[k][0] * u_wall[0] + m.e[k][1] * u_wall[1] + m.e[k][2] * u_wall[2];
  field.next(kb)[link.fluid_cell] =
      field.cur(k)[link.fluid_cell] - 2.0 * m.w[k] * rho0 * m.inv_cs2 * eu;
}

}  // namespace porolb
