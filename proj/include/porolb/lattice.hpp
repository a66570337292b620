#pragma once

#include <array>
#include <cmath>

namespace porolb {

inline constexpr int kQ = 19;

using Vec3 = std::array<double, 3>;
using Populations = std::array<double, kQ>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// D3Q19 velocity set in canonical order: rest, 6 axis, 12 planar-diagonal.
/// Opposite indices are derived from e_bar = -e at construction.
struct LatticeModel {
  std::array<std::array<int, 3>, kQ> e;
  std::array<double, kQ> w;
  std::array<int, kQ> opposite;
  double cs2;      // lattice speed of sound squared, 1/3
  double inv_cs2;  // 3

  static const LatticeModel& d3q19();
};

/// TRT relaxation setup. omega_plus fixes the shear viscosity, omega_minus
/// follows from the magic parameter Lambda.
struct FluidParams {
  double nu = 1.0 / 6.0;
  double omega_plus = 1.0;
  double omega_minus = 1.0;
  double lambda_magic = 3.0 / 16.0;
  double rho0 = 1.0;
  Vec3 body_force{0.0, 0.0, 0.0};
};

/// omega_plus = 1/(3 nu + 1/2); omega_minus from
/// Lambda = (1/omega_plus - 1/2)(1/omega_minus - 1/2).
/// Throws ConfigError when either rate leaves (0, 2).
FluidParams relaxation_from_magic(double nu, double lambda_magic);

/// Incompressible (fluctuation-form) equilibrium:
///   f_k = w_k { drho + rho0 [3 (e.u) + 9/2 (e.u)^2 - 3/2 u.u] }
/// so that sum f = drho and sum e f = rho0 u.
Populations equilibrium(double delta_rho, const Vec3& u, const LatticeModel& m,
                        double rho0 = 1.0);

/// Zeroth/first moments: delta_rho = sum f, u = sum e f / rho0.
void moments(const Populations& f, const LatticeModel& m, double& delta_rho,
             Vec3& u, double rho0 = 1.0);

/// TRT collision with forcing F_k = 3 w_k rho0 (e_k . G). Even/odd halves
/// relax at omega_plus/omega_minus; mass is conserved exactly and momentum
/// increases by exactly G per step. Throws NumericalInstability when the
/// result is non-finite.
Populations trt_collide(const Populations& f, const FluidParams& p,
                        const LatticeModel& m);

}  // namespace porolb
