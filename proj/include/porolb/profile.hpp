#pragma once

#include <vector>

#include "porolb/lattice.hpp"

namespace porolb {

/// Planar-averaged 1D profiles along the wall-normal (z) axis.
/// u_superficial averages over all cells of a plane (solid counts as zero),
/// u_intrinsic over fluid cells only; u_superficial = epsilon * u_intrinsic.
struct ProfileData {
  std::vector<double> z;
  std::vector<double> u_superficial;
  std::vector<double> u_intrinsic;
  std::vector<double> epsilon;
  std::vector<double> u_normalized;

  // metadata
  double u_max = 0.0;   // max u_superficial, filled by normalize()
  double height = 0.0;  // wall-to-wall channel height when known
  double z0 = 0.0;      // lower wall plane elevation
  double nu = 0.0;      // kinematic viscosity of the producing run
  Vec3 body_force{0.0, 0.0, 0.0};
  int stream_axis = 0;

  std::size_t size() const { return z.size(); }

  /// Fills u_normalized = u_superficial / max(u_superficial) and u_max.
  void normalize();
};

/// Piecewise-linear interpolation with clamped ends; zs must be increasing.
double interp_linear(const std::vector<double>& zs, const std::vector<double>& vs, double x);

/// L2 distance between two normalized profiles, sampled on `samples` points
/// of the shared normalized coordinate (z - z_lo) / span.
double l2_distance_normalized(const ProfileData& a, const ProfileData& b, int samples = 256);

/// Root-mean-square difference of u_superficial on b's grid (a interpolated).
double rms_difference(const ProfileData& a, const ProfileData& b);

}  // namespace porolb
