#pragma once

#include <optional>
#include <vector>

#include "porolb/profile.hpp"
#include "porolb/simulation.hpp"

namespace porolb {

/// Semi-analytic Couette profile over a porous lower half:
///   u(y) = r K a + eps a (y - H/2)        for H/2 <= y <= H
///   u(y) = r K a exp(r (y - H/2))         for 0 <= y <= H/2
/// with a = 2 u0 / (2 r K + eps H), r = sqrt(nu eps) / sqrt(nu_eff K).
ProfileData couette_semi_analytic(double u0, double H, double eps, double K, double nu,
                                  double nu_eff, const std::vector<double>& zgrid);

struct CouetteConfig {
  int height = 64;       // fluid cells wall-to-wall
  double eps = 0.4;      // porosity of the lower half
  double darcy = 1.2e-4;  // Da = K / H^2
  double J = 1.0;        // viscosity ratio; <= 0 selects J = 1/eps
  double re = 0.1;       // Re = u0 H / nu
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  SteadyConfig steady;
};

struct CouetteResult {
  ProfileData sim;
  ProfileData analytic;
  double rel_l2 = 0.0;
  RunStats stats;
};

/// Plane Couette flow over a porous layer via the homogenized model, with
/// the lid realized as a velocity bounce-back wall.
CouetteResult run_couette_porous(const CouetteConfig& cfg);

/// Kozeny-Carman closure K = eps^3 d^2 / (180 (1-eps)^2); planes with
/// eps >= free_threshold get an infinite permeability (drag off).
/// When calibrate is set, all finite K are rescaled so the closure evaluated
/// at calibrate->first (a plateau porosity) returns calibrate->second.
std::vector<double> kozeny_carman(const std::vector<double>& eps, double grain_diameter,
                                  double free_threshold = 0.999,
                                  std::optional<std::pair<double, double>> calibrate = {});

enum class GlbmVariant { Rescaled, Plain, DarcyOnly };

struct GlbmChannelConfig {
  std::vector<double> z;    // plane centers of the porosity profile
  std::vector<double> eps;  // porosity per plane
  std::vector<double> permeability;  // per plane; from kozeny_carman typically
  double g = 1e-8;
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  GlbmVariant variant = GlbmVariant::Rescaled;
  SteadyConfig steady;
};

struct GlbmChannelResult {
  ProfileData profile;
  RunStats stats;
};

/// Body-force-driven channel at REV scale: per-plane porosity/permeability,
/// walls top and bottom, periodic in stream/span directions.
GlbmChannelResult run_glbm_channel(const GlbmChannelConfig& cfg);

}  // namespace porolb
