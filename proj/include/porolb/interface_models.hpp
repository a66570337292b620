#pragma once

#include <optional>
#include <string>
#include <vector>

#include "porolb/profile.hpp"

namespace porolb {

enum class InterfaceCondition { BR, OTW, BJ, BJS };

/// Plane channel over a porous layer; the interface sits at z = 0, the free
/// region spans [0, h_f] and the porous region [-h_p, 0]. BR/OTW use a
/// Brinkman porous region, BJ/BJS a Darcy region with constant seepage U_m.
struct TwoDomainConfig {
  double h_f = 1.0;
  double h_p = 1.0;
  double mu = 1.0;  // dynamic viscosity (rho0 = 1)
  double J = 1.0;   // mu_eff / mu
  double k = 1e-3;  // permeability
  double g = 1e-6;  // drive
  InterfaceCondition condition = InterfaceCondition::BR;
  double alpha = 1.0;  // BJ/BJS slip coefficient
  double beta = 0.0;   // OTW jump coefficient
};

/// Closed-form solution with overflow-safe porous coefficients:
///   U_p(z) = A e^{sigma z} + Bp e^{-sigma (z + h_p)} + U_m   (BR/OTW)
///   U_f(z) = -g/(2 mu) z^2 + C1 z + C2
struct TwoDomainSolution {
  TwoDomainConfig config;
  double A = 0.0, Bp = 0.0, C1 = 0.0, C2 = 0.0;
  double sigma = 0.0;  // 1 / sqrt(J k)
  double u_m = 0.0;    // g k / mu

  double eval(double z) const;
  double deriv(double z) const;
  double slip_velocity() const { return C2; }
};

TwoDomainSolution solve_two_domain(const TwoDomainConfig& cfg);

/// Samples the solution on a z grid into a ProfileData. The porous-side
/// porosity column is filled with 1/J (Lundgren closure read backwards) so
/// that parameter extraction sees a consistent effective viscosity.
ProfileData sample_two_domain(const TwoDomainConfig& cfg, const std::vector<double>& zgrid);

/// Quadratic least-squares fit in centered coordinates zeta = z - origin.
struct PolyFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double origin = 0.0;
  double rmse = 0.0;
  double eval(double z) const {
    const double t = z - origin;
    return c0 + c1 * t + c2 * t * t;
  }
  double deriv(double z) const { return c1 + 2.0 * c2 * (z - origin); }
};

PolyFit fit_free_profile(const std::vector<double>& z, const std::vector<double>& u,
                         double origin);

/// Two-term exponential fit U(z) ~ A e^{a zeta} + B e^{b zeta} by damped
/// Gauss-Newton over (a, b) with the linear pair solved by least squares
/// (variable projection), multi-start initialized.
struct ExpFit {
  double A = 0.0, a = 0.0, B = 0.0, b = 0.0;
  double origin = 0.0;
  double rmse = 0.0;
  bool converged = false;
  int iterations = 0;
  double eval(double z) const;
  double deriv(double z) const;
};

ExpFit fit_porous_profile(const std::vector<double>& z, const std::vector<double>& u,
                          double origin);

struct InterfaceFitOptions {
  double mu_eff_override = 0.0;  // <= 0: use mu / mean porosity of the window
  double free_window_fraction = 0.8;   // of the interface-to-max distance
  double porous_drop_factor = 3.0;     // window ends where U <= factor * U_m
  std::optional<std::pair<double, double>> plateau_window;  // absolute z range
  std::optional<std::pair<double, double>> free_window;
  std::optional<std::pair<double, double>> porous_window;
};

struct InterfaceFit {
  double interface_z = 0.0;
  double u_slip = 0.0;
  double u_seepage = 0.0;
  double permeability = 0.0;
  double dudz_free = 0.0;    // at the interface, free side
  double dudz_porous = 0.0;  // at the interface, porous side
  double alpha = 0.0;
  double beta = 0.0;
  double mu_eff = 0.0;
  double rmse_free = 0.0;
  double rmse_porous = 0.0;
  bool porous_fit_valid = false;
  std::vector<std::string> warnings;
};

/// Fits both sides of the interface, measures k and U_m over the deep
/// plateau, and inverts the slip (alpha) and stress-jump (beta) relations.
/// The porous-side exponentials are fitted on U - U_m; subtracting the
/// constant leaves the interface gradient unchanged.
InterfaceFit extract_interface_params(const ProfileData& profile, double interface_z,
                                      const InterfaceFitOptions& options = {});

struct InterfaceCandidates {
  std::optional<double> z_exact;     // lowest plane with porosity ~ 1
  std::optional<double> z_apparent;  // largest window end keeping the
                                     // exponential fit near its plateau RMSE
  double plateau_rmse = 0.0;
};

/// Candidate interface elevations from a profile with porosity data.
/// Throws ConfigError when the profile has no porous region.
InterfaceCandidates interface_position_candidates(const ProfileData& profile);

}  // namespace porolb
