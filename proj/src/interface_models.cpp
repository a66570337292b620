#include "porolb/interface_models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "porolb/dns.hpp"
#include "porolb/errors.hpp"

namespace porolb {

namespace {

double safe_exp(double x) { return std::exp(std::min(x, 700.0)); }

}  // namespace

double TwoDomainSolution::eval(double z) const {
  if (z >= 0.0) {
    return -config.g / (2.0 * config.mu) * z * z + C1 * z + C2;
  }
  if (config.condition == InterfaceCondition::BJ ||
      config.condition == InterfaceCondition::BJS) {
    return u_m;
  }
  return A * safe_exp(sigma * z) + Bp * safe_exp(-sigma * (z + config.h_p)) + u_m;
}

double TwoDomainSolution::deriv(double z) const {
  if (z >= 0.0) {
    return -config.g / config.mu * z + C1;
  }
  if (config.condition == InterfaceCondition::BJ ||
      config.condition == InterfaceCondition::BJS) {
    return 0.0;
  }
  return sigma * (A * safe_exp(sigma * z) - Bp * safe_exp(-sigma * (z + config.h_p)));
}

TwoDomainSolution solve_two_domain(const TwoDomainConfig& cfg) {
  if (!(cfg.h_f > 0.0 && cfg.h_p > 0.0 && cfg.mu > 0.0 && cfg.k > 0.0 && cfg.J > 0.0)) {
    throw ConfigError("two-domain parameters must be positive");
  }
  TwoDomainSolution sol;
  sol.config = cfg;
  sol.u_m = cfg.g * cfg.k / cfg.mu;
  const double rhs_wall = cfg.g * cfg.h_f * cfg.h_f / (2.0 * cfg.mu);

  if (cfg.condition == InterfaceCondition::BJ || cfg.condition == InterfaceCondition::BJS) {
    const double s = cfg.alpha / std::sqrt(cfg.k);
    const double um_term = (cfg.condition == InterfaceCondition::BJ) ? sol.u_m : 0.0;
    const double denom = 1.0 + s * cfg.h_f;
    if (std::abs(denom) < 1e-300) throw ConfigError("degenerate BJ/BJS system");
    sol.C2 = (rhs_wall + s * cfg.h_f * um_term) / denom;
    sol.C1 = s * (sol.C2 - um_term);
    return sol;
  }

  // BR / OTW: Brinkman porous region.
  sol.sigma = 1.0 / std::sqrt(cfg.J * cfg.k);
  const double mu_eff = cfg.J * cfg.mu;
  const double E = safe_exp(-sol.sigma * cfg.h_p);
  const double beta = (cfg.condition == InterfaceCondition::OTW) ? cfg.beta : 0.0;

  Eigen::Matrix4d M;
  Eigen::Vector4d rhs;
  // unknowns: [A, Bp, C1, C2]
  M << E, 1.0, 0.0, 0.0,                                      // U_p(-h_p) = 0
      1.0, E, 0.0, -1.0,                                      // continuity at 0
      mu_eff * sol.sigma, -mu_eff * sol.sigma * E, -cfg.mu,   // stress jump
      -cfg.mu * beta / std::sqrt(cfg.k),                      //
      0.0, 0.0, cfg.h_f, 1.0;                                 // U_f(h_f) = 0
  rhs << -sol.u_m, -sol.u_m, 0.0, rhs_wall;

  const Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "singular two-domain system for condition "
       << (cfg.condition == InterfaceCondition::BR ? "BR" : "OTW");
    throw ConfigError(os.str());
  }
  const Eigen::Vector4d x = lu.solve(rhs);
  sol.A = x[0];
  sol.Bp = x[1];
  sol.C1 = x[2];
  sol.C2 = x[3];
  return sol;
}

ProfileData sample_two_domain(const TwoDomainConfig& cfg, const std::vector<double>& zgrid) {
  const TwoDomainSolution sol = solve_two_domain(cfg);
  ProfileData prof;
  prof.z = zgrid;
  prof.nu = cfg.mu;  // rho0 = 1
  prof.body_force = {cfg.g, 0.0, 0.0};
  prof.height = cfg.h_f + cfg.h_p;
  prof.z0 = -cfg.h_p;
  prof.u_superficial.resize(zgrid.size());
  prof.u_intrinsic.resize(zgrid.size());
  prof.epsilon.resize(zgrid.size());
  for (std::size_t i = 0; i < zgrid.size(); ++i) {
    const double u = sol.eval(zgrid[i]);
    const double eps = zgrid[i] < 0.0 ? 1.0 / cfg.J : 1.0;
    prof.u_superficial[i] = u;
    prof.epsilon[i] = eps;
    prof.u_intrinsic[i] = u / eps;
  }
  prof.normalize();
  return prof;
}

PolyFit fit_free_profile(const std::vector<double>& z, const std::vector<double>& u,
                         double origin) {
  if (z.size() != u.size()) throw ConfigError("fit inputs must have equal length");
  const int n = static_cast<int>(z.size());
  if (n < 4) throw ConfigError("free-side fit window needs at least 4 points");
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double t = z[i] - origin;
    X(i, 0) = 1.0;
    X(i, 1) = t;
    X(i, 2) = t * t;
    y(i) = u[i];
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < 3) throw ConfigError("rank-deficient free-side fit window");
  const Eigen::Vector3d c = qr.solve(y);
  PolyFit fit;
  fit.c0 = c[0];
  fit.c1 = c[1];
  fit.c2 = c[2];
  fit.origin = origin;
  fit.rmse = std::sqrt((X * c - y).squaredNorm() / n);
  return fit;
}

double ExpFit::eval(double z) const {
  const double t = z - origin;
  return A * safe_exp(a * t) + B * safe_exp(b * t);
}

double ExpFit::deriv(double z) const {
  const double t = z - origin;
  return A * a * safe_exp(a * t) + B * b * safe_exp(b * t);
}

namespace {

struct VarProResult {
  Eigen::Vector2d beta;  // linear coefficients (A, B)
  Eigen::VectorXd resid;
  double rmse = 0.0;
};

VarProResult varpro_solve(const Eigen::VectorXd& t, const Eigen::VectorXd& y, double a,
                          double b) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd Phi(n, 2);
  for (int i = 0; i < n; ++i) {
    Phi(i, 0) = safe_exp(a * t(i));
    Phi(i, 1) = safe_exp(b * t(i));
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(Phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  VarProResult r;
  r.beta = svd.solve(y);
  r.resid = Phi * r.beta - y;
  r.rmse = std::sqrt(r.resid.squaredNorm() / n);
  return r;
}

}  // namespace

ExpFit fit_porous_profile(const std::vector<double>& z, const std::vector<double>& u,
                          double origin) {
  if (z.size() != u.size()) throw ConfigError("fit inputs must have equal length");
  const int n = static_cast<int>(z.size());
  if (n < 6) throw ConfigError("porous-side fit window needs at least 6 points");

  Eigen::VectorXd t(n), y(n);
  for (int i = 0; i < n; ++i) {
    t(i) = z[i] - origin;
    y(i) = u[i];
  }
  const double yscale = std::max(y.cwiseAbs().maxCoeff(), 1e-300);

  // Log-slope estimate for the dominant exponent.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(y(i)) < 1e-14 * yscale) continue;
    const double ly = std::log(std::abs(y(i)));
    sx += t(i);
    sy += ly;
    sxx += t(i) * t(i);
    sxy += t(i) * ly;
    ++m;
  }
  double slope = 0.1;
  if (m >= 2 && std::abs(m * sxx - sx * sx) > 1e-30) {
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  if (!std::isfinite(slope) || slope == 0.0) slope = 0.1;

  const std::vector<std::pair<double, double>> starts = {
      {slope, 1.05 * slope}, {slope, 0.95 * slope},  {0.9 * slope, 1.1 * slope},
      {slope, -slope},       {slope, 0.25 * slope},  {slope, 4.0 * slope},
  };

  ExpFit best;
  best.origin = origin;
  best.rmse = std::numeric_limits<double>::infinity();

  for (const auto& [a0, b0] : starts) {
    double a = a0, b = b0;
    VarProResult cur = varpro_solve(t, y, a, b);
    double lambda = 1e-6;
    int iters = 0;
    bool converged = false;
    for (; iters < 200; ++iters) {
      // Kaufman Jacobian of the projected residual.
      Eigen::MatrixXd Jm(n, 2);
      for (int i = 0; i < n; ++i) {
        Jm(i, 0) = cur.beta(0) * t(i) * safe_exp(a * t(i));
        Jm(i, 1) = cur.beta(1) * t(i) * safe_exp(b * t(i));
      }
      const Eigen::Vector2d grad = Jm.transpose() * cur.resid;
      if (grad.cwiseAbs().maxCoeff() < 1e-12) {
        converged = true;
        break;
      }
      const Eigen::Matrix2d H = Jm.transpose() * Jm;
      bool stepped = false;
      for (int tries = 0; tries < 12; ++tries) {
        Eigen::Matrix2d Hd = H;
        Hd(0, 0) += lambda * std::max(H(0, 0), 1e-30);
        Hd(1, 1) += lambda * std::max(H(1, 1), 1e-30);
        const Eigen::Vector2d step = Hd.fullPivLu().solve(-grad);
        const VarProResult trial = varpro_solve(t, y, a + step(0), b + step(1));
        if (trial.rmse <= cur.rmse) {
          a += step(0);
          b += step(1);
          cur = trial;
          lambda = std::max(lambda / 3.0, 1e-12);
          stepped = true;
          break;
        }
        lambda *= 10.0;
      }
      if (!stepped) break;  // stuck; gradient check decides convergence
    }
    if (cur.rmse < best.rmse) {
      best.A = cur.beta(0);
      best.a = a;
      best.B = cur.beta(1);
      best.b = b;
      best.rmse = cur.rmse;
      best.converged = converged || cur.rmse < 1e-13 * yscale;
      best.iterations = iters;
    }
  }
  return best;
}

InterfaceFit extract_interface_params(const ProfileData& profile, double interface_z,
                                      const InterfaceFitOptions& options) {
  if (profile.z.size() < 8) throw ConfigError("profile too short for extraction");
  InterfaceFit fit;
  fit.interface_z = interface_z;
  const double mu = profile.nu;  // rho0 = 1

  const double z_lo = profile.z.front();
  const double depth = interface_z - z_lo;
  if (depth <= 0.0) throw ConfigError("interface position must lie above the profile start");

  // Deep plateau window for k and U_m.
  double plat_lo = z_lo + std::max(2.0, 0.05 * depth);
  double plat_hi = z_lo + 0.4 * depth;
  if (options.plateau_window) {
    plat_lo = options.plateau_window->first;
    plat_hi = options.plateau_window->second;
  }
  const PermeabilityEstimate perm = measure_permeability(profile, plat_lo, plat_hi);
  fit.permeability = perm.k;
  fit.u_seepage = perm.u_mean;
  if (perm.plateau_warning) {
    fit.warnings.push_back("plateau window porosity varies by more than 2%");
  }
  if (!(fit.permeability > 0.0)) throw ConfigError("non-positive permeability estimate");

  // Free-side quadratic fit: from the interface toward the velocity maximum.
  std::size_t imax = 0;
  for (std::size_t i = 1; i < profile.z.size(); ++i) {
    if (profile.u_superficial[i] > profile.u_superficial[imax]) imax = i;
  }
  double free_lo = interface_z;
  double free_hi = interface_z + options.free_window_fraction * (profile.z[imax] - interface_z);
  if (options.free_window) {
    free_lo = options.free_window->first;
    free_hi = options.free_window->second;
  }
  std::vector<double> zf, uf;
  for (std::size_t i = 0; i < profile.z.size(); ++i) {
    if (profile.z[i] >= free_lo && profile.z[i] <= free_hi) {
      zf.push_back(profile.z[i]);
      uf.push_back(profile.u_superficial[i]);
    }
  }
  const PolyFit free_fit = fit_free_profile(zf, uf, interface_z);
  fit.rmse_free = free_fit.rmse;
  fit.u_slip = free_fit.eval(interface_z);
  fit.dudz_free = free_fit.deriv(interface_z);

  // Porous-side exponential fit on U - U_m, from the interface down to where
  // the excess has decayed to the plateau scale.
  double por_lo = z_lo;
  double por_hi = interface_z;
  if (!options.porous_window) {
    const double level = options.porous_drop_factor * std::abs(fit.u_seepage);
    por_lo = plat_hi;
    for (std::size_t i = profile.z.size(); i-- > 0;) {
      if (profile.z[i] >= interface_z) continue;
      if (std::abs(profile.u_superficial[i]) <= level) {
        por_lo = profile.z[i];
        break;
      }
    }
  } else {
    por_lo = options.porous_window->first;
    por_hi = options.porous_window->second;
  }
  std::vector<double> zp, up, epsp;
  for (std::size_t i = 0; i < profile.z.size(); ++i) {
    if (profile.z[i] >= por_lo && profile.z[i] < por_hi) {
      zp.push_back(profile.z[i]);
      up.push_back(profile.u_superficial[i] - fit.u_seepage);
      epsp.push_back(profile.epsilon[i]);
    }
  }
  double eps_bar = 1.0;
  if (!epsp.empty()) {
    eps_bar = 0.0;
    for (double e : epsp) eps_bar += e;
    eps_bar /= static_cast<double>(epsp.size());
  }
  fit.mu_eff = options.mu_eff_override > 0.0 ? options.mu_eff_override
                                             : mu / std::max(eps_bar, 1e-6);

  if (zp.size() >= 6) {
    const double excess_scale = std::abs(up.front());
    if (excess_scale > 1e-12 * std::max(std::abs(fit.u_slip), 1e-300)) {
      const ExpFit exp_fit = fit_porous_profile(zp, up, interface_z);
      fit.rmse_porous = exp_fit.rmse;
      fit.dudz_porous = exp_fit.deriv(interface_z);
      fit.porous_fit_valid = exp_fit.converged || exp_fit.rmse < 1e-8 * std::abs(fit.u_slip);
      if (!exp_fit.converged) {
        fit.warnings.push_back("porous-side exponential fit did not fully converge");
      }
    } else {
      fit.warnings.push_back("porous side is flat; exponential fit skipped");
    }
  } else {
    fit.warnings.push_back("porous-side window too short; exponential fit skipped");
  }

  const double denom_bj = fit.u_slip - fit.u_seepage;
  if (std::abs(denom_bj) < 1e-300) {
    fit.warnings.push_back("slip equals seepage velocity; alpha undefined");
    fit.alpha = std::numeric_limits<double>::infinity();
  } else {
    fit.alpha = std::sqrt(fit.permeability) * fit.dudz_free / denom_bj;
  }
  if (std::abs(fit.u_slip) < 1e-300) {
    fit.warnings.push_back("zero slip velocity; beta undefined");
    fit.beta = 0.0;
  } else {
    fit.beta = std::sqrt(fit.permeability) *
               (fit.mu_eff * fit.dudz_porous - mu * fit.dudz_free) / (mu * fit.u_slip);
  }
  const double noise = std::max(fit.rmse_free, fit.rmse_porous);
  if (std::abs(fit.u_slip) < 10.0 * noise) {
    fit.warnings.push_back("slip velocity below 10x fit noise");
  }
  return fit;
}

InterfaceCandidates interface_position_candidates(const ProfileData& profile) {
  const std::size_t n = profile.z.size();
  if (n < 5) throw ConfigError("profile too short for interface detection");
  // Moving-average smoothing, window 3.
  std::vector<double> eps_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = (i == 0) ? 0 : i - 1;
    const std::size_t b = (i + 1 >= n) ? n - 1 : i + 1;
    eps_s[i] = (profile.epsilon[a] + profile.epsilon[i] + profile.epsilon[b]) / 3.0;
  }
  double eps_min = 1.0;
  for (double e : eps_s) eps_min = std::min(eps_min, e);
  if (eps_min >= 1.0 - 1e-3) throw ConfigError("profile has no porous region");

  InterfaceCandidates out;
  for (std::size_t i = 0; i < n; ++i) {
    if (eps_s[i] >= 1.0 - 1e-3) {
      // lowest plane at full porosity above the porous bed
      bool below_porous = false;
      for (std::size_t j = 0; j < i; ++j) {
        if (eps_s[j] < 1.0 - 1e-3) below_porous = true;
      }
      if (below_porous || i == 0) {
        out.z_exact = profile.z[i];
        break;
      }
    }
  }
  if (!out.z_exact) return out;

  // Plateau RMSE of the exponential fit deep in the bed.
  const double z_lo = profile.z.front();
  const double depth = *out.z_exact - z_lo;
  const double plat_lo = z_lo + std::max(2.0, 0.05 * depth);
  const double plat_hi = z_lo + 0.4 * depth;
  PermeabilityEstimate perm;
  try {
    perm = measure_permeability(profile, plat_lo, plat_hi);
  } catch (const ConfigError&) {
    return out;  // no drive metadata; exact position only
  }
  std::vector<double> zw, uw;
  for (std::size_t i = 0; i < n; ++i) {
    if (profile.z[i] >= plat_lo && profile.z[i] <= plat_hi) {
      zw.push_back(profile.z[i]);
      uw.push_back(profile.u_superficial[i] - perm.u_mean);
    }
  }
  if (zw.size() < 6) return out;
  const ExpFit plateau_fit = fit_porous_profile(zw, uw, *out.z_exact);
  out.plateau_rmse = plateau_fit.rmse;
  const double limit = 2.0 * std::max(plateau_fit.rmse, 1e-16);

  // Extend the window end upward while the fit stays good.
  for (std::size_t i = 0; i < n; ++i) {
    if (profile.z[i] <= plat_hi || profile.z[i] > *out.z_exact) continue;
    std::vector<double> zc = zw, uc = uw;
    for (std::size_t j = 0; j < n; ++j) {
      if (profile.z[j] > plat_hi && profile.z[j] <= profile.z[i]) {
        zc.push_back(profile.z[j]);
        uc.push_back(profile.u_superficial[j] - perm.u_mean);
      }
    }
    const ExpFit f = fit_porous_profile(zc, uc, *out.z_exact);
    if (f.rmse <= limit) {
      out.z_apparent = profile.z[i];
    }
  }
  return out;
}

}  // namespace porolb
