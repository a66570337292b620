#include "porolb/simulation.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "porolb/errors.hpp"

namespace porolb {

bool GlbmPlaneParams::all_free() const {
  if (forchheimer_cf != 0.0) return false;
  for (double e : eps) {
    if (e != 1.0) return false;
  }
  for (double k : permeability) {
    if (std::isfinite(k)) return false;
  }
  return true;
}

GlbmPlaneParams make_glbm_params(const std::vector<double>& eps,
                                 const std::vector<double>& permeability, double c_F,
                                 double nu, double lambda, GlbmViscosity mode, double J) {
  if (eps.size() != permeability.size()) {
    throw ConfigError("porosity and permeability profiles must have equal length");
  }
  GlbmPlaneParams p;
  p.eps = eps;
  p.permeability = permeability;
  p.forchheimer_cf = c_F;
  p.omega_plus.resize(eps.size());
  p.omega_minus.resize(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] <= 1.0)) {
      throw ConfigError("porosity must lie in (0, 1]");
    }
    double nu_eff = nu;
    switch (mode) {
      case GlbmViscosity::Plain: break;
      case GlbmViscosity::Rescaled: nu_eff = nu / eps[i]; break;
      case GlbmViscosity::ConstantRatio: nu_eff = (eps[i] < 1.0) ? J * nu : nu; break;
    }
    const FluidParams fp = relaxation_from_magic(nu_eff, lambda);
    p.omega_plus[i] = fp.omega_plus;
    p.omega_minus[i] = fp.omega_minus;
  }
  return p;
}

void glbm_force_and_velocity(const Vec3& momentum, double eps, double permeability,
                             double c_F, const Vec3& g, double nu, Vec3& u, Vec3& force) {
  if (!(eps > 0.0)) throw ConfigError("porosity must be positive");
  Vec3 vhat;
  for (int i = 0; i < 3; ++i) vhat[i] = momentum[i] + 0.5 * eps * g[i];
  const double c0 = 0.5 * (1.0 + eps * nu / (2.0 * permeability));
  const double c1 = 0.5 * eps * c_F / std::sqrt(permeability);
  const double disc = c0 * c0 + c1 * norm(vhat);
  if (disc < 0.0) throw NumericalInstability("negative discriminant in drag velocity solve");
  const double denom = c0 + std::sqrt(disc);
  for (int i = 0; i < 3; ++i) u[i] = vhat[i] / denom;
  const double drag_lin = eps * nu / permeability;
  const double drag_quad = eps * c_F / std::sqrt(permeability) * norm(u);
  for (int i = 0; i < 3; ++i) force[i] = -(drag_lin + drag_quad) * u[i] + eps * g[i];
}

Populations glbm_equilibrium(double delta_rho, const Vec3& u, double eps,
                             const LatticeModel& m, double rho0) {
  if (!(eps > 0.0)) throw ConfigError("porosity must be positive");
  Populations feq;
  const double uu = dot(u, u);
  for (int k = 0; k < kQ; ++k) {
    const double eu = m.e[k][0] * u[0] + m.e[k][1] * u[1] + m.e[k][2] * u[2];
    feq[k] = m.w[k] * (delta_rho + rho0 * (3.0 * eu + (4.5 * eu * eu - 1.5 * uu) / eps));
  }
  return feq;
}

Simulation::Simulation(const VoxelGeometry& geom, const FluidParams& params,
                       WallScheme scheme)
    : dims_(geom.dims),
      periodic_(geom.periodic),
      params_(params),
      scheme_(scheme),
      field_(geom.dims, geom.flags),
      links_(geom.links),
      porosity_(geom.porosity),
      wall_plane_lo_(geom.wall_plane_lo),
      wall_plane_hi_(geom.wall_plane_hi),
      fluid_cells_(geom.fluid_cells) {
  plane_fluid_count_.assign(dims_.nz, 0);
  for (int z = 0; z < dims_.nz; ++z) {
    plane_fluid_count_[z] = static_cast<std::int64_t>(
        std::llround(porosity_[z] * static_cast<double>(dims_.nx) * dims_.ny));
  }
  if (scheme_ == WallScheme::CLI) {
    for (const BoundaryLink& l : links_) {
      if (l.second_fluid < 0) ++cli_fallbacks_;
    }
  }
}

void Simulation::set_lid_velocity(const Vec3& u) {
  lid_velocity_ = u;
  const LatticeModel& m = LatticeModel::d3q19();
  const std::int64_t plane = static_cast<std::int64_t>(dims_.nx) * dims_.ny;
  for (BoundaryLink& l : links_) {
    const int z = static_cast<int>(l.fluid_cell / plane);
    if (z + m.e[l.direction][2] == dims_.nz - 1) l.moving = true;
  }
}

void Simulation::set_porous(GlbmPlaneParams glbm) {
  if (static_cast<int>(glbm.eps.size()) != dims_.nz) {
    throw ConfigError("GLBM plane parameters must cover every z-plane");
  }
  glbm_ = std::move(glbm);
}

void Simulation::initialize_equilibrium(double delta_rho, const Vec3& u) {
  const LatticeModel& m = LatticeModel::d3q19();
  const Populations feq = equilibrium(delta_rho, u, m, params_.rho0);
  for (std::int64_t c = 0; c < field_.cells(); ++c) {
    if (!field_.is_fluid(c)) continue;
    for (int k = 0; k < kQ; ++k) field_.cur(k)[c] = feq[k];
  }
}

namespace {

// Opposite pairs in the canonical ordering: (1,2), (3,4), ..., (17,18).
struct PairTables {
  double ex[9], ey[9], ez[9], w[9];
  PairTables() {
    const LatticeModel& m = LatticeModel::d3q19();
    for (int p = 0; p < 9; ++p) {
      const int k = 1 + 2 * p;
      ex[p] = m.e[k][0];
      ey[p] = m.e[k][1];
      ez[p] = m.e[k][2];
      w[p] = m.w[k];
    }
  }
};
const PairTables kPairs;

}  // namespace

void Simulation::collide_core() {
  const double wp = params_.omega_plus;
  const double wm = params_.omega_minus;
  const double rho0 = params_.rho0;
  const Vec3 g = params_.body_force;
  const std::int64_t n = field_.cells();
  double* f[kQ];
  for (int k = 0; k < kQ; ++k) f[k] = field_.cur(k);
  const std::vector<std::uint8_t>& flags = field_.flags();

#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < n; ++c) {
    if (flags[c] != 0) continue;
    double fk[kQ];
    for (int k = 0; k < kQ; ++k) fk[k] = f[k][c];

    double drho = fk[0];
    double vx = 0.0, vy = 0.0, vz = 0.0;
    for (int p = 0; p < 9; ++p) {
      const double a = fk[1 + 2 * p], b = fk[2 + 2 * p];
      drho += a + b;
      vx += kPairs.ex[p] * (a - b);
      vy += kPairs.ey[p] * (a - b);
      vz += kPairs.ez[p] * (a - b);
    }
    const double ux = vx / rho0, uy = vy / rho0, uz = vz / rho0;
    const double uu = ux * ux + uy * uy + uz * uz;

    const double feq0 = (1.0 / 3.0) * (drho - rho0 * 1.5 * uu);
    fk[0] -= wp * (fk[0] - feq0);
    for (int p = 0; p < 9; ++p) {
      const int k = 1 + 2 * p, kb = k + 1;
      const double eu = kPairs.ex[p] * ux + kPairs.ey[p] * uy + kPairs.ez[p] * uz;
      const double eg = kPairs.ex[p] * g[0] + kPairs.ey[p] * g[1] + kPairs.ez[p] * g[2];
      const double feq_p = kPairs.w[p] * (drho + rho0 * (4.5 * eu * eu - 1.5 * uu));
      const double feq_m = kPairs.w[p] * rho0 * 3.0 * eu;
      const double fp = 0.5 * (fk[k] + fk[kb]);
      const double fm = 0.5 * (fk[k] - fk[kb]);
      const double relax_p = wp * (fp - feq_p);
      const double relax_m = wm * (fm - feq_m);
      const double fpop = 3.0 * kPairs.w[p] * rho0 * eg;
      fk[k] += -relax_p - relax_m + fpop;
      fk[kb] += -relax_p + relax_m - fpop;
    }
    for (int k = 0; k < kQ; ++k) f[k][c] = fk[k];
  }
}

void Simulation::collide_glbm() {
  const GlbmPlaneParams& gp = *glbm_;
  const double rho0 = params_.rho0;
  const double nu = params_.nu;
  const double cf = gp.forchheimer_cf;
  const Vec3 g = params_.body_force;
  const std::int64_t n = field_.cells();
  const std::int64_t plane = static_cast<std::int64_t>(dims_.nx) * dims_.ny;
  double* f[kQ];
  for (int k = 0; k < kQ; ++k) f[k] = field_.cur(k);
  const std::vector<std::uint8_t>& flags = field_.flags();

#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < n; ++c) {
    if (flags[c] != 0) continue;
    const int z = static_cast<int>(c / plane);
    const double eps = gp.eps[z];
    const double K = gp.permeability[z];
    const double wp = gp.omega_plus[z];
    const double wm = gp.omega_minus[z];
    const double eq_eps = gp.eps_in_equilibrium ? eps : 1.0;

    double fk[kQ];
    for (int k = 0; k < kQ; ++k) fk[k] = f[k][c];

    double drho = fk[0];
    double vx = 0.0, vy = 0.0, vz = 0.0;
    for (int p = 0; p < 9; ++p) {
      const double a = fk[1 + 2 * p], b = fk[2 + 2 * p];
      drho += a + b;
      vx += kPairs.ex[p] * (a - b);
      vy += kPairs.ey[p] * (a - b);
      vz += kPairs.ez[p] * (a - b);
    }
    // Implicit half-drag velocity and total force.
    const double vhx = vx / rho0 + 0.5 * eps * g[0];
    const double vhy = vy / rho0 + 0.5 * eps * g[1];
    const double vhz = vz / rho0 + 0.5 * eps * g[2];
    const double c0 = 0.5 * (1.0 + eps * nu / (2.0 * K));
    double denom;
    if (cf == 0.0) {
      denom = 2.0 * c0;
    } else {
      const double c1 = 0.5 * eps * cf / std::sqrt(K);
      const double vmag = std::sqrt(vhx * vhx + vhy * vhy + vhz * vhz);
      denom = c0 + std::sqrt(c0 * c0 + c1 * vmag);
    }
    const double ux = vhx / denom, uy = vhy / denom, uz = vhz / denom;
    const double umag = std::sqrt(ux * ux + uy * uy + uz * uz);
    const double drag = eps * nu / K + (cf != 0.0 ? eps * cf / std::sqrt(K) * umag : 0.0);
    const double Fx = -drag * ux + eps * g[0];
    const double Fy = -drag * uy + eps * g[1];
    const double Fz = -drag * uz + eps * g[2];

    const double uu = ux * ux + uy * uy + uz * uz;
    const double force_pref = (1.0 - 0.5 * wm) * 3.0 * rho0;

    const double feq0 = (1.0 / 3.0) * (drho - rho0 * 1.5 * uu / eq_eps);
    fk[0] -= wp * (fk[0] - feq0);
    for (int p = 0; p < 9; ++p) {
      const int k = 1 + 2 * p, kb = k + 1;
      const double eu = kPairs.ex[p] * ux + kPairs.ey[p] * uy + kPairs.ez[p] * uz;
      const double eF = kPairs.ex[p] * Fx + kPairs.ey[p] * Fy + kPairs.ez[p] * Fz;
      const double feq_p =
          kPairs.w[p] * (drho + rho0 * (4.5 * eu * eu - 1.5 * uu) / eq_eps);
      const double feq_m = kPairs.w[p] * rho0 * 3.0 * eu;
      const double fp = 0.5 * (fk[k] + fk[kb]);
      const double fm = 0.5 * (fk[k] - fk[kb]);
      const double relax_p = wp * (fp - feq_p);
      const double relax_m = wm * (fm - feq_m);
      const double fpop = force_pref * kPairs.w[p] * eF;
      fk[k] += -relax_p - relax_m + fpop;
      fk[kb] += -relax_p + relax_m - fpop;
    }
    for (int k = 0; k < kQ; ++k) f[k][c] = fk[k];
  }
}

namespace {

void stream_pass(const Dims& dims, const PeriodicAxes& periodic,
                 const std::vector<std::uint8_t>& flags, LatticeField& field) {
  const LatticeModel& m = LatticeModel::d3q19();
  const int nx = dims.nx, ny = dims.ny, nz = dims.nz;

  // Rest population: stays in place.
  {
    const double* src = field.cur(0);
    double* dst = field.next(0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < dims.cells(); ++c) {
      if (flags[c] == 0) dst[c] = src[c];
    }
  }

  for (int k = 1; k < kQ; ++k) {
    const int ex = m.e[k][0], ey = m.e[k][1], ez = m.e[k][2];
    const double* src = field.cur(k);
    double* dst = field.next(k);
#pragma omp parallel for collapse(2) schedule(static)
    for (int z = 0; z < nz; ++z) {
      for (int y = 0; y < ny; ++y) {
        int zd = z + ez;
        if (zd < 0) zd = periodic[2] ? nz - 1 : -1;
        if (zd >= nz) zd = periodic[2] ? 0 : -1;
        int yd = y + ey;
        if (yd < 0) yd = periodic[1] ? ny - 1 : -1;
        if (yd >= ny) yd = periodic[1] ? 0 : -1;
        if (zd < 0 || yd < 0) continue;
        const std::int64_t row = dims.index(0, y, z);
        const std::int64_t row_d = dims.index(0, yd, zd);
        for (int x = 0; x < nx; ++x) {
          if (flags[row + x] != 0) continue;
          int xd = x + ex;
          if (xd < 0) xd = periodic[0] ? nx - 1 : -1;
          if (xd >= nx) xd = periodic[0] ? 0 : -1;
          if (xd < 0) continue;
          const std::int64_t d = row_d + xd;
          if (flags[d] == 0) dst[d] = src[row + x];
        }
      }
    }
  }
}

}  // namespace

void Simulation::stream_and_bounce() {
  stream_pass(dims_, periodic_, field_.flags(), field_);

  const LatticeModel& m = LatticeModel::d3q19();
  const std::int64_t nlinks = static_cast<std::int64_t>(links_.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nlinks; ++i) {
    const BoundaryLink& l = links_[i];
    if (l.moving) {
      apply_moving_wall(l, field_, m, lid_velocity_, params_.rho0);
    } else if (scheme_ == WallScheme::CLI && l.second_fluid >= 0) {
      apply_cli(l, field_, m);
    } else {
      apply_sbb(l, field_, m);
    }
  }
  field_.swap_buffers();
}

void Simulation::step() {
  if (glbm_ && !glbm_->all_free()) {
    collide_glbm();
  } else {
    collide_core();
  }
  stream_and_bounce();
  ++steps_;
}

void Simulation::macroscopic(std::int64_t cell, double& delta_rho, Vec3& u) const {
  const LatticeModel& m = LatticeModel::d3q19();
  Populations fk;
  for (int k = 0; k < kQ; ++k) fk[k] = field_.cur(k)[cell];
  Vec3 v;
  moments(fk, m, delta_rho, v, params_.rho0);
  if (glbm_ && !glbm_->all_free()) {
    const int z = plane_of(cell);
    Vec3 force;
    glbm_force_and_velocity(v, glbm_->eps[z], glbm_->permeability[z],
                            glbm_->forchheimer_cf, params_.body_force, params_.nu, u,
                            force);
  } else {
    for (int i = 0; i < 3; ++i) u[i] = v[i] + 0.5 * params_.body_force[i] / params_.rho0;
  }
}

ProfileData Simulation::planar_profile(int stream_axis) const {
  int z_lo = dims_.nz, z_hi = -1;
  for (int z = 0; z < dims_.nz; ++z) {
    if (plane_fluid_count_[z] > 0) {
      z_lo = std::min(z_lo, z);
      z_hi = std::max(z_hi, z);
    }
  }
  ProfileData prof;
  if (z_hi < 0) return prof;
  const int nplanes = z_hi - z_lo + 1;
  prof.z.resize(nplanes);
  prof.u_superficial.resize(nplanes);
  prof.u_intrinsic.resize(nplanes);
  prof.epsilon.resize(nplanes);
  prof.stream_axis = stream_axis;
  prof.nu = params_.nu;
  prof.body_force = params_.body_force;
  if (wall_plane_lo_ && wall_plane_hi_) {
    prof.z0 = *wall_plane_lo_;
    prof.height = *wall_plane_hi_ - *wall_plane_lo_;
  } else {
    prof.z0 = 0.0;
    prof.height = dims_.nz;
  }

  const std::int64_t plane = static_cast<std::int64_t>(dims_.nx) * dims_.ny;
#pragma omp parallel for schedule(static)
  for (int z = z_lo; z <= z_hi; ++z) {
    double sum = 0.0;
    for (std::int64_t c = plane * z; c < plane * (z + 1); ++c) {
      if (field_.flags()[c] != 0) continue;
      double drho;
      Vec3 u;
      macroscopic(c, drho, u);
      sum += u[stream_axis];
    }
    const int i = z - z_lo;
    prof.z[i] = z + 0.5;
    prof.u_superficial[i] = sum / static_cast<double>(plane);
    prof.u_intrinsic[i] =
        plane_fluid_count_[z] > 0 ? sum / static_cast<double>(plane_fluid_count_[z]) : 0.0;
    prof.epsilon[i] = porosity_[z];
  }
  prof.normalize();
  return prof;
}

double Simulation::max_speed() const {
  double vmax2 = 0.0;
  bool finite = true;
#pragma omp parallel for schedule(static) reduction(max : vmax2) reduction(&& : finite)
  for (std::int64_t c = 0; c < field_.cells(); ++c) {
    if (field_.flags()[c] != 0) continue;
    double drho;
    Vec3 u;
    macroscopic(c, drho, u);
    const double m2 = dot(u, u);
    finite = finite && std::isfinite(m2) && std::isfinite(drho);
    vmax2 = std::max(vmax2, m2);
  }
  if (!finite) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(vmax2);
}

void stream(LatticeField& field, const PeriodicAxes& periodic) {
  stream_pass(field.dims(), periodic, field.flags(), field);
  field.swap_buffers();
}

RunStats run_to_steady_state(Simulation& sim, const SteadyConfig& cfg,
                             ProfileData* final_profile) {
  RunStats stats;
  stats.cli_fallbacks = sim.cli_fallback_count();
  ProfileData prev = sim.planar_profile();
  const auto t0 = std::chrono::steady_clock::now();
  long done = 0;
  while (done < cfg.max_steps) {
    const long burst = std::min<long>(cfg.check_interval, cfg.max_steps - done);
    for (long i = 0; i < burst; ++i) sim.step();
    done += burst;

    const double vmax = sim.max_speed();
    if (!std::isfinite(vmax) || vmax > cfg.max_speed) {
      std::ostringstream os;
      os << "instability after " << done << " steps: max |u| = " << vmax;
      throw NumericalInstability(os.str());
    }
    ProfileData cur = sim.planar_profile();
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < cur.u_superficial.size(); ++i) {
      diff = std::max(diff, std::abs(cur.u_superficial[i] - prev.u_superficial[i]));
      scale = std::max(scale, std::abs(cur.u_superficial[i]));
    }
    stats.residual = scale > 0.0 ? diff / scale : diff;
    prev = std::move(cur);
    if (stats.residual < cfg.tolerance) {
      stats.converged = true;
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  stats.steps = done;
  stats.seconds = std::chrono::duration<double>(t1 - t0).count();
  stats.mlups = stats.seconds > 0.0
                    ? static_cast<double>(sim.dims().cells()) * done / stats.seconds / 1e6
                    : 0.0;
  if (final_profile) *final_profile = std::move(prev);
  return stats;
}

}  // namespace porolb
