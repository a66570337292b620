#include "porolb/lattice.hpp"

#include <sstream>

#include "porolb/errors.hpp"

namespace porolb {

namespace {

LatticeModel build_d3q19() {
  LatticeModel m;
  m.e = {{
      {0, 0, 0},
      {1, 0, 0},
      {-1, 0, 0},
      {0, 1, 0},
      {0, -1, 0},
      {0, 0, 1},
      {0, 0, -1},
      {1, 1, 0},
      {-1, -1, 0},
      {1, -1, 0},
      {-1, 1, 0},
      {1, 0, 1},
      {-1, 0, -1},
      {1, 0, -1},
      {-1, 0, 1},
      {0, 1, 1},
      {0, -1, -1},
      {0, 1, -1},
      {0, -1, 1},
  }};
  for (int k = 0; k < kQ; ++k) {
    const int order = std::abs(m.e[k][0]) + std::abs(m.e[k][1]) + std::abs(m.e[k][2]);
    m.w[k] = (order == 0) ? 1.0 / 3.0 : (order == 1) ? 1.0 / 18.0 : 1.0 / 36.0;
  }
  for (int k = 0; k < kQ; ++k) {
    for (int j = 0; j < kQ; ++j) {
      if (m.e[j][0] == -m.e[k][0] && m.e[j][1] == -m.e[k][1] && m.e[j][2] == -m.e[k][2]) {
        m.opposite[k] = j;
        break;
      }
    }
  }
  m.cs2 = 1.0 / 3.0;
  m.inv_cs2 = 3.0;
  return m;
}

}  // namespace

const LatticeModel& LatticeModel::d3q19() {
  static const LatticeModel model = build_d3q19();
  return model;
}

FluidParams relaxation_from_magic(double nu, double lambda_magic) {
  if (!(nu > 0.0)) throw ConfigError("viscosity must be positive");
  if (!(lambda_magic > 0.0)) throw ConfigError("magic parameter must be positive");
  FluidParams p;
  p.nu = nu;
  p.lambda_magic = lambda_magic;
  p.omega_plus = 1.0 / (3.0 * nu + 0.5);
  p.omega_minus = 1.0 / (lambda_magic / (1.0 / p.omega_plus - 0.5) + 0.5);
  for (double w : {p.omega_plus, p.omega_minus}) {
    if (!(w > 0.0 && w < 2.0)) {
      std::ostringstream os;
      os << "relaxation rates out of (0,2): omega+=" << p.omega_plus
         << " omega-=" << p.omega_minus << " (nu=" << nu << ", lambda=" << lambda_magic << ")";
      throw ConfigError(os.str());
    }
  }
  return p;
}

Populations equilibrium(double delta_rho, const Vec3& u, const LatticeModel& m,
                        double rho0) {
  Populations feq;
  const double uu = dot(u, u);
  for (int k = 0; k < kQ; ++k) {
    const double eu = m.e[k][0] * u[0] + m.e[k][1] * u[1] + m.e[k][2] * u[2];
    feq[k] = m.w[k] * (delta_rho + rho0 * (3.0 * eu + 4.5 * eu * eu - 1.5 * uu));
  }
  return feq;
}

void moments(const Populations& f, const LatticeModel& m, double& delta_rho,
             Vec3& u, double rho0) {
  delta_rho = 0.0;
  u = {0.0, 0.0, 0.0};
  for (int k = 0; k < kQ; ++k) {
    delta_rho += f[k];
    u[0] += m.e[k][0] * f[k];
    u[1] += m.e[k][1] * f[k];
    u[2] += m.e[k][2] * f[k];
  }
  u[0] /= rho0;
  u[1] /= rho0;
  u[2] /= rho0;
}

Populations trt_collide(const Populations& f, const FluidParams& p,
                        const LatticeModel& m) {
  double drho;
  Vec3 u;
  moments(f, m, drho, u, p.rho0);
  const Populations feq = equilibrium(drho, u, m, p.rho0);

  Populations out;
  for (int k = 0; k < kQ; ++k) {
    const int kb = m.opposite[k];
    const double fp = 0.5 * (f[k] + f[kb]);
    const double fm = 0.5 * (f[k] - f[kb]);
    const double ep = 0.5 * (feq[k] + feq[kb]);
    const double em = 0.5 * (feq[k] - feq[kb]);
    const double eg = m.e[k][0] * p.body_force[0] + m.e[k][1] * p.body_force[1] +
                      m.e[k][2] * p.body_force[2];
    out[k] = f[k] - p.omega_plus * (fp - ep) - p.omega_minus * (fm - em) +
             3.0 * m.w[k] * p.rho0 * eg;
  }
  for (double v : out) {
    if (!std::isfinite(v)) {
      throw NumericalInstability("non-finite population after collision");
    }
  }
  return out;
}

}  // namespace porolb
