#include "porolb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "porolb/errors.hpp"

namespace porolb {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Uniform doubles built from raw generator bits; avoids the
// implementation-defined behavior of std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Contact {
  int sphere = -1;  // index into the pack
  Vec3 center;      // concrete periodic image used while rolling
  double radius = 0.0;
};

// Wrap center to the periodic image nearest to p (x, y only).
Vec3 nearest_image(const Vec3& center, const Vec3& p, const Box3& box) {
  Vec3 c = center;
  c[0] -= box.lx * std::round((c[0] - p[0]) / box.lx);
  c[1] -= box.ly * std::round((c[1] - p[1]) / box.ly);
  return c;
}

// Smallest value t in (lo, hi] with A sin(t) + B cos(t) = C, or nullopt.
std::optional<double> first_angle_solution(double A, double B, double C, double lo,
                                           double hi) {
  const double rho = std::hypot(A, B);
  if (rho < 1e-300) return std::nullopt;
  const double s = C / rho;
  if (std::abs(s) > 1.0) return std::nullopt;
  const double phi = std::atan2(B, A);
  const double base = std::asin(std::clamp(s, -1.0, 1.0));
  std::optional<double> best;
  for (int n = -2; n <= 2; ++n) {
    for (double t : {base - phi + 2.0 * kPi * n, kPi - base - phi + 2.0 * kPi * n}) {
      if (t > lo && t <= hi && (!best || t < *best)) best = t;
    }
  }
  return best;
}

// Solve sum_i lambda_i n_i = e_z in least squares; returns lambdas.
// Used to decide whether a contact set can support the sphere.
std::vector<double> support_multipliers(const std::vector<Vec3>& normals) {
  const int n = static_cast<int>(normals.size());
  // Normal equations of the 3 x n system N lambda = ez.
  std::vector<std::vector<double>> G(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) G[i][j] = dot(normals[i], normals[j]);
    G[i][n] = normals[i][2];  // n_i . e_z
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
    }
    std::swap(G[col], G[piv]);
    if (std::abs(G[col][col]) < 1e-14) continue;  // degenerate contact set
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double fac = G[r][col] / G[col][col];
      for (int c = col; c <= n; ++c) G[r][c] -= fac * G[col][c];
    }
  }
  std::vector<double> lambda(n, 0.0);
  for (int i = 0; i < n; ++i) {
    lambda[i] = (std::abs(G[i][i]) < 1e-14) ? 0.0 : G[i][n] / G[i][i];
  }
  return lambda;
}

class Depositor {
 public:
  Depositor(const PackingParams& params)
      : params_(params), box_(params.box), rng_(params.seed) {}

  SpherePack run() {
    SpherePack pack;
    pack.box = box_;
    pack.bottom_plate_z = params_.bottom_plate_z;
    pack.seed = params_.seed;
    const double headroom = params_.headroom >= 0.0 ? params_.headroom : params_.r_mean;
    const double accept_cap = params_.target_fill_height + headroom;

    int rejects = 0;
    while (rejects < params_.max_consecutive_rejects) {
      const double r = params_.r_mean * (1.0 + params_.r_spread * (2.0 * uniform01(rng_) - 1.0));
      const double x = uniform01(rng_) * box_.lx;
      const double y = uniform01(rng_) * box_.ly;
      std::optional<Vec3> rest = settle(pack.spheres, x, y, r);
      if (rest && (*rest)[2] + r <= accept_cap && !overlaps(pack.spheres, *rest, r)) {
        Vec3 p = *rest;
        p[0] = wrap(p[0], box_.lx);
        p[1] = wrap(p[1], box_.ly);
        pack.spheres.push_back({p, r});
        pack.achieved_height = std::max(pack.achieved_height, p[2] + r);
        rejects = 0;
      } else {
        ++rejects;
      }
    }
    if (pack.achieved_height < params_.target_fill_height) {
      std::ostringstream os;
      os << "packing stalled at height " << pack.achieved_height << " of target "
         << params_.target_fill_height << " after " << params_.max_consecutive_rejects
         << " consecutive rejected insertions (" << pack.spheres.size() << " spheres)";
      throw GeometryError(os.str());
    }
    return pack;
  }

 private:
  static double wrap(double v, double len) {
    v = std::fmod(v, len);
    return v < 0.0 ? v + len : v;
  }

  bool overlaps(const std::vector<Sphere>& spheres, const Vec3& p, double r) const {
    for (const Sphere& s : spheres) {
      const Vec3 c = nearest_image(s.center, p, box_);
      const double rr = r + s.radius;
      const double d2 = (p[0] - c[0]) * (p[0] - c[0]) + (p[1] - c[1]) * (p[1] - c[1]) +
                        (p[2] - c[2]) * (p[2] - c[2]);
      const double tol = 1e-6 * std::min(r, s.radius);
      if (d2 < (rr - tol) * (rr - tol)) return true;
    }
    return false;
  }

  // Highest contact elevation below z for a vertical drop at (x, y);
  // fills `hit` when a sphere (not the plate) is struck first.
  double landing_z(const std::vector<Sphere>& spheres, double x, double y, double r,
                   double z_from, std::optional<Contact>& hit) const {
    double best = params_.bottom_plate_z + r;
    hit.reset();
    const Vec3 probe{x, y, z_from};
    for (int i = 0; i < static_cast<int>(spheres.size()); ++i) {
      const Sphere& s = spheres[i];
      const Vec3 c = nearest_image(s.center, probe, box_);
      const double R = r + s.radius;
      const double h2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
      if (h2 >= R * R) continue;
      const double zc = c[2] + std::sqrt(R * R - h2);
      if (zc > best && zc < z_from - 1e-9) {
        best = zc;
        hit = Contact{i, c, s.radius};
      }
    }
    return best;
  }

  // First sphere contact along the parametrized path p(t), expressed through
  // per-sphere coefficients of A sin + B cos = C. `eval` maps t to position.
  template <typename CoefFn, typename EvalFn>
  std::optional<std::pair<double, Contact>> first_sphere_event(
      const std::vector<Sphere>& spheres, const std::vector<int>& skip, double r,
      double lo, double hi, const Vec3& near_p, CoefFn coef, EvalFn eval) const {
    std::optional<std::pair<double, Contact>> best;
    for (int i = 0; i < static_cast<int>(spheres.size()); ++i) {
      if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
      const Sphere& s = spheres[i];
      const Vec3 c = nearest_image(s.center, near_p, box_);
      double A, B, C;
      coef(c, r + s.radius, A, B, C);
      const auto t = first_angle_solution(A, B, C, lo, hi);
      if (t && (!best || *t < best->first)) {
        best = {{*t, Contact{i, c, s.radius}}};
      }
    }
    if (best) {
      // Re-wrap the stored image relative to the event position.
      const Vec3 pe = eval(best->first);
      best->second.center = nearest_image(best->second.center, pe, box_);
    }
    return best;
  }

  // Settles one sphere; returns its rest position or nullopt on failure.
  std::optional<Vec3> settle(const std::vector<Sphere>& spheres, double x, double y,
                             double r) const {
    double top = params_.bottom_plate_z;
    for (const Sphere& s : spheres) top = std::max(top, s.center[2] + s.radius);
    Vec3 p{x, y, top + r + 1.0};
    std::vector<Contact> contacts;

    for (int iter = 0; iter < 400; ++iter) {
      if (contacts.empty()) {
        std::optional<Contact> hit;
        const double z_land = landing_z(spheres, p[0], p[1], r, p[2], hit);
        p[2] = z_land;
        if (!hit) return p;  // resting on the plate
        contacts.push_back(*hit);
      } else if (contacts.size() == 1) {
        if (!roll_one(spheres, r, p, contacts)) return std::nullopt;
        if (contacts.empty()) continue;               // fell off the equator
        if (contacts.size() == 1 && frozen_) return p;  // plate reached
        // otherwise picked up a second contact; continue
      } else {
        if (!roll_two(spheres, r, p, contacts)) return std::nullopt;
        if (frozen_) return p;
      }
      if (frozen_) return p;
    }
    return std::nullopt;  // event budget exhausted; treat as rejected attempt
  }

  // Roll on a single contact. Updates p/contacts; sets frozen_ when the
  // plate is reached. Returns false on numerical failure.
  bool roll_one(const std::vector<Sphere>& spheres, double r, Vec3& p,
                std::vector<Contact>& contacts) const {
    frozen_ = false;
    Contact c1 = contacts[0];
    const double R1 = r + c1.radius;
    Vec3 u{p[0] - c1.center[0], p[1] - c1.center[1], p[2] - c1.center[2]};
    const double h = std::hypot(u[0], u[1]);
    double dx = 1.0, dy = 0.0;  // deterministic tie-break for a dead-center landing
    if (h > 1e-12) {
      dx = u[0] / h;
      dy = u[1] / h;
    }
    const double theta0 = std::atan2(std::max(h, 0.0), u[2]);
    if (theta0 >= kPi / 2.0 - 1e-12) {
      contacts.clear();  // at or below the equator: free fall
      return true;
    }
    const auto eval = [&](double th) {
      return Vec3{c1.center[0] + R1 * std::sin(th) * dx, c1.center[1] + R1 * std::sin(th) * dy,
                  c1.center[2] + R1 * std::cos(th)};
    };
    // Plate contact: c_z + R1 cos(theta) = plate_z + r.
    std::optional<double> t_plate;
    {
      const double ct = (params_.bottom_plate_z + r - c1.center[2]) / R1;
      if (std::abs(ct) <= 1.0) {
        const double th = std::acos(ct);
        if (th > theta0 + 1e-12 && th <= kPi / 2.0) t_plate = th;
      }
    }
    const auto coef = [&](const Vec3& c, double R, double& A, double& B, double& C) {
      const Vec3 w{c1.center[0] - c[0], c1.center[1] - c[1], c1.center[2] - c[2]};
      A = 2.0 * R1 * (w[0] * dx + w[1] * dy);
      B = 2.0 * R1 * w[2];
      C = R * R - dot(w, w) - R1 * R1;
    };
    const auto hit = first_sphere_event(spheres, {c1.sphere}, r, theta0 + 1e-12,
                                        kPi / 2.0, p, coef, eval);

    double t_end = kPi / 2.0;
    int what = 0;  // 0 equator, 1 plate, 2 sphere
    if (t_plate && *t_plate < t_end) {
      t_end = *t_plate;
      what = 1;
    }
    if (hit && hit->first < t_end) {
      t_end = hit->first;
      what = 2;
    }
    p = eval(t_end);
    if (what == 0) {
      contacts.clear();  // rolls past the equator and falls
    } else if (what == 1) {
      p[2] = params_.bottom_plate_z + r;
      frozen_ = true;
    } else {
      contacts.push_back(hit->second);
    }
    return true;
  }

  // Roll on two contacts around their common axis. Handles the third-contact
  // and plate events plus the stability test at the circle minimum.
  bool roll_two(const std::vector<Sphere>& spheres, double r, Vec3& p,
                std::vector<Contact>& contacts) const {
    frozen_ = false;
    Contact c1 = contacts[0], c2 = contacts[1];
    c2.center = nearest_image(c2.center, c1.center, box_);
    const double R1 = r + c1.radius, R2 = r + c2.radius;
    Vec3 axis{c2.center[0] - c1.center[0], c2.center[1] - c1.center[1],
              c2.center[2] - c1.center[2]};
    const double d12 = norm(axis);
    if (d12 < 1e-12) return false;
    for (double& v : axis) v /= d12;
    const double s = (d12 * d12 + R1 * R1 - R2 * R2) / (2.0 * d12);
    const double rho2 = R1 * R1 - s * s;
    if (rho2 <= 1e-12) {  // contact centers nearly aligned with ours
      contacts.erase(contacts.begin() + 1);
      return true;
    }
    const double rho = std::sqrt(rho2);
    const Vec3 q0{c1.center[0] + s * axis[0], c1.center[1] + s * axis[1],
                  c1.center[2] + s * axis[2]};
    Vec3 b1{p[0] - q0[0], p[1] - q0[1], p[2] - q0[2]};
    // Project out any axis component and normalize.
    const double ba = dot(b1, axis);
    for (int i = 0; i < 3; ++i) b1[i] -= ba * axis[i];
    const double nb = norm(b1);
    if (nb < 1e-12) return false;
    for (double& v : b1) v /= nb;
    const Vec3 b2{axis[1] * b1[2] - axis[2] * b1[1], axis[2] * b1[0] - axis[0] * b1[2],
                  axis[0] * b1[1] - axis[1] * b1[0]};

    const double Kz = std::hypot(b1[2], b2[2]);
    const auto eval_dir = [&](double psi, double sgn) {
      const double cs = std::cos(sgn * psi), sn = std::sin(sgn * psi);
      return Vec3{q0[0] + rho * (cs * b1[0] + sn * b2[0]),
                  q0[1] + rho * (cs * b1[1] + sn * b2[1]),
                  q0[2] + rho * (cs * b1[2] + sn * b2[2])};
    };
    if (Kz < 1e-13) {
      // Horizontal circle: no descent possible; decide support directly.
      return support_or_release(r, p, contacts);
    }
    // z(psi) = q0z + rho K cos(psi - psi_hat); current position is psi = 0.
    const double psi_hat = std::atan2(b2[2], b1[2]);
    const double dz0 = -rho * Kz * std::sin(-psi_hat);
    double sgn = (dz0 < 0.0) ? 1.0 : -1.0;
    // Distance (along sgn) to the circle minimum at psi = psi_hat + pi.
    double span = sgn > 0 ? std::fmod(psi_hat + kPi + 2.0 * kPi, 2.0 * kPi)
                          : std::fmod(-(psi_hat + kPi) + 4.0 * kPi, 2.0 * kPi);
    if (span < 1e-10) {
      // Already at the minimum (or starting on it): support test.
      return support_or_release(r, p, contacts);
    }

    const auto eval = [&](double t) { return eval_dir(t, sgn); };
    const auto coef = [&](const Vec3& c, double R, double& A, double& B, double& C) {
      const Vec3 w{q0[0] - c[0], q0[1] - c[1], q0[2] - c[2]};
      const double wb1 = w[0] * b1[0] + w[1] * b1[1] + w[2] * b1[2];
      const double wb2 = w[0] * b2[0] + w[1] * b2[1] + w[2] * b2[2];
      A = 2.0 * rho * wb2 * sgn;
      B = 2.0 * rho * wb1;
      C = R * R - dot(w, w) - rho2;
    };
    const auto hit = first_sphere_event(spheres, {c1.sphere, c2.sphere}, r, 1e-12, span,
                                        p, coef, eval);
    std::optional<double> t_plate;
    {
      // q0z + rho K cos(sgn t - psi_hat) = plate_z + r
      const double target = (params_.bottom_plate_z + r - q0[2]) / (rho * Kz);
      if (std::abs(target) <= 1.0) {
        const double a0 = std::acos(std::clamp(target, -1.0, 1.0));
        for (double cand : {a0, -a0}) {
          for (int n = -1; n <= 1; ++n) {
            const double t = sgn * (cand + psi_hat + 2.0 * kPi * n);
            if (t > 1e-12 && t <= span && (!t_plate || t < *t_plate)) t_plate = t;
          }
        }
      }
    }

    double t_end = span;
    int what = 0;  // 0 circle minimum, 1 plate, 2 sphere
    if (t_plate && *t_plate < t_end) {
      t_end = *t_plate;
      what = 1;
    }
    if (hit && hit->first < t_end) {
      t_end = hit->first;
      what = 2;
    }
    p = eval(t_end);
    contacts[0] = c1;
    contacts[1] = c2;
    if (what == 1) {
      p[2] = params_.bottom_plate_z + r;
      frozen_ = true;
      return true;
    }
    if (what == 2) {
      contacts.push_back(hit->second);
      return support_or_release(r, p, contacts);
    }
    return support_or_release(r, p, contacts);
  }

  // Gravity support test on the current contact normals. Freezes when all
  // multipliers are non-negative, otherwise releases the most negative one.
  bool support_or_release(double r, const Vec3& p, std::vector<Contact>& contacts) const {
    std::vector<Vec3> normals;
    for (Contact& c : contacts) {
      c.center = nearest_image(c.center, p, box_);
      Vec3 n{p[0] - c.center[0], p[1] - c.center[1], p[2] - c.center[2]};
      const double len = norm(n);
      if (len < 1e-12) return false;
      for (double& v : n) v /= len;
      normals.push_back(n);
    }
    const std::vector<double> lambda = support_multipliers(normals);
    int worst = -1;
    double worst_val = -1e-9;
    for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
      if (lambda[i] < worst_val) {
        worst_val = lambda[i];
        worst = i;
      }
    }
    if (worst < 0) {
      frozen_ = true;
      return true;
    }
    contacts.erase(contacts.begin() + worst);
    frozen_ = false;
    return true;
  }

  const PackingParams& params_;
  Box3 box_;
  mutable std::mt19937_64 rng_;
  mutable bool frozen_ = false;
};

}  // namespace

SpherePack generate_packing(const PackingParams& params) {
  if (!(params.r_mean >= 2.0)) throw ConfigError("mean radius must be at least 2 lattice units");
  if (!(params.r_spread >= 0.0 && params.r_spread <= 0.5)) {
    throw ConfigError("radius spread must lie in [0, 0.5]");
  }
  if (!(params.box.lx > 2.0 * params.r_mean && params.box.ly > 2.0 * params.r_mean)) {
    throw ConfigError("box too small for one sphere");
  }
  return Depositor(params).run();
}

namespace {

// Spheres replicated over the periodic images that can touch the domain.
std::vector<Sphere> effective_spheres(const SpherePack& pack, const PeriodicAxes& periodic,
                                      Dims dims) {
  std::vector<Sphere> out;
  const int ix_max = periodic[0] ? 1 : 0;
  const int iy_max = periodic[1] ? 1 : 0;
  for (const Sphere& s : pack.spheres) {
    for (int ix = -ix_max; ix <= ix_max; ++ix) {
      for (int iy = -iy_max; iy <= iy_max; ++iy) {
        Sphere img = s;
        img.center[0] += ix * pack.box.lx;
        img.center[1] += iy * pack.box.ly;
        if (img.center[0] + img.radius < 0.0 || img.center[0] - img.radius > dims.nx ||
            img.center[1] + img.radius < 0.0 || img.center[1] - img.radius > dims.ny) {
          continue;
        }
        out.push_back(img);
      }
    }
  }
  return out;
}

// Smallest t in (0, 1] where p + t e crosses the sphere surface.
std::optional<double> ray_sphere(const Vec3& p, const std::array<int, 3>& e,
                                 const Sphere& s) {
  const Vec3 d{p[0] - s.center[0], p[1] - s.center[1], p[2] - s.center[2]};
  const double a = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
  const double b = 2.0 * (e[0] * d[0] + e[1] * d[1] + e[2] * d[2]);
  const double c = dot(d, d) - s.radius * s.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  std::optional<double> best;
  for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
    if (t > 0.0 && t <= 1.0 + 1e-12 && (!best || t < *best)) best = t;
  }
  return best;
}

std::optional<double> ray_plane_z(const Vec3& p, const std::array<int, 3>& e,
                                  double plane_z) {
  if (e[2] == 0) return std::nullopt;
  const double t = (plane_z - p[2]) / e[2];
  if (t > 0.0 && t <= 1.0 + 1e-12) return t;
  return std::nullopt;
}

}  // namespace

VoxelGeometry voxelize(const SpherePack& pack, Dims dims, const VoxelizeOptions& options) {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) throw ConfigError("voxel dims must be positive");
  VoxelGeometry geom;
  geom.dims = dims;
  geom.periodic = options.periodic;
  geom.flags.assign(dims.cells(), static_cast<std::uint8_t>(CellFlag::Fluid));

  const std::vector<Sphere> spheres = effective_spheres(pack, options.periodic, dims);

  // Plate: cells whose center lies at or below the plate plane.
  if (pack.bottom_plate_z > 0.0) {
    const int k_max = static_cast<int>(std::floor(pack.bottom_plate_z - 0.5));
    for (int z = 0; z <= std::min(k_max, dims.nz - 1); ++z) {
      for (int y = 0; y < dims.ny; ++y) {
        for (int x = 0; x < dims.nx; ++x) {
          geom.flags[dims.index(x, y, z)] = static_cast<std::uint8_t>(CellFlag::Solid);
        }
      }
    }
  }

  // Sphere rasterization over each sphere's bounding box.
  for (const Sphere& s : spheres) {
    const int x0 = std::max(0, static_cast<int>(std::floor(s.center[0] - s.radius - 0.5)));
    const int x1 = std::min(dims.nx - 1, static_cast<int>(std::ceil(s.center[0] + s.radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(s.center[1] - s.radius - 0.5)));
    const int y1 = std::min(dims.ny - 1, static_cast<int>(std::ceil(s.center[1] + s.radius)));
    const int z0 = std::max(0, static_cast<int>(std::floor(s.center[2] - s.radius - 0.5)));
    const int z1 = std::min(dims.nz - 1, static_cast<int>(std::ceil(s.center[2] + s.radius)));
    const double r2 = s.radius * s.radius;
    for (int z = z0; z <= z1; ++z) {
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double dx = x + 0.5 - s.center[0];
          const double dy = y + 0.5 - s.center[1];
          const double dz = z + 0.5 - s.center[2];
          if (dx * dx + dy * dy + dz * dz < r2) {
            geom.flags[dims.index(x, y, z)] = static_cast<std::uint8_t>(CellFlag::Solid);
          }
        }
      }
    }
  }

  // Channel wall layers override to WALL; their no-slip plane is the layer's
  // inner face, so plain walls land exactly midway between cell centers.
  std::vector<double> wall_planes;
  if (options.wall_z_lo) {
    for (int y = 0; y < dims.ny; ++y)
      for (int x = 0; x < dims.nx; ++x)
        geom.flags[dims.index(x, y, 0)] = static_cast<std::uint8_t>(CellFlag::Wall);
    wall_planes.push_back(1.0);
    geom.wall_plane_lo = 1.0;
  }
  if (options.wall_z_hi) {
    for (int y = 0; y < dims.ny; ++y)
      for (int x = 0; x < dims.nx; ++x)
        geom.flags[dims.index(x, y, dims.nz - 1)] = static_cast<std::uint8_t>(CellFlag::Wall);
    wall_planes.push_back(static_cast<double>(dims.nz - 1));
    geom.wall_plane_hi = static_cast<double>(dims.nz - 1);
  }

  // Porosity per plane and fluid count.
  geom.porosity.assign(dims.nz, 0.0);
  for (int z = 0; z < dims.nz; ++z) {
    std::int64_t fluid = 0;
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x) {
        if (geom.flag(dims.index(x, y, z)) == CellFlag::Fluid) ++fluid;
      }
    }
    geom.porosity[z] = static_cast<double>(fluid) / (static_cast<double>(dims.nx) * dims.ny);
    geom.fluid_cells += fluid;
  }
  if (geom.fluid_cells == 0) throw GeometryError("geometry has no fluid cells");

  // Boundary links with exact q from the nearest surface crossing.
  const LatticeModel& m = LatticeModel::d3q19();
  const auto wrap_coord = [&](int v, int n, bool periodic) -> int {
    if (v >= 0 && v < n) return v;
    if (!periodic) return -1;
    return (v % n + n) % n;
  };
  for (int z = 0; z < dims.nz; ++z) {
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x) {
        const std::int64_t cell = dims.index(x, y, z);
        if (geom.flag(cell) != CellFlag::Fluid) continue;
        for (int k = 1; k < kQ; ++k) {
          const int xn = wrap_coord(x + m.e[k][0], dims.nx, options.periodic[0]);
          const int yn = wrap_coord(y + m.e[k][1], dims.ny, options.periodic[1]);
          const int zn = wrap_coord(z + m.e[k][2], dims.nz, options.periodic[2]);
          if (xn < 0 || yn < 0 || zn < 0) {
            std::ostringstream os;
            os << "fluid cell (" << x << "," << y << "," << z
               << ") touches a non-periodic open face; add a wall layer or periodic axis";
            throw ConfigError(os.str());
          }
          const std::int64_t ncell = dims.index(xn, yn, zn);
          if (geom.flag(ncell) == CellFlag::Fluid) continue;

          BoundaryLink link;
          link.fluid_cell = cell;
          link.direction = k;
          const int kb = m.opposite[k];
          const int xp = wrap_coord(x + m.e[kb][0], dims.nx, options.periodic[0]);
          const int yp = wrap_coord(y + m.e[kb][1], dims.ny, options.periodic[1]);
          const int zp = wrap_coord(z + m.e[kb][2], dims.nz, options.periodic[2]);
          if (xp >= 0 && yp >= 0 && zp >= 0) {
            const std::int64_t pcell = dims.index(xp, yp, zp);
            if (geom.flag(pcell) == CellFlag::Fluid) link.second_fluid = pcell;
          }

          const Vec3 pc{x + 0.5, y + 0.5, z + 0.5};
          double q = std::numeric_limits<double>::infinity();
          for (const Sphere& s : spheres) {
            // Cheap reject: link length <= sqrt(2).
            if (pc[0] < s.center[0] - s.radius - 2.0 || pc[0] > s.center[0] + s.radius + 2.0 ||
                pc[1] < s.center[1] - s.radius - 2.0 || pc[1] > s.center[1] + s.radius + 2.0 ||
                pc[2] < s.center[2] - s.radius - 2.0 || pc[2] > s.center[2] + s.radius + 2.0) {
              continue;
            }
            if (const auto t = ray_sphere(pc, m.e[k], s)) q = std::min(q, *t);
          }
          if (pack.bottom_plate_z > 0.0) {
            if (const auto t = ray_plane_z(pc, m.e[k], pack.bottom_plate_z)) q = std::min(q, *t);
          }
          for (double plane : wall_planes) {
            if (const auto t = ray_plane_z(pc, m.e[k], plane)) q = std::min(q, *t);
          }
          if (!std::isfinite(q)) {
            q = 0.5;  // staircase corner with no exact surface crossing
            ++geom.q_fallback_count;
          }
          link.q = static_cast<float>(std::clamp(q, options.q_clamp_min, 1.0));
          geom.links.push_back(link);
        }
      }
    }
  }
  return geom;
}

VoxelGeometry make_box_geometry(Dims dims, const VoxelizeOptions& options) {
  SpherePack empty;
  empty.box = {static_cast<double>(dims.nx), static_cast<double>(dims.ny),
               static_cast<double>(dims.nz)};
  empty.bottom_plate_z = 0.0;
  return voxelize(empty, dims, options);
}

ProfileData porosity_profile(const VoxelGeometry& geom) {
  ProfileData prof;
  const Dims& d = geom.dims;
  prof.z.resize(d.nz);
  prof.epsilon.resize(d.nz);
  prof.u_superficial.assign(d.nz, 0.0);
  prof.u_intrinsic.assign(d.nz, 0.0);
  prof.u_normalized.assign(d.nz, 0.0);
  for (int z = 0; z < d.nz; ++z) {
    std::int64_t fluid = 0;
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        if (geom.flag(d.index(x, y, z)) == CellFlag::Fluid) ++fluid;
      }
    }
    prof.z[z] = z + 0.5;
    prof.epsilon[z] = static_cast<double>(fluid) / (static_cast<double>(d.nx) * d.ny);
  }
  return prof;
}

}  // namespace porolb
