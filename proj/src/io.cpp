#include "porolb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "porolb/errors.hpp"

namespace porolb {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw ConfigError("cannot write file: " + path);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_profile_csv(const std::string& path, const ProfileData& profile) {
  std::ofstream out = open_out(path);
  out << "# nu = " << format_double(profile.nu) << "\n";
  out << "# g = " << format_double(profile.body_force[0]) << " "
      << format_double(profile.body_force[1]) << " "
      << format_double(profile.body_force[2]) << "\n";
  out << "# stream_axis = " << profile.stream_axis << "\n";
  out << "# height = " << format_double(profile.height) << "\n";
  out << "# z0 = " << format_double(profile.z0) << "\n";
  out << "# u_max = " << format_double(profile.u_max) << "\n";
  out << "z,U_superficial,U_intrinsic,epsilon,U_normalized\n";
  for (std::size_t i = 0; i < profile.z.size(); ++i) {
    out << format_double(profile.z[i]) << "," << format_double(profile.u_superficial[i])
        << "," << format_double(profile.u_intrinsic[i]) << ","
        << format_double(profile.epsilon[i]) << ","
        << format_double(i < profile.u_normalized.size() ? profile.u_normalized[i] : 0.0)
        << "\n";
  }
}

ProfileData read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile CSV: " + path);
  ProfileData p;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string key, eq;
      is >> key >> eq;
      if (eq != "=") continue;
      if (key == "nu") is >> p.nu;
      if (key == "g") is >> p.body_force[0] >> p.body_force[1] >> p.body_force[2];
      if (key == "stream_axis") is >> p.stream_axis;
      if (key == "height") is >> p.height;
      if (key == "z0") is >> p.z0;
      if (key == "u_max") is >> p.u_max;
      continue;
    }
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    const std::vector<std::string> cols = split_csv(line);
    if (cols.size() < 4) throw ConfigError(path + ": malformed CSV row: " + line);
    p.z.push_back(std::stod(cols[0]));
    p.u_superficial.push_back(std::stod(cols[1]));
    p.u_intrinsic.push_back(std::stod(cols[2]));
    p.epsilon.push_back(std::stod(cols[3]));
    if (cols.size() >= 5) p.u_normalized.push_back(std::stod(cols[4]));
  }
  if (p.z.empty()) throw ConfigError(path + ": profile CSV has no data rows");
  return p;
}

void write_comparison_csv(const std::string& path, const ProfileData& a,
                          const std::string& name_a, const ProfileData& b,
                          const std::string& name_b) {
  std::ofstream out = open_out(path);
  out << "z," << name_a << "," << name_b << "\n";
  for (std::size_t i = 0; i < a.z.size(); ++i) {
    const double vb = interp_linear(b.z, b.u_superficial, a.z[i]);
    out << format_double(a.z[i]) << "," << format_double(a.u_superficial[i]) << ","
        << format_double(vb) << "\n";
  }
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out = open_out(path);
  for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

void write_vtk(const std::string& path, const Simulation& sim) {
  std::ofstream out = open_out(path);
  const Dims& d = sim.dims();
  out << "# vtk DataFile Version 3.0\n";
  out << "porolb field\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << d.nx << " " << d.ny << " " << d.nz << "\n";
  out << "ORIGIN 0.5 0.5 0.5\n";
  out << "SPACING 1 1 1\n";
  out << "POINT_DATA " << d.cells() << "\n";

  out << "SCALARS flags unsigned_char 1\n";
  out << "LOOKUP_TABLE default\n";
  for (std::int64_t c = 0; c < d.cells(); ++c) {
    out << static_cast<int>(sim.field().flags()[c]) << "\n";
  }
  out << "SCALARS delta_rho double 1\n";
  out << "LOOKUP_TABLE default\n";
  std::vector<Vec3> velocity(d.cells(), Vec3{0.0, 0.0, 0.0});
  for (std::int64_t c = 0; c < d.cells(); ++c) {
    double drho = 0.0;
    Vec3 u{0.0, 0.0, 0.0};
    if (sim.field().is_fluid(c)) sim.macroscopic(c, drho, u);
    velocity[c] = u;
    out << format_double(drho) << "\n";
  }
  out << "VECTORS velocity double\n";
  for (std::int64_t c = 0; c < d.cells(); ++c) {
    out << format_double(velocity[c][0]) << " " << format_double(velocity[c][1]) << " "
        << format_double(velocity[c][2]) << "\n";
  }
}

void write_sphere_csv(const std::string& path, const SpherePack& pack) {
  std::ofstream out = open_out(path);
  out << "# box = " << format_double(pack.box.lx) << " " << format_double(pack.box.ly)
      << " " << format_double(pack.box.lz) << " plate_z = "
      << format_double(pack.bottom_plate_z) << " seed = " << pack.seed << "\n";
  out << "x,y,z,r\n";
  for (const Sphere& s : pack.spheres) {
    out << format_double(s.center[0]) << "," << format_double(s.center[1]) << ","
        << format_double(s.center[2]) << "," << format_double(s.radius) << "\n";
  }
}

SpherePack read_sphere_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sphere CSV: " + path);
  SpherePack pack;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string tok;
      while (is >> tok) {
        if (tok == "box") {
          is >> tok >> pack.box.lx >> pack.box.ly >> pack.box.lz;
        } else if (tok == "plate_z") {
          is >> tok >> pack.bottom_plate_z;
        } else if (tok == "seed") {
          is >> tok >> pack.seed;
        }
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const std::vector<std::string> cols = split_csv(line);
    if (cols.size() != 4) throw ConfigError(path + ": sphere CSV rows need x,y,z,r");
    Sphere s;
    s.center = {std::stod(cols[0]), std::stod(cols[1]), std::stod(cols[2])};
    s.radius = std::stod(cols[3]);
    pack.spheres.push_back(s);
    pack.achieved_height = std::max(pack.achieved_height, s.center[2] + s.radius);
  }
  if (pack.box.lx <= 0.0) throw ConfigError(path + ": sphere CSV is missing the box header");
  return pack;
}

void write_voxel_file(const std::string& path, const VoxelGeometry& geom) {
  std::ofstream out = open_out(path);
  out << "porolb-voxel 1 " << geom.dims.nx << " " << geom.dims.ny << " " << geom.dims.nz
      << " " << (geom.periodic[0] ? 1 : 0) << " " << (geom.periodic[1] ? 1 : 0) << " "
      << (geom.periodic[2] ? 1 : 0) << "\n";
  out.write(reinterpret_cast<const char*>(geom.flags.data()),
            static_cast<std::streamsize>(geom.flags.size()));
}

VoxelGeometry read_voxel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open voxel file: " + path);
  std::string magic;
  int version = 0;
  Dims dims;
  int px = 0, py = 0, pz = 0;
  in >> magic >> version >> dims.nx >> dims.ny >> dims.nz >> px >> py >> pz;
  if (magic != "porolb-voxel" || version != 1) {
    throw ConfigError(path + ": not a porolb voxel file");
  }
  in.get();  // newline
  std::vector<std::uint8_t> flags(dims.cells());
  in.read(reinterpret_cast<char*>(flags.data()), static_cast<std::streamsize>(flags.size()));
  if (in.gcount() != static_cast<std::streamsize>(flags.size())) {
    throw ConfigError(path + ": truncated voxel data");
  }

  // Rebuild links from flags; the file carries no sub-cell surface data,
  // so every link gets the midway distance.
  VoxelGeometry geom;
  geom.dims = dims;
  geom.periodic = {px != 0, py != 0, pz != 0};
  geom.flags = std::move(flags);
  const LatticeModel& m = LatticeModel::d3q19();
  geom.porosity.assign(dims.nz, 0.0);
  const auto wrap_coord = [&](int v, int n, bool periodic) -> int {
    if (v >= 0 && v < n) return v;
    if (!periodic) return -1;
    return (v % n + n) % n;
  };
  for (int z = 0; z < dims.nz; ++z) {
    std::int64_t fluid = 0;
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x) {
        const std::int64_t cell = dims.index(x, y, z);
        if (geom.flag(cell) != CellFlag::Fluid) continue;
        ++fluid;
        for (int k = 1; k < kQ; ++k) {
          const int xn = wrap_coord(x + m.e[k][0], dims.nx, geom.periodic[0]);
          const int yn = wrap_coord(y + m.e[k][1], dims.ny, geom.periodic[1]);
          const int zn = wrap_coord(z + m.e[k][2], dims.nz, geom.periodic[2]);
          if (xn < 0 || yn < 0 || zn < 0) {
            throw ConfigError(path + ": fluid cell touches a non-periodic open face");
          }
          const std::int64_t ncell = dims.index(xn, yn, zn);
          if (geom.flag(ncell) == CellFlag::Fluid) continue;
          BoundaryLink link;
          link.fluid_cell = cell;
          link.direction = k;
          link.q = 0.5f;
          const int kb = m.opposite[k];
          const int xp = wrap_coord(x + m.e[kb][0], dims.nx, geom.periodic[0]);
          const int yp = wrap_coord(y + m.e[kb][1], dims.ny, geom.periodic[1]);
          const int zp = wrap_coord(z + m.e[kb][2], dims.nz, geom.periodic[2]);
          if (xp >= 0 && yp >= 0 && zp >= 0 &&
              geom.flag(dims.index(xp, yp, zp)) == CellFlag::Fluid) {
            link.second_fluid = dims.index(xp, yp, zp);
          }
          geom.links.push_back(link);
        }
      }
    }
    geom.porosity[z] = static_cast<double>(fluid) / (static_cast<double>(dims.nx) * dims.ny);
    geom.fluid_cells += fluid;
  }
  if (geom.fluid_cells == 0) throw GeometryError(path + ": geometry has no fluid cells");
  return geom;
}

}  // namespace porolb
