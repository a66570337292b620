#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "porolb/config.hpp"
#include "porolb/errors.hpp"
#include "porolb/io.hpp"

using namespace porolb;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("minimal poiseuille config resolves documented defaults") {
  const Scenario s = parse_scenario(parse_config_text("[scenario]\nkind = poiseuille\n", "mem"));
  CHECK(s.kind == ScenarioKind::Poiseuille);
  const auto& p = std::get<PoiseuilleScenario>(s.params);
  CHECK(p.nu == doctest::Approx(1.0 / 6.0));
  CHECK(p.lambda == doctest::Approx(3.0 / 16.0));
  CHECK(s.steady.tolerance == doctest::Approx(1e-8));
  CHECK(p.height == 32);
}

TEST_CASE("negative viscosity is rejected naming the key") {
  const std::string text = "[scenario]\nkind = poiseuille\n[poiseuille]\nnu = -0.1\n";
  try {
    parse_scenario(parse_config_text(text, "mem"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("nu") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected with line context") {
  const std::string text = "[scenario]\nkind = poiseuille\n[poiseuille]\nbogus_key = 3\n";
  try {
    parse_scenario(parse_config_text(text, "mem"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus_key") != std::string::npos);
    CHECK(msg.find("mem:4") != std::string::npos);
  }
}

TEST_CASE("malformed lines carry file/line context") {
  try {
    parse_config_text("[scenario]\nkind poiseuille\n", "cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
  }
}

TEST_CASE("parse -> echo -> parse round trip for every kind") {
  const char* configs[] = {
      "[scenario]\nkind = poiseuille\nseed = 9\n[poiseuille]\nheight = 16\nnu = 0.2\n",
      "[scenario]\nkind = couette_porous\n[couette_porous]\nj = 1/eps\neps = 0.37\n",
      "[scenario]\nkind = sphere_pack_dns\n[sphere_pack_dns]\nnx = 32\nny = 32\nnz = 48\n",
      "[scenario]\nkind = grid_study\n[grid_study]\nscales = 1, 2\n",
      "[scenario]\nkind = re_sweep\n[re_sweep]\nre_list = 0.2, 2\n",
      "[scenario]\nkind = glbm_rev\n[glbm_rev]\nporosity_csv = prof.csv\nvariant = plain\n",
      "[scenario]\nkind = two_domain_analytic\n[two_domain_analytic]\ncondition = BJS\nalpha "
      "= 0.3\n",
      "[scenario]\nkind = extract_params\n[extract_params]\nprofile_csv = p.csv\n",
      "[scenario]\nkind = bench\n[bench]\nn = 64\nsteps = 50\n",
  };
  for (const char* text : configs) {
    const Scenario a = parse_scenario(parse_config_text(text, "mem"));
    const std::string echoed = echo_scenario(a);
    const Scenario b = parse_scenario(parse_config_text(echoed, "echo"));
    CHECK(scenario_equal(a, b));
  }
}

TEST_CASE("profile CSV round trip is exact") {
  ProfileData p;
  p.nu = 1.0 / 6.0;
  p.body_force = {1.2345678901234567e-8, 0.0, 0.0};
  p.height = 32.0;
  p.z0 = 1.0;
  for (int i = 0; i < 10; ++i) {
    p.z.push_back(1.5 + i);
    p.u_superficial.push_back(1e-5 * std::sin(i + 0.3));
    p.u_intrinsic.push_back(p.u_superficial.back() / 0.7);
    p.epsilon.push_back(0.7);
  }
  p.normalize();
  const auto path = temp_file("porolb_profile_test.csv");
  write_profile_csv(path.string(), p);
  const ProfileData q = read_profile_csv(path.string());
  REQUIRE(q.z.size() == p.z.size());
  for (std::size_t i = 0; i < p.z.size(); ++i) {
    CHECK(q.z[i] == p.z[i]);
    CHECK(q.u_superficial[i] == p.u_superficial[i]);
    CHECK(q.u_intrinsic[i] == p.u_intrinsic[i]);
    CHECK(q.epsilon[i] == p.epsilon[i]);
  }
  CHECK(q.nu == p.nu);
  CHECK(q.body_force[0] == p.body_force[0]);
  CHECK(q.height == p.height);
  std::filesystem::remove(path);
}

TEST_CASE("sphere CSV round trip") {
  SpherePack pack;
  pack.box = {40, 40, 60};
  pack.bottom_plate_z = -7.5;
  pack.seed = 11;
  pack.spheres.push_back({{1.25, 2.5, 3.75}, 4.125});
  pack.spheres.push_back({{10.0, 20.0, 30.0}, 5.5});
  const auto path = temp_file("porolb_pack_test.csv");
  write_sphere_csv(path.string(), pack);
  const SpherePack q = read_sphere_csv(path.string());
  REQUIRE(q.spheres.size() == 2);
  CHECK(q.box.lx == 40.0);
  CHECK(q.bottom_plate_z == -7.5);
  CHECK(q.spheres[0].center[0] == 1.25);
  CHECK(q.spheres[1].radius == 5.5);
  std::filesystem::remove(path);
}

TEST_CASE("voxel file round trip preserves flags and rebuilds links") {
  SpherePack pack;
  pack.box = {12, 12, 12};
  pack.spheres.push_back({{6.0, 6.0, 6.0}, 3.0});
  VoxelizeOptions opt;
  opt.periodic = {true, true, true};
  const VoxelGeometry geom = voxelize(pack, {12, 12, 12}, opt);
  const auto path = temp_file("porolb_vox_test.vox");
  write_voxel_file(path.string(), geom);
  const VoxelGeometry q = read_voxel_file(path.string());
  CHECK(q.dims == geom.dims);
  CHECK(q.flags == geom.flags);
  CHECK(q.links.size() == geom.links.size());
  for (const BoundaryLink& l : q.links) CHECK(l.q == 0.5f);
  CHECK(q.fluid_cells == geom.fluid_cells);
  std::filesystem::remove(path);
}

TEST_CASE("VTK output parses as legacy structured points") {
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  const VoxelGeometry geom = make_box_geometry({3, 3, 5}, opt);
  FluidParams params = relaxation_from_magic(1.0 / 6.0, 3.0 / 16.0);
  Simulation sim(geom, params, WallScheme::SBB);
  sim.step();
  const auto path = temp_file("porolb_field_test.vtk");
  write_vtk(path.string(), sim);

  // Independent minimal reader for the structured-points header.
  std::ifstream in(path.string());
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.find("vtk DataFile") != std::string::npos);
  std::getline(in, line);  // title
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET STRUCTURED_POINTS");
  int nx = 0, ny = 0, nz = 0;
  in >> line >> nx >> ny >> nz;
  CHECK(line == "DIMENSIONS");
  CHECK(nx == 3);
  CHECK(ny == 3);
  CHECK(nz == 5);
  // count values of the first scalar field
  std::string word;
  long points = 0;
  while (in >> word) {
    if (word == "POINT_DATA") {
      in >> points;
      break;
    }
  }
  CHECK(points == 3 * 3 * 5);
  std::filesystem::remove(path);
}

TEST_CASE("report writer emits key = value lines") {
  const auto path = temp_file("porolb_report_test.txt");
  write_report(path.string(), {{"alpha", "0.5"}, {"steps", "100"}});
  std::ifstream in(path.string());
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha = 0.5");
  std::getline(in, line);
  CHECK(line == "steps = 100");
  std::filesystem::remove(path);
}

TEST_CASE("config file errors") {
  CHECK_THROWS_AS(parse_config_file("/nonexistent/porolb.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(parse_config_text("[scenario]\nkind = warp_drive\n", "mem")),
                  ConfigError);
}
