#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "porolb/bench.hpp"
#include "porolb/boundary.hpp"
#include "porolb/config.hpp"
#include "porolb/dns.hpp"
#include "porolb/errors.hpp"
#include "porolb/geometry.hpp"
#include "porolb/glbm.hpp"
#include "porolb/interface_models.hpp"
#include "porolb/io.hpp"
#include "porolb/lattice.hpp"
#include "porolb/profile.hpp"
#include "porolb/scenarios.hpp"
#include "porolb/simulation.hpp"

namespace py = pybind11;
using namespace porolb;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Populations to_populations(const py::array_t<double>& arr) {
  if (arr.size() != kQ) throw std::invalid_argument("expected 19 population values");
  Populations f;
  std::copy(arr.data(), arr.data() + kQ, f.begin());
  return f;
}

py::array_t<double> from_populations(const Populations& f) {
  py::array_t<double> out(kQ);
  std::copy(f.begin(), f.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lattice Boltzmann solver for coupled free and porous-media flow";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<NumericalInstability>(m, "NumericalInstability");
  py::register_exception<GeometryError>(m, "GeometryError");

  // --- lattice model and cell-level operations ---
  py::class_<LatticeModel>(m, "LatticeModel")
      .def_property_readonly("velocities",
                             [](const LatticeModel& lm) {
                               py::array_t<int> out({kQ, 3});
                               auto r = out.mutable_unchecked<2>();
                               for (int k = 0; k < kQ; ++k)
                                 for (int i = 0; i < 3; ++i) r(k, i) = lm.e[k][i];
                               return out;
                             })
      .def_property_readonly("weights",
                             [](const LatticeModel& lm) {
                               py::array_t<double> out(kQ);
                               std::copy(lm.w.begin(), lm.w.end(), out.mutable_data());
                               return out;
                             })
      .def_property_readonly("opposite",
                             [](const LatticeModel& lm) {
                               py::array_t<int> out(kQ);
                               std::copy(lm.opposite.begin(), lm.opposite.end(),
                                         out.mutable_data());
                               return out;
                             })
      .def_property_readonly("cs2", [](const LatticeModel& lm) { return lm.cs2; });
  m.def("d3q19", []() -> const LatticeModel& { return LatticeModel::d3q19(); },
        py::return_value_policy::reference);

  py::class_<FluidParams>(m, "FluidParams")
      .def_readonly("nu", &FluidParams::nu)
      .def_readonly("omega_plus", &FluidParams::omega_plus)
      .def_readonly("omega_minus", &FluidParams::omega_minus)
      .def_readonly("lambda_magic", &FluidParams::lambda_magic)
      .def_readwrite("body_force", &FluidParams::body_force);
  m.def("relaxation_from_magic", &relaxation_from_magic, py::arg("nu"), py::arg("lambda_magic"));

  m.def(
      "equilibrium",
      [](double drho, const Vec3& u) {
        return from_populations(equilibrium(drho, u, LatticeModel::d3q19()));
      },
      py::arg("delta_rho"), py::arg("u"));
  m.def(
      "glbm_equilibrium",
      [](double drho, const Vec3& u, double eps) {
        return from_populations(glbm_equilibrium(drho, u, eps, LatticeModel::d3q19()));
      },
      py::arg("delta_rho"), py::arg("u"), py::arg("eps"));
  m.def(
      "moments",
      [](const py::array_t<double>& f) {
        double drho;
        Vec3 u;
        moments(to_populations(f), LatticeModel::d3q19(), drho, u);
        return py::make_tuple(drho, u);
      },
      py::arg("f"));
  m.def(
      "trt_collide",
      [](const py::array_t<double>& f, const FluidParams& p) {
        return from_populations(trt_collide(to_populations(f), p, LatticeModel::d3q19()));
      },
      py::arg("f"), py::arg("params"));
  m.def(
      "glbm_force_and_velocity",
      [](const Vec3& momentum, double eps, double permeability, double c_F, const Vec3& g,
         double nu) {
        Vec3 u, force;
        glbm_force_and_velocity(momentum, eps, permeability, c_F, g, nu, u, force);
        return py::make_tuple(u, force);
      },
      py::arg("momentum"), py::arg("eps"), py::arg("permeability"), py::arg("c_F"),
      py::arg("g"), py::arg("nu"));

  // --- geometry ---
  py::class_<Sphere>(m, "Sphere")
      .def(py::init([](const Vec3& c, double r) { return Sphere{c, r}; }), py::arg("center"),
           py::arg("radius"))
      .def_readwrite("center", &Sphere::center)
      .def_readwrite("radius", &Sphere::radius);

  py::class_<SpherePack>(m, "SpherePack")
      .def(py::init<>())
      .def_readwrite("spheres", &SpherePack::spheres)
      .def_readwrite("bottom_plate_z", &SpherePack::bottom_plate_z)
      .def_readonly("achieved_height", &SpherePack::achieved_height)
      .def_property(
          "box", [](const SpherePack& p) { return py::make_tuple(p.box.lx, p.box.ly, p.box.lz); },
          [](SpherePack& p, py::tuple t) {
            p.box = {t[0].cast<double>(), t[1].cast<double>(), t[2].cast<double>()};
          })
      .def("__len__", [](const SpherePack& p) { return p.spheres.size(); });

  m.def(
      "generate_packing",
      [](py::tuple box, double r_mean, double r_spread, double target_fill_height,
         double bottom_plate_z, std::uint64_t seed) {
        PackingParams pp;
        pp.box = {box[0].cast<double>(), box[1].cast<double>(), box[2].cast<double>()};
        pp.r_mean = r_mean;
        pp.r_spread = r_spread;
        pp.target_fill_height = target_fill_height;
        pp.bottom_plate_z = bottom_plate_z;
        pp.seed = seed;
        return generate_packing(pp);
      },
      py::arg("box"), py::arg("r_mean"), py::arg("r_spread"), py::arg("target_fill_height"),
      py::arg("bottom_plate_z") = 0.0, py::arg("seed") = 1);

  py::class_<VoxelGeometry>(m, "VoxelGeometry")
      .def_property_readonly("dims",
                             [](const VoxelGeometry& g) {
                               return py::make_tuple(g.dims.nx, g.dims.ny, g.dims.nz);
                             })
      .def_property_readonly("flags",
                             [](const VoxelGeometry& g) {
                               py::array_t<std::uint8_t> out(
                                   {g.dims.nz, g.dims.ny, g.dims.nx});
                               std::copy(g.flags.begin(), g.flags.end(), out.mutable_data());
                               return out;
                             })
      .def_property_readonly("porosity",
                             [](const VoxelGeometry& g) { return to_array(g.porosity); })
      .def_readonly("fluid_cells", &VoxelGeometry::fluid_cells)
      .def_property_readonly("link_count",
                             [](const VoxelGeometry& g) { return g.links.size(); });

  m.def(
      "voxelize",
      [](const SpherePack& pack, py::tuple dims, py::tuple periodic, bool wall_z_lo,
         bool wall_z_hi) {
        VoxelizeOptions opt;
        opt.periodic = {periodic[0].cast<bool>(), periodic[1].cast<bool>(),
                        periodic[2].cast<bool>()};
        opt.wall_z_lo = wall_z_lo;
        opt.wall_z_hi = wall_z_hi;
        return voxelize(pack,
                        {dims[0].cast<int>(), dims[1].cast<int>(), dims[2].cast<int>()}, opt);
      },
      py::arg("pack"), py::arg("dims"), py::arg("periodic") = py::make_tuple(true, true, false),
      py::arg("wall_z_lo") = false, py::arg("wall_z_hi") = false);

  // --- profiles ---
  py::class_<ProfileData>(m, "ProfileData")
      .def(py::init<>())
      .def_property_readonly("z", [](const ProfileData& p) { return to_array(p.z); })
      .def_property_readonly("u_superficial",
                             [](const ProfileData& p) { return to_array(p.u_superficial); })
      .def_property_readonly("u_intrinsic",
                             [](const ProfileData& p) { return to_array(p.u_intrinsic); })
      .def_property_readonly("epsilon", [](const ProfileData& p) { return to_array(p.epsilon); })
      .def_property_readonly("u_normalized",
                             [](const ProfileData& p) { return to_array(p.u_normalized); })
      .def_readonly("u_max", &ProfileData::u_max)
      .def_readonly("height", &ProfileData::height)
      .def_readonly("z0", &ProfileData::z0)
      .def_readonly("nu", &ProfileData::nu)
      .def_readonly("body_force", &ProfileData::body_force)
      .def("__len__", [](const ProfileData& p) { return p.z.size(); });
  m.def("l2_distance_normalized", &l2_distance_normalized, py::arg("a"), py::arg("b"),
        py::arg("samples") = 256);
  m.def("read_profile_csv", &read_profile_csv, py::arg("path"));
  m.def("write_profile_csv", &write_profile_csv, py::arg("path"), py::arg("profile"));

  // --- simulation driver ---
  py::enum_<WallScheme>(m, "WallScheme")
      .value("SBB", WallScheme::SBB)
      .value("CLI", WallScheme::CLI);

  py::class_<RunStats>(m, "RunStats")
      .def_readonly("steps", &RunStats::steps)
      .def_readonly("mlups", &RunStats::mlups)
      .def_readonly("seconds", &RunStats::seconds)
      .def_readonly("converged", &RunStats::converged)
      .def_readonly("residual", &RunStats::residual)
      .def_readonly("cli_fallbacks", &RunStats::cli_fallbacks);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init([](const VoxelGeometry& geom, double nu, double lambda, const Vec3& g,
                       WallScheme scheme) {
             FluidParams params = relaxation_from_magic(nu, lambda);
             params.body_force = g;
             return new Simulation(geom, params, scheme);
           }),
           py::arg("geometry"), py::arg("nu"), py::arg("lambda_magic"), py::arg("body_force"),
           py::arg("scheme") = WallScheme::CLI)
      .def("step", [](Simulation& s, int n) { for (int i = 0; i < n; ++i) s.step(); },
           py::arg("n") = 1)
      .def("set_lid_velocity", &Simulation::set_lid_velocity)
      .def("planar_profile", &Simulation::planar_profile, py::arg("stream_axis") = 0)
      .def("max_speed", &Simulation::max_speed)
      .def_property_readonly("steps_done", &Simulation::steps_done)
      .def_property_readonly("cli_fallback_count", &Simulation::cli_fallback_count);

  m.def(
      "run_to_steady",
      [](Simulation& sim, double tolerance, int check_interval, long max_steps) {
        SteadyConfig cfg;
        cfg.tolerance = tolerance;
        cfg.check_interval = check_interval;
        cfg.max_steps = max_steps;
        ProfileData profile;
        RunStats stats = run_to_steady_state(sim, cfg, &profile);
        return py::make_tuple(stats, profile);
      },
      py::arg("sim"), py::arg("tolerance") = 1e-8, py::arg("check_interval") = 1000,
      py::arg("max_steps") = 2000000);

  py::class_<PermeabilityEstimate>(m, "PermeabilityEstimate")
      .def_readonly("k", &PermeabilityEstimate::k)
      .def_readonly("u_mean", &PermeabilityEstimate::u_mean)
      .def_readonly("porosity_mean", &PermeabilityEstimate::porosity_mean)
      .def_readonly("plateau_warning", &PermeabilityEstimate::plateau_warning);
  m.def("measure_permeability", &measure_permeability, py::arg("profile"), py::arg("z_lo"),
        py::arg("z_hi"));

  // --- homogenized model ---
  m.def(
      "couette_semi_analytic",
      [](double u0, double H, double eps, double K, double nu, double nu_eff,
         const std::vector<double>& zgrid) {
        return couette_semi_analytic(u0, H, eps, K, nu, nu_eff, zgrid);
      },
      py::arg("u0"), py::arg("H"), py::arg("eps"), py::arg("K"), py::arg("nu"),
      py::arg("nu_eff"), py::arg("zgrid"));

  py::class_<CouetteResult>(m, "CouetteResult")
      .def_readonly("sim", &CouetteResult::sim)
      .def_readonly("analytic", &CouetteResult::analytic)
      .def_readonly("rel_l2", &CouetteResult::rel_l2)
      .def_readonly("stats", &CouetteResult::stats);
  m.def(
      "run_couette_porous",
      [](int height, double eps, double darcy, double J, double re, double nu, double lambda,
         double tolerance, long max_steps) {
        CouetteConfig cfg;
        cfg.height = height;
        cfg.eps = eps;
        cfg.darcy = darcy;
        cfg.J = J;
        cfg.re = re;
        cfg.nu = nu;
        cfg.lambda = lambda;
        cfg.steady.tolerance = tolerance;
        cfg.steady.max_steps = max_steps;
        return run_couette_porous(cfg);
      },
      py::arg("height") = 64, py::arg("eps") = 0.4, py::arg("darcy") = 1.2e-4,
      py::arg("J") = 1.0, py::arg("re") = 0.1, py::arg("nu") = 1.0 / 6.0,
      py::arg("lambda_magic") = 3.0 / 16.0, py::arg("tolerance") = 1e-10,
      py::arg("max_steps") = 2000000);
  m.def("kozeny_carman", &kozeny_carman, py::arg("eps"), py::arg("grain_diameter"),
        py::arg("free_threshold") = 0.999,
        py::arg("calibrate") = std::optional<std::pair<double, double>>{});

  // --- interface models ---
  py::enum_<InterfaceCondition>(m, "InterfaceCondition")
      .value("BR", InterfaceCondition::BR)
      .value("OTW", InterfaceCondition::OTW)
      .value("BJ", InterfaceCondition::BJ)
      .value("BJS", InterfaceCondition::BJS);

  py::class_<TwoDomainConfig>(m, "TwoDomainConfig")
      .def(py::init<>())
      .def_readwrite("h_f", &TwoDomainConfig::h_f)
      .def_readwrite("h_p", &TwoDomainConfig::h_p)
      .def_readwrite("mu", &TwoDomainConfig::mu)
      .def_readwrite("J", &TwoDomainConfig::J)
      .def_readwrite("k", &TwoDomainConfig::k)
      .def_readwrite("g", &TwoDomainConfig::g)
      .def_readwrite("condition", &TwoDomainConfig::condition)
      .def_readwrite("alpha", &TwoDomainConfig::alpha)
      .def_readwrite("beta", &TwoDomainConfig::beta);

  py::class_<TwoDomainSolution>(m, "TwoDomainSolution")
      .def("eval", &TwoDomainSolution::eval)
      .def("deriv", &TwoDomainSolution::deriv)
      .def_property_readonly("u_slip", &TwoDomainSolution::slip_velocity)
      .def_readonly("u_m", &TwoDomainSolution::u_m);
  m.def("solve_two_domain", &solve_two_domain, py::arg("config"));
  m.def("sample_two_domain", &sample_two_domain, py::arg("config"), py::arg("zgrid"));

  py::class_<InterfaceFit>(m, "InterfaceFit")
      .def_readonly("interface_z", &InterfaceFit::interface_z)
      .def_readonly("u_slip", &InterfaceFit::u_slip)
      .def_readonly("u_seepage", &InterfaceFit::u_seepage)
      .def_readonly("permeability", &InterfaceFit::permeability)
      .def_readonly("dudz_free", &InterfaceFit::dudz_free)
      .def_readonly("dudz_porous", &InterfaceFit::dudz_porous)
      .def_readonly("alpha", &InterfaceFit::alpha)
      .def_readonly("beta", &InterfaceFit::beta)
      .def_readonly("mu_eff", &InterfaceFit::mu_eff)
      .def_readonly("rmse_free", &InterfaceFit::rmse_free)
      .def_readonly("rmse_porous", &InterfaceFit::rmse_porous)
      .def_readonly("warnings", &InterfaceFit::warnings);
  m.def(
      "extract_interface_params",
      [](const ProfileData& profile, double interface_z, double mu_eff_override) {
        InterfaceFitOptions opt;
        opt.mu_eff_override = mu_eff_override;
        return extract_interface_params(profile, interface_z, opt);
      },
      py::arg("profile"), py::arg("interface_z"), py::arg("mu_eff_override") = 0.0);
  m.def("interface_position_candidates",
        [](const ProfileData& p) {
          const InterfaceCandidates c = interface_position_candidates(p);
          return py::make_tuple(c.z_exact, c.z_apparent);
        },
        py::arg("profile"));

  // --- scenario front end ---
  m.def(
      "run_scenario_file",
      [](const std::string& path) {
        const Scenario s = load_scenario(path);
        const ScenarioOutcome o = run_scenario(s);
        return py::make_tuple(o.converged, o.summary);
      },
      py::arg("config_path"));
}
