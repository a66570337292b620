#include "porolb/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "porolb/bench.hpp"
#include "porolb/dns.hpp"
#include "porolb/errors.hpp"
#include "porolb/glbm.hpp"
#include "porolb/interface_models.hpp"
#include "porolb/io.hpp"
#include "porolb/scenarios.hpp"

namespace porolb {

namespace {

namespace fs = std::filesystem;

SteadyConfig to_steady(const SteadySettings& s) {
  SteadyConfig cfg;
  cfg.tolerance = s.tolerance;
  cfg.check_interval = static_cast<int>(s.check_interval);
  cfg.max_steps = s.max_steps;
  return cfg;
}

void add_stats(std::vector<std::pair<std::string, std::string>>& report,
               const std::string& prefix, const RunStats& stats) {
  report.emplace_back(prefix + "steps", std::to_string(stats.steps));
  report.emplace_back(prefix + "converged", stats.converged ? "true" : "false");
  report.emplace_back(prefix + "residual", format_double(stats.residual));
  report.emplace_back(prefix + "mlups", format_double(stats.mlups));
  report.emplace_back(prefix + "seconds", format_double(stats.seconds));
  report.emplace_back(prefix + "cli_fallback_links", std::to_string(stats.cli_fallbacks));
}

VoxelGeometry dns_geometry(const DnsScenario& p, std::uint64_t seed, const fs::path& out,
                           SpherePack* pack_out) {
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  opt.scheme = p.scheme;

  if (!p.geometry_file.empty()) {
    if (p.geometry_file.size() > 4 &&
        p.geometry_file.substr(p.geometry_file.size() - 4) == ".csv") {
      SpherePack pack = read_sphere_csv(p.geometry_file);
      if (pack_out) *pack_out = pack;
      return voxelize(pack, {p.nx, p.ny, p.nz}, opt);
    }
    return read_voxel_file(p.geometry_file);
  }

  PackingParams pp;
  pp.box = {static_cast<double>(p.nx), static_cast<double>(p.ny), static_cast<double>(p.nz)};
  pp.r_mean = p.r_mean;
  pp.r_spread = p.r_spread;
  pp.target_fill_height = p.fill_height;
  pp.bottom_plate_z = p.offset_plate ? 1.0 - 2.0 * p.r_mean : 1.0;
  pp.seed = seed;
  SpherePack pack = generate_packing(pp);
  write_sphere_csv((out / "pack.csv").string(), pack);
  if (pack_out) *pack_out = pack;
  return voxelize(pack, {p.nx, p.ny, p.nz}, opt);
}

ScenarioOutcome run_poiseuille(const Scenario& s, const PoiseuilleScenario& p,
                               const fs::path& out) {
  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  RunConfig cfg;
  cfg.geometry = make_box_geometry({p.cross_section, p.cross_section, p.height + 2}, opt);
  cfg.nu = p.nu;
  cfg.lambda = p.lambda;
  cfg.scheme = p.scheme;
  cfg.drive.mode = DriveMode::BodyForce;
  cfg.drive.magnitude = {p.g, 0.0, 0.0};
  cfg.steady = to_steady(s.steady);

  DnsResult run = run_to_steady(cfg);
  write_profile_csv((out / "profile.csv").string(), run.profile);

  // Analytic parabola with walls midway between cell layers.
  const double H = p.height;
  double max_rel = 0.0;
  ProfileData analytic = run.profile;
  for (std::size_t i = 0; i < analytic.z.size(); ++i) {
    const double zz = analytic.z[i] - run.profile.z0;
    const double ua = p.g / (2.0 * p.nu) * zz * (H - zz);
    analytic.u_superficial[i] = ua;
    analytic.u_intrinsic[i] = ua;
    if (ua != 0.0) {
      max_rel = std::max(max_rel, std::abs(run.profile.u_superficial[i] - ua) / std::abs(ua));
    }
  }
  write_comparison_csv((out / "comparison.csv").string(), run.profile, "simulated", analytic,
                       "analytic");

  std::vector<std::pair<std::string, std::string>> report;
  report.emplace_back("u_max", format_double(run.profile.u_max));
  report.emplace_back("u_max_analytic", format_double(p.g * H * H / (8.0 * p.nu)));
  report.emplace_back("max_rel_error_vs_parabola", format_double(max_rel));
  add_stats(report, "", run.stats);
  write_report((out / "report.txt").string(), report);
  if (s.vtk) write_vtk((out / "field.vtk").string(), run.sim);

  std::ostringstream os;
  os << "poiseuille: max rel error vs parabola " << max_rel;
  return {run.stats.converged, os.str()};
}

ScenarioOutcome run_couette(const Scenario& s, const CouetteScenario& p, const fs::path& out) {
  CouetteConfig cfg;
  cfg.height = p.height;
  cfg.eps = p.eps;
  cfg.darcy = p.darcy;
  cfg.J = (p.j == "1/eps") ? -1.0 : std::stod(p.j);
  cfg.re = p.re;
  cfg.nu = p.nu;
  cfg.lambda = p.lambda;
  cfg.steady = to_steady(s.steady);

  CouetteResult run = run_couette_porous(cfg);
  write_profile_csv((out / "profile.csv").string(), run.sim);
  write_profile_csv((out / "analytic.csv").string(), run.analytic);
  write_comparison_csv((out / "comparison.csv").string(), run.sim, "simulated", run.analytic,
                       "analytic");
  std::vector<std::pair<std::string, std::string>> report;
  report.emplace_back("rel_l2_vs_analytic", format_double(run.rel_l2));
  report.emplace_back("j", p.j);
  add_stats(report, "", run.stats);
  write_report((out / "report.txt").string(), report);

  std::ostringstream os;
  os << "couette_porous: rel L2 vs semi-analytic " << run.rel_l2;
  return {run.stats.converged, os.str()};
}

ScenarioOutcome run_dns(const Scenario& s, const DnsScenario& p, const fs::path& out) {
  SpherePack pack;
  RunConfig cfg;
  cfg.geometry = dns_geometry(p, s.seed, out, &pack);
  cfg.nu = p.nu;
  cfg.lambda = p.lambda;
  cfg.scheme = p.scheme;
  cfg.steady = to_steady(s.steady);
  if (p.drive == "pressure") {
    cfg.drive.mode = DriveMode::PressureGradientAsForce;
    cfg.drive.magnitude = {p.pressure_drop, 0.0, 0.0};
    cfg.drive.channel_length = p.nx;
  } else {
    cfg.drive.mode = DriveMode::BodyForce;
    cfg.drive.magnitude = {p.g, 0.0, 0.0};
  }

  DnsResult run = run_to_steady(cfg);
  write_profile_csv((out / "profile.csv").string(), run.profile);
  write_voxel_file((out / "geometry.vox").string(), cfg.geometry);

  std::vector<std::pair<std::string, std::string>> report;
  // Plateau permeability over the mid-bed window.
  const double bed_lo = run.profile.z0;
  try {
    const PermeabilityEstimate perm = measure_permeability(
        run.profile, bed_lo + 0.15 * p.fill_height, bed_lo + 0.6 * p.fill_height);
    report.emplace_back("permeability", format_double(perm.k));
    report.emplace_back("seepage_velocity", format_double(perm.u_mean));
    report.emplace_back("plateau_porosity", format_double(perm.porosity_mean));
    report.emplace_back("plateau_warning", perm.plateau_warning ? "true" : "false");
  } catch (const ConfigError& e) {
    report.emplace_back("permeability_error", e.what());
  }
  report.emplace_back("spheres", std::to_string(pack.spheres.size()));
  report.emplace_back("fluid_cells", std::to_string(cfg.geometry.fluid_cells));
  report.emplace_back("u_max", format_double(run.profile.u_max));
  add_stats(report, "", run.stats);
  write_report((out / "report.txt").string(), report);
  if (s.vtk) write_vtk((out / "field.vtk").string(), run.sim);

  std::ostringstream os;
  os << "sphere_pack_dns: " << pack.spheres.size() << " spheres, u_max "
     << run.profile.u_max;
  return {run.stats.converged, os.str()};
}

ScenarioOutcome run_grid_study(const Scenario& s, const GridStudyScenario& p,
                               const fs::path& out) {
  PackingParams pp;
  pp.box = {static_cast<double>(p.base_nx), static_cast<double>(p.base_ny),
            static_cast<double>(p.base_nz)};
  pp.r_mean = p.base_r_mean;
  pp.r_spread = p.r_spread;
  pp.target_fill_height = p.base_fill;
  pp.bottom_plate_z = 1.0;
  pp.seed = s.seed;
  const SpherePack pack = generate_packing(pp);
  write_sphere_csv((out / "base_pack.csv").string(), pack);

  const GridStudyResult result =
      grid_study(pack, {p.base_nx, p.base_ny, p.base_nz}, p.scales, p.base_g, p.nu,
                 p.lambda, p.scheme, to_steady(s.steady));

  std::vector<std::pair<std::string, std::string>> report;
  bool all_converged = true;
  for (std::size_t i = 0; i < result.profiles.size(); ++i) {
    std::ostringstream name;
    name << "profile_d" << std::lround(result.diameters[i]) << ".csv";
    write_profile_csv((out / name.str()).string(), result.profiles[i]);
    add_stats(report, "s" + std::to_string(result.scales[i]) + "_", result.stats[i]);
    all_converged = all_converged && result.stats[i].converged;
  }
  for (std::size_t i = 0; i < result.successive_l2.size(); ++i) {
    std::ostringstream key;
    key << "l2_s" << result.scales[i] << "_to_s" << result.scales[i + 1];
    report.emplace_back(key.str(), format_double(result.successive_l2[i]));
  }
  write_report((out / "report.txt").string(), report);

  std::ostringstream os;
  os << "grid_study:";
  for (double d : result.successive_l2) os << " " << d;
  return {all_converged, os.str()};
}

ScenarioOutcome run_re_sweep(const Scenario& s, const ReSweepScenario& p,
                             const fs::path& out) {
  PackingParams pp;
  pp.box = {static_cast<double>(p.nx), static_cast<double>(p.ny), static_cast<double>(p.nz)};
  pp.r_mean = p.r_mean;
  pp.r_spread = p.r_spread;
  pp.target_fill_height = p.fill_height;
  pp.bottom_plate_z = 1.0;
  pp.seed = s.seed;
  const SpherePack pack = generate_packing(pp);
  write_sphere_csv((out / "pack.csv").string(), pack);

  VoxelizeOptions opt;
  opt.periodic = {true, true, false};
  opt.wall_z_lo = true;
  opt.wall_z_hi = true;
  const VoxelGeometry geom = voxelize(pack, {p.nx, p.ny, p.nz}, opt);

  const ReSweepResult result = re_sweep(geom, 2.0 * p.r_mean, p.re_list, p.nu, p.lambda,
                                        p.scheme, to_steady(s.steady), p.g_seed);

  std::vector<std::pair<std::string, std::string>> report;
  bool all_converged = true;
  for (std::size_t i = 0; i < result.profiles.size(); ++i) {
    std::ostringstream name;
    name << "profile_re" << result.re_target[i] << ".csv";
    write_profile_csv((out / name.str()).string(), result.profiles[i]);
    std::ostringstream prefix;
    prefix << "re" << result.re_target[i] << "_";
    report.emplace_back(prefix.str() + "re_actual", format_double(result.re_actual[i]));
    report.emplace_back(prefix.str() + "g", format_double(result.g_used[i]));
    report.emplace_back(prefix.str() + "z_of_max", format_double(result.z_of_max[i]));
    report.emplace_back(prefix.str() + "porous_u_normalized",
                        format_double(result.porous_u_normalized[i]));
    add_stats(report, prefix.str(), result.stats[i]);
    all_converged = all_converged && result.stats[i].converged;
  }
  write_report((out / "report.txt").string(), report);

  std::ostringstream os;
  os << "re_sweep: z_of_max";
  for (double z : result.z_of_max) os << " " << z;
  return {all_converged, os.str()};
}

ScenarioOutcome run_glbm_rev(const Scenario& s, const GlbmRevScenario& p,
                             const fs::path& out) {
  const ProfileData source = read_profile_csv(p.porosity_csv);

  GlbmChannelConfig cfg;
  cfg.z = source.z;
  cfg.eps = source.epsilon;
  cfg.g = p.g;
  cfg.nu = p.nu;
  cfg.lambda = p.lambda;
  cfg.steady = to_steady(s.steady);
  if (p.variant == "plain") cfg.variant = GlbmVariant::Plain;
  if (p.variant == "darcy") cfg.variant = GlbmVariant::DarcyOnly;

  std::optional<std::pair<double, double>> calibrate;
  if (p.calibrate && source.body_force[0] != 0.0 && source.nu > 0.0) {
    // Measured plateau permeability from the source profile itself.
    const double z_lo = source.z.front();
    double depth = 0.0;
    for (std::size_t i = 0; i < source.z.size(); ++i) {
      if (source.epsilon[i] < 0.999) depth = source.z[i] - z_lo;
    }
    const PermeabilityEstimate perm =
        measure_permeability(source, z_lo + 0.15 * depth, z_lo + 0.6 * depth);
    double eps_plateau = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < source.z.size(); ++i) {
      if (source.z[i] >= z_lo + 0.15 * depth && source.z[i] <= z_lo + 0.6 * depth) {
        eps_plateau += source.epsilon[i];
        ++n;
      }
    }
    if (n > 0) calibrate = {{eps_plateau / n, perm.k}};
  }
  cfg.permeability = kozeny_carman(source.epsilon, p.grain_diameter, 0.999, calibrate);

  const GlbmChannelResult result = run_glbm_channel(cfg);
  write_profile_csv((out / "profile.csv").string(), result.profile);
  write_comparison_csv((out / "comparison.csv").string(), result.profile, "glbm", source,
                       "reference");
  const double rmse = rms_difference(source, result.profile);

  std::vector<std::pair<std::string, std::string>> report;
  report.emplace_back("variant", p.variant);
  report.emplace_back("rmse_vs_reference", format_double(rmse));
  add_stats(report, "", result.stats);
  write_report((out / "report.txt").string(), report);

  std::ostringstream os;
  os << "glbm_rev(" << p.variant << "): rmse vs reference " << rmse;
  return {result.stats.converged, os.str()};
}

ScenarioOutcome run_two_domain(const Scenario&, const TwoDomainScenario& p,
                               const fs::path& out) {
  TwoDomainConfig cfg;
  cfg.h_f = p.h_f;
  cfg.h_p = p.h_p;
  cfg.mu = p.mu;
  cfg.J = p.J;
  cfg.k = p.k;
  cfg.g = p.g;
  cfg.alpha = p.alpha;
  cfg.beta = p.beta;
  if (p.condition == "BR") cfg.condition = InterfaceCondition::BR;
  if (p.condition == "OTW") cfg.condition = InterfaceCondition::OTW;
  if (p.condition == "BJ") cfg.condition = InterfaceCondition::BJ;
  if (p.condition == "BJS") cfg.condition = InterfaceCondition::BJS;

  std::vector<double> grid(p.points);
  for (int i = 0; i < p.points; ++i) {
    grid[i] = -p.h_p + (p.h_f + p.h_p) * i / (p.points - 1.0);
  }
  const TwoDomainSolution sol = solve_two_domain(cfg);
  const ProfileData prof = sample_two_domain(cfg, grid);
  write_profile_csv((out / "profile.csv").string(), prof);

  std::vector<std::pair<std::string, std::string>> report;
  report.emplace_back("condition", p.condition);
  report.emplace_back("u_slip", format_double(sol.slip_velocity()));
  report.emplace_back("u_seepage", format_double(sol.u_m));
  report.emplace_back("u_max", format_double(prof.u_max));
  write_report((out / "report.txt").string(), report);

  std::ostringstream os;
  os << "two_domain_analytic(" << p.condition << "): u_slip " << sol.slip_velocity();
  return {true, os.str()};
}

ScenarioOutcome run_extract(const Scenario&, const ExtractScenario& p, const fs::path& out) {
  const ProfileData profile = read_profile_csv(p.profile_csv);
  const InterfaceCandidates cand = interface_position_candidates(profile);
  double interface_z = p.interface_z;
  if (interface_z == 0.0) {
    if (!cand.z_exact) throw ConfigError("no interface position found and none given");
    interface_z = *cand.z_exact;
  }
  InterfaceFitOptions opt;
  opt.mu_eff_override = p.mu_eff;
  const InterfaceFit fit = extract_interface_params(profile, interface_z, opt);

  std::vector<std::pair<std::string, std::string>> report;
  report.emplace_back("interface_z", format_double(fit.interface_z));
  if (cand.z_exact) report.emplace_back("z_exact", format_double(*cand.z_exact));
  if (cand.z_apparent) report.emplace_back("z_apparent", format_double(*cand.z_apparent));
  report.emplace_back("u_slip", format_double(fit.u_slip));
  report.emplace_back("u_seepage", format_double(fit.u_seepage));
  report.emplace_back("permeability", format_double(fit.permeability));
  report.emplace_back("dudz_free", format_double(fit.dudz_free));
  report.emplace_back("dudz_porous", format_double(fit.dudz_porous));
  report.emplace_back("alpha", format_double(fit.alpha));
  report.emplace_back("beta", format_double(fit.beta));
  report.emplace_back("mu_eff", format_double(fit.mu_eff));
  report.emplace_back("rmse_free", format_double(fit.rmse_free));
  report.emplace_back("rmse_porous", format_double(fit.rmse_porous));
  for (std::size_t i = 0; i < fit.warnings.size(); ++i) {
    report.emplace_back("warning_" + std::to_string(i), fit.warnings[i]);
  }
  write_report((out / "interface_fit.txt").string(), report);

  std::ostringstream os;
  os << "extract_params: alpha " << fit.alpha << " beta " << fit.beta;
  return {true, os.str()};
}

ScenarioOutcome run_bench_scenario(const Scenario& s, const BenchScenario& p,
                                   const fs::path& out) {
  BenchConfig cfg;
  cfg.n = p.n;
  cfg.sphere_diameter = p.sphere_diameter;
  cfg.warmup = p.warmup;
  cfg.steps = p.steps;
  cfg.nu = p.nu;
  cfg.lambda = p.lambda;
  cfg.g = p.g;
  cfg.threads = s.threads;
  const auto [sbb, cli] = run_bench(cfg);

  // Short single-threaded reference timing.
  BenchConfig single = cfg;
  single.threads = 1;
  single.steps = std::max(10, p.steps / 8);
  single.warmup = std::max(2, p.warmup / 4);
  const auto [sbb1, cli1] = run_bench(single);

  const double slowdown = 1.0 - cli.mlups / sbb.mlups;
  std::vector<std::pair<std::string, std::string>> report;
  report.emplace_back("cells", std::to_string(sbb.cells));
  report.emplace_back("fluid_fraction", format_double(sbb.fluid_fraction));
  report.emplace_back("steps", std::to_string(sbb.steps));
  report.emplace_back("threads", std::to_string(sbb.threads));
  report.emplace_back("mlups_sbb", format_double(sbb.mlups));
  report.emplace_back("mlups_cli", format_double(cli.mlups));
  report.emplace_back("cli_slowdown", format_double(slowdown));
  report.emplace_back("mlups_sbb_single_thread", format_double(sbb1.mlups));
  report.emplace_back("mlups_cli_single_thread", format_double(cli1.mlups));
  report.emplace_back("seconds_sbb", format_double(sbb.seconds));
  report.emplace_back("seconds_cli", format_double(cli.seconds));
  write_report((out / "bench.txt").string(), report);

  std::ostringstream os;
  os << "bench: SBB " << sbb.mlups << " MLUPS, CLI " << cli.mlups << " MLUPS, slowdown "
     << slowdown;
  return {true, os.str()};
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& s) {
#ifdef _OPENMP
  if (s.threads > 0) omp_set_num_threads(s.threads);
#endif
  const fs::path out(s.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory: " + s.out_dir);
  {
    std::ofstream echo(out / "config.echo.cfg", std::ios::binary);
    if (!echo) throw ConfigError("output directory is not writable: " + s.out_dir);
    echo << echo_scenario(s);
  }

  switch (s.kind) {
    case ScenarioKind::Poiseuille:
      return run_poiseuille(s, std::get<PoiseuilleScenario>(s.params), out);
    case ScenarioKind::CouettePorous:
      return run_couette(s, std::get<CouetteScenario>(s.params), out);
    case ScenarioKind::SpherePackDns:
      return run_dns(s, std::get<DnsScenario>(s.params), out);
    case ScenarioKind::GridStudy:
      return run_grid_study(s, std::get<GridStudyScenario>(s.params), out);
    case ScenarioKind::ReSweep:
      return run_re_sweep(s, std::get<ReSweepScenario>(s.params), out);
    case ScenarioKind::GlbmRev:
      return run_glbm_rev(s, std::get<GlbmRevScenario>(s.params), out);
    case ScenarioKind::TwoDomainAnalytic:
      return run_two_domain(s, std::get<TwoDomainScenario>(s.params), out);
    case ScenarioKind::ExtractParams:
      return run_extract(s, std::get<ExtractScenario>(s.params), out);
    case ScenarioKind::Bench:
      return run_bench_scenario(s, std::get<BenchScenario>(s.params), out);
  }
  throw ConfigError("unhandled scenario kind");
}

}  // namespace porolb
