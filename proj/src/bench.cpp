#include "porolb/bench.hpp"

#include <chrono>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "porolb/errors.hpp"
#include "porolb/geometry.hpp"
#include "porolb/simulation.hpp"

namespace porolb {

namespace {

BenchReport time_scheme(const VoxelGeometry& geom, const BenchConfig& cfg,
                        WallScheme scheme) {
  FluidParams params = relaxation_from_magic(cfg.nu, cfg.lambda);
  params.body_force = {cfg.g, 0.0, 0.0};
  Simulation sim(geom, params, scheme);
  for (int i = 0; i < cfg.warmup; ++i) sim.step();

  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < cfg.steps; ++i) sim.step();
  const auto t1 = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();
  if (seconds < 1e-4) {
    throw ConfigError("bench run shorter than clock resolution; raise the step count");
  }

  BenchReport report;
  report.cells = geom.dims.cells();
  report.fluid_fraction =
      static_cast<double>(geom.fluid_cells) / static_cast<double>(geom.dims.cells());
  report.steps = cfg.steps;
  report.seconds = seconds;
  report.mlups = static_cast<double>(report.cells) * cfg.steps / seconds / 1e6;
  report.scheme = scheme;
#ifdef _OPENMP
  report.threads = omp_get_max_threads();
#else
  report.threads = 1;
#endif
  return report;
}

}  // namespace

std::pair<BenchReport, BenchReport> run_bench(const BenchConfig& cfg) {
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
  SpherePack pack;
  pack.box = {static_cast<double>(cfg.n), static_cast<double>(cfg.n),
              static_cast<double>(cfg.n)};
  pack.spheres.push_back(
      {{cfg.n / 2.0, cfg.n / 2.0, cfg.n / 2.0}, cfg.sphere_diameter / 2.0});
  VoxelizeOptions opt;
  opt.periodic = {true, true, true};
  const VoxelGeometry geom = voxelize(pack, {cfg.n, cfg.n, cfg.n}, opt);

  BenchReport sbb = time_scheme(geom, cfg, WallScheme::SBB);
  BenchReport cli = time_scheme(geom, cfg, WallScheme::CLI);
  return {sbb, cli};
}

}  // namespace porolb
