#pragma once

#include <utility>

#include "porolb/boundary.hpp"

namespace porolb {

struct BenchConfig {
  int n = 128;                    // cubic box edge
  double sphere_diameter = 76.0;  // centered sphere
  int warmup = 20;
  int steps = 200;
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  double g = 1e-8;
  int threads = 0;  // 0: hardware default
};

struct BenchReport {
  long long cells = 0;
  double fluid_fraction = 0.0;
  int steps = 0;
  double seconds = 0.0;
  double mlups = 0.0;  // cells * steps / seconds / 1e6
  WallScheme scheme = WallScheme::SBB;
  int threads = 1;
};

/// Times SBB and CLI on the identical sphere-in-box geometry; warmup steps
/// are excluded, timing covers only the step loop. Throws ConfigError when
/// the measured time is below clock resolution.
std::pair<BenchReport, BenchReport> run_bench(const BenchConfig& cfg);

}  // namespace porolb
