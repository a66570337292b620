#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "porolb/boundary.hpp"
#include "porolb/glbm.hpp"

namespace porolb {

/// Parsed `key = value` config file with flat [section] headers, `#`
/// comments, strict unknown-key rejection downstream.
struct ConfigFile {
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };
  std::string source;
  std::map<std::string, std::map<std::string, Entry>> sections;

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Throws ConfigError listing any key never consumed by a getter.
  void reject_unknown() const;
};

ConfigFile parse_config_text(const std::string& text, const std::string& source_name);
ConfigFile parse_config_file(const std::string& path);

enum class ScenarioKind {
  Poiseuille,
  CouettePorous,
  SpherePackDns,
  GridStudy,
  ReSweep,
  GlbmRev,
  TwoDomainAnalytic,
  ExtractParams,
  Bench,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

struct PoiseuilleScenario {
  int height = 32;
  int cross_section = 4;
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  double g = 1e-8;
  WallScheme scheme = WallScheme::SBB;
};

struct CouetteScenario {
  int height = 64;
  double eps = 0.4;
  double darcy = 1.2e-4;
  std::string j = "1";  // "1/eps" or a number
  double re = 0.1;
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
};

struct DnsScenario {
  int nx = 64, ny = 64, nz = 96;
  double r_mean = 8.0;
  double r_spread = 0.5;
  double fill_height = 40.0;
  bool offset_plate = true;
  std::string geometry_file;  // optional: sphere CSV or voxel file
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  WallScheme scheme = WallScheme::CLI;
  std::string drive = "pressure";  // or "force"
  double pressure_drop = 1e-6;
  double g = 0.0;
};

struct GridStudyScenario {
  int base_nx = 24, base_ny = 24, base_nz = 26;
  double base_r_mean = 4.0;
  double r_spread = 0.5;
  double base_fill = 12.0;
  std::vector<int> scales{1, 2, 4};
  double base_g = 2e-6;
  double nu = 1.0 / 3.0;
  double lambda = 3.0 / 16.0;
  WallScheme scheme = WallScheme::CLI;
};

struct ReSweepScenario {
  int nx = 48, ny = 48, nz = 48;
  double r_mean = 8.0;
  double r_spread = 0.0;
  double fill_height = 24.0;
  std::vector<double> re_list{0.2, 2.0, 20.0};
  double nu = 1.0 / 24.0;
  double lambda = 3.0 / 16.0;
  WallScheme scheme = WallScheme::CLI;
  double g_seed = 1e-7;
};

struct GlbmRevScenario {
  std::string porosity_csv;  // DNS profile with epsilon column
  double grain_diameter = 16.0;
  double g = 1e-8;
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  std::string variant = "rescaled";  // plain | darcy
  bool calibrate = true;             // pin the plateau K to the measured one
};

struct TwoDomainScenario {
  std::string condition = "BR";
  double h_f = 50.0, h_p = 50.0;
  double mu = 1.0 / 6.0;
  double J = 1.0;
  double k = 1.0;
  double g = 1e-6;
  double alpha = 1.0;
  double beta = 0.0;
  int points = 201;
};

struct ExtractScenario {
  std::string profile_csv;
  double interface_z = 0.0;  // 0: use the detected exact position
  double mu_eff = 0.0;       // 0: mu / mean porosity
};

struct BenchScenario {
  int n = 128;
  double sphere_diameter = 76.0;
  int warmup = 20;
  int steps = 200;
  double nu = 1.0 / 6.0;
  double lambda = 3.0 / 16.0;
  double g = 1e-8;
};

struct SteadySettings {
  double tolerance = 1e-8;
  long check_interval = 1000;
  long max_steps = 2000000;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Poiseuille;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware default
  bool vtk = false;
  SteadySettings steady;
  std::variant<PoiseuilleScenario, CouetteScenario, DnsScenario, GridStudyScenario,
               ReSweepScenario, GlbmRevScenario, TwoDomainScenario, ExtractScenario,
               BenchScenario>
      params;
};

/// Strict parse: unknown keys, missing required keys and out-of-range values
/// are ConfigErrors carrying file/line context.
Scenario parse_scenario(const ConfigFile& file);
Scenario load_scenario(const std::string& path);

/// Canonical config text; parse(echo(s)) == s.
std::string echo_scenario(const Scenario& scenario);

bool scenario_equal(const Scenario& a, const Scenario& b);

}  // namespace porolb
