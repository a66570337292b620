#include "porolb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "porolb/errors.hpp"

namespace porolb {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  std::ostringstream os;
  os << source << ":" << line << ": " << msg;
  throw ConfigError(os.str());
}

double parse_double(const ConfigFile& f, const std::string& section, const std::string& key) {
  const auto& entry = f.sections.at(section).at(key);
  const std::string v = entry.value;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    fail(f.source, entry.line, "value of '" + key + "' is not a number: '" + v + "'");
  }
  return x;
}

long parse_long(const ConfigFile& f, const std::string& section, const std::string& key) {
  const auto& entry = f.sections.at(section).at(key);
  const std::string v = entry.value;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    fail(f.source, entry.line, "value of '" + key + "' is not an integer: '" + v + "'");
  }
  return x;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  if (s == sections.end()) return false;
  return s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  if (s == sections.end() || !s->second.count(key)) {
    throw ConfigError(source + ": missing required key '" + key + "' in section [" +
                      section + "]");
  }
  const Entry& e = s->second.at(key);
  e.consumed = true;
  return e.value;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  if (!has(section, key)) return fallback;
  return get(section, key);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  get(section, key);  // mark consumed
  return parse_double(*this, section, key);
}

long ConfigFile::get_long(const std::string& section, const std::string& key,
                          long fallback) const {
  if (!has(section, key)) return fallback;
  get(section, key);
  return parse_long(*this, section, key);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  const auto& entry = sections.at(section).at(key);
  fail(source, entry.line, "value of '" + key + "' is not a boolean: '" + v + "'");
}

void ConfigFile::reject_unknown() const {
  for (const auto& [sec, entries] : sections) {
    for (const auto& [key, entry] : entries) {
      if (!entry.consumed) {
        fail(source, entry.line, "unknown key '" + key + "' in section [" + sec + "]");
      }
    }
  }
}

ConfigFile parse_config_text(const std::string& text, const std::string& source_name) {
  ConfigFile file;
  file.source = source_name;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(source_name, lineno, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(source_name, lineno, "empty section name");
      file.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(source_name, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(source_name, lineno, "empty key");
    if (section.empty()) fail(source_name, lineno, "key outside of any [section]");
    if (file.sections[section].count(key)) {
      fail(source_name, lineno, "duplicate key '" + key + "'");
    }
    file.sections[section][key] = ConfigFile::Entry{value, lineno, false};
  }
  return file;
}

ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str(), path);
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Poiseuille: return "poiseuille";
    case ScenarioKind::CouettePorous: return "couette_porous";
    case ScenarioKind::SpherePackDns: return "sphere_pack_dns";
    case ScenarioKind::GridStudy: return "grid_study";
    case ScenarioKind::ReSweep: return "re_sweep";
    case ScenarioKind::GlbmRev: return "glbm_rev";
    case ScenarioKind::TwoDomainAnalytic: return "two_domain_analytic";
    case ScenarioKind::ExtractParams: return "extract_params";
    case ScenarioKind::Bench: return "bench";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  for (ScenarioKind k :
       {ScenarioKind::Poiseuille, ScenarioKind::CouettePorous, ScenarioKind::SpherePackDns,
        ScenarioKind::GridStudy, ScenarioKind::ReSweep, ScenarioKind::GlbmRev,
        ScenarioKind::TwoDomainAnalytic, ScenarioKind::ExtractParams, ScenarioKind::Bench}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown scenario kind: '" + name + "'");
}

namespace {

WallScheme scheme_from_string(const ConfigFile& f, const std::string& section,
                              const std::string& value) {
  if (value == "sbb") return WallScheme::SBB;
  if (value == "cli") return WallScheme::CLI;
  throw ConfigError(f.source + ": scheme must be 'sbb' or 'cli', got '" + value + "'");
}

std::string scheme_to_string(WallScheme s) { return s == WallScheme::SBB ? "sbb" : "cli"; }

template <typename T>
std::vector<T> parse_list(const ConfigFile& f, const std::string& value) {
  std::vector<T> out;
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') {
      throw ConfigError(f.source + ": malformed list item '" + item + "'");
    }
    out.push_back(static_cast<T>(x));
  }
  if (out.empty()) throw ConfigError(f.source + ": empty list");
  return out;
}

void require_positive(const ConfigFile& f, const std::string& key, double v) {
  if (!(v > 0.0)) {
    throw ConfigError(f.source + ": key '" + key + "' must be positive, got " +
                      fmt_double(v));
  }
}

}  // namespace

Scenario parse_scenario(const ConfigFile& f) {
  Scenario s;
  s.kind = scenario_kind_from_string(f.get("scenario", "kind"));
  s.out_dir = f.get_or("scenario", "out", "out");
  s.seed = static_cast<std::uint64_t>(f.get_long("scenario", "seed", 1));
  s.threads = static_cast<int>(f.get_long("scenario", "threads", 0));
  s.vtk = f.get_bool("scenario", "vtk", false);

  s.steady.tolerance = f.get_double("steady", "tolerance", 1e-8);
  s.steady.check_interval = f.get_long("steady", "check_interval", 1000);
  s.steady.max_steps = f.get_long("steady", "max_steps", 2000000);
  require_positive(f, "tolerance", s.steady.tolerance);
  if (s.steady.check_interval < 1) throw ConfigError(f.source + ": check_interval must be >= 1");

  const std::string sec = to_string(s.kind);
  switch (s.kind) {
    case ScenarioKind::Poiseuille: {
      PoiseuilleScenario p;
      p.height = static_cast<int>(f.get_long(sec, "height", p.height));
      p.cross_section = static_cast<int>(f.get_long(sec, "cross_section", p.cross_section));
      p.nu = f.get_double(sec, "nu", p.nu);
      p.lambda = f.get_double(sec, "lambda", p.lambda);
      p.g = f.get_double(sec, "g", p.g);
      p.scheme = scheme_from_string(f, sec, f.get_or(sec, "scheme", "sbb"));
      require_positive(f, "nu", p.nu);
      require_positive(f, "lambda", p.lambda);
      if (p.height < 4) throw ConfigError(f.source + ": poiseuille height must be >= 4");
      s.params = p;
      break;
    }
    case ScenarioKind::CouettePorous: {
      CouetteScenario p;
      p.height = static_cast<int>(f.get_long(sec, "height", p.height));
      p.eps = f.get_double(sec, "eps", p.eps);
      p.darcy = f.get_double(sec, "darcy", p.darcy);
      p.j = f.get_or(sec, "j", p.j);
      p.re = f.get_double(sec, "re", p.re);
      p.nu = f.get_double(sec, "nu", p.nu);
      p.lambda = f.get_double(sec, "lambda", p.lambda);
      require_positive(f, "nu", p.nu);
      require_positive(f, "darcy", p.darcy);
      if (!(p.eps > 0.0 && p.eps <= 1.0)) throw ConfigError(f.source + ": eps must be in (0,1]");
      s.params = p;
      break;
    }
    case ScenarioKind::SpherePackDns: {
      DnsScenario p;
      p.nx = static_cast<int>(f.get_long(sec, "nx", p.nx));
      p.ny = static_cast<int>(f.get_long(sec, "ny", p.ny));
      p.nz = static_cast<int>(f.get_long(sec, "nz", p.nz));
      p.r_mean = f.get_double(sec, "r_mean", p.r_mean);
      p.r_spread = f.get_double(sec, "r_spread", p.r_spread);
      p.fill_height = f.get_double(sec, "fill_height", p.fill_height);
      p.offset_plate = f.get_bool(sec, "offset_plate", p.offset_plate);
      p.geometry_file = f.get_or(sec, "geometry_file", "");
      p.nu = f.get_double(sec, "nu", p.nu);
      p.lambda = f.get_double(sec, "lambda", p.lambda);
      p.scheme = scheme_from_string(f, sec, f.get_or(sec, "scheme", "cli"));
      p.drive = f.get_or(sec, "drive", p.drive);
      p.pressure_drop = f.get_double(sec, "pressure_drop", p.pressure_drop);
      p.g = f.get_double(sec, "g", p.g);
      if (p.drive != "pressure" && p.drive != "force") {
        throw ConfigError(f.source + ": drive must be 'pressure' or 'force'");
      }
      require_positive(f, "nu", p.nu);
      s.params = p;
      break;
    }
    case ScenarioKind::GridStudy: {
      GridStudyScenario p;
      p.base_nx = static_cast<int>(f.get_long(sec, "base_nx", p.base_nx));
      p.base_ny = static_cast<int>(f.get_long(sec, "base_ny", p.base_ny));
      p.base_nz = static_cast<int>(f.get_long(sec, "base_nz", p.base_nz));
      p.base_r_mean = f.get_double(sec, "base_r_mean", p.base_r_mean);
      p.r_spread = f.get_double(sec, "r_spread", p.r_spread);
      p.base_fill = f.get_double(sec, "base_fill", p.base_fill);
      if (f.has(sec, "scales")) p.scales = parse_list<int>(f, f.get(sec, "scales"));
      p.base_g = f.get_double(sec, "base_g", p.base_g);
      p.nu = f.get_double(sec, "nu", p.nu);
      p.lambda = f.get_double(sec, "lambda", p.lambda);
      p.scheme = scheme_from_string(f, sec, f.get_or(sec, "scheme", "cli"));
      require_positive(f, "nu", p.nu);
      s.params = p;
      break;
    }
    case ScenarioKind::ReSweep: {
      ReSweepScenario p;
      p.nx = static_cast<int>(f.get_long(sec, "nx", p.nx));
      p.ny = static_cast<int>(f.get_long(sec, "ny", p.ny));
      p.nz = static_cast<int>(f.get_long(sec, "nz", p.nz));
      p.r_mean = f.get_double(sec, "r_mean", p.r_mean);
      p.r_spread = f.get_double(sec, "r_spread", p.r_spread);
      p.fill_height = f.get_double(sec, "fill_height", p.fill_height);
      if (f.has(sec, "re_list")) p.re_list = parse_list<double>(f, f.get(sec, "re_list"));
      p.nu = f.get_double(sec, "nu", p.nu);
      p.lambda = f.get_double(sec, "lambda", p.lambda);
      p.scheme = scheme_from_string(f, sec, f.get_or(sec, "scheme", "cli"));
      p.g_seed = f.get_double(sec, "g_seed", p.g_seed);
      require_positive(f, "nu", p.nu);
      s.params = p;
      break;
    }
    case ScenarioKind::GlbmRev: {
      GlbmRevScenario p;
      p.porosity_csv = f.get(sec, "porosity_csv");
      p.grain_diameter = f.get_double(sec, "grain_diameter", p.grain_diameter);
      p.g = f.get_double(sec, "g", p.g);
      p.nu = f.get_double(sec, "nu", p.nu);
      p.lambda = f.get_double(sec, "lambda", p.lambda);
      p.variant = f.get_or(sec, "variant", p.variant);
      p.calibrate = f.get_bool(sec, "calibrate", p.calibrate);
      if (p.variant != "rescaled" && p.variant != "plain" && p.variant != "darcy") {
        throw ConfigError(f.source + ": variant must be rescaled, plain or darcy");
      }
      require_positive(f, "nu", p.nu);
      s.params = p;
      break;
    }
    case ScenarioKind::TwoDomainAnalytic: {
      TwoDomainScenario p;
      p.condition = f.get_or(sec, "condition", p.condition);
      p.h_f = f.get_double(sec, "h_f", p.h_f);
      p.h_p = f.get_double(sec, "h_p", p.h_p);
      p.mu = f.get_double(sec, "mu", p.mu);
      p.J = f.get_double(sec, "j", p.J);
      p.k = f.get_double(sec, "k", p.k);
      p.g = f.get_double(sec, "g", p.g);
      p.alpha = f.get_double(sec, "alpha", p.alpha);
      p.beta = f.get_double(sec, "beta", p.beta);
      p.points = static_cast<int>(f.get_long(sec, "points", p.points));
      if (p.condition != "BR" && p.condition != "OTW" && p.condition != "BJ" &&
          p.condition != "BJS") {
        throw ConfigError(f.source + ": condition must be BR, OTW, BJ or BJS");
      }
      require_positive(f, "h_f", p.h_f);
      require_positive(f, "k", p.k);
      s.params = p;
      break;
    }
    case ScenarioKind::ExtractParams: {
      ExtractScenario p;
      p.profile_csv = f.get(sec, "profile_csv");
      p.interface_z = f.get_double(sec, "interface_z", p.interface_z);
      p.mu_eff = f.get_double(sec, "mu_eff", p.mu_eff);
      s.params = p;
      break;
    }
    case ScenarioKind::Bench: {
      BenchScenario p;
      p.n = static_cast<int>(f.get_long(sec, "n", p.n));
      p.sphere_diameter = f.get_double(sec, "sphere_diameter", p.sphere_diameter);
      p.warmup = static_cast<int>(f.get_long(sec, "warmup", p.warmup));
      p.steps = static_cast<int>(f.get_long(sec, "steps", p.steps));
      p.nu = f.get_double(sec, "nu", p.nu);
      p.lambda = f.get_double(sec, "lambda", p.lambda);
      p.g = f.get_double(sec, "g", p.g);
      if (p.n < 8) throw ConfigError(f.source + ": bench box must be at least 8 cells");
      if (p.steps < 1) throw ConfigError(f.source + ": bench needs at least one timed step");
      s.params = p;
      break;
    }
  }
  f.reject_unknown();
  return s;
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(parse_config_file(path));
}

namespace {

struct Emitter {
  std::ostringstream os;
  void section(const std::string& name) { os << "[" << name << "]\n"; }
  void kv(const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; }
  void kv(const std::string& k, double v) { kv(k, fmt_double(v)); }
  void kv(const std::string& k, long v) { kv(k, std::to_string(v)); }
  void kv(const std::string& k, int v) { kv(k, std::to_string(v)); }
  void kv(const std::string& k, bool v) { kv(k, std::string(v ? "true" : "false")); }
  void blank() { os << "\n"; }
};

}  // namespace

std::string echo_scenario(const Scenario& s) {
  Emitter e;
  e.section("scenario");
  e.kv("kind", to_string(s.kind));
  e.kv("out", s.out_dir);
  e.kv("seed", static_cast<long>(s.seed));
  e.kv("threads", s.threads);
  e.kv("vtk", s.vtk);
  e.blank();
  e.section("steady");
  e.kv("tolerance", s.steady.tolerance);
  e.kv("check_interval", s.steady.check_interval);
  e.kv("max_steps", s.steady.max_steps);
  e.blank();
  e.section(to_string(s.kind));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PoiseuilleScenario>) {
          e.kv("height", p.height);
          e.kv("cross_section", p.cross_section);
          e.kv("nu", p.nu);
          e.kv("lambda", p.lambda);
          e.kv("g", p.g);
          e.kv("scheme", scheme_to_string(p.scheme));
        } else if constexpr (std::is_same_v<T, CouetteScenario>) {
          e.kv("height", p.height);
          e.kv("eps", p.eps);
          e.kv("darcy", p.darcy);
          e.kv("j", p.j);
          e.kv("re", p.re);
          e.kv("nu", p.nu);
          e.kv("lambda", p.lambda);
        } else if constexpr (std::is_same_v<T, DnsScenario>) {
          e.kv("nx", p.nx);
          e.kv("ny", p.ny);
          e.kv("nz", p.nz);
          e.kv("r_mean", p.r_mean);
          e.kv("r_spread", p.r_spread);
          e.kv("fill_height", p.fill_height);
          e.kv("offset_plate", p.offset_plate);
          if (!p.geometry_file.empty()) e.kv("geometry_file", p.geometry_file);
          e.kv("nu", p.nu);
          e.kv("lambda", p.lambda);
          e.kv("scheme", scheme_to_string(p.scheme));
          e.kv("drive", p.drive);
          e.kv("pressure_drop", p.pressure_drop);
          e.kv("g", p.g);
        } else if constexpr (std::is_same_v<T, GridStudyScenario>) {
          e.kv("base_nx", p.base_nx);
          e.kv("base_ny", p.base_ny);
          e.kv("base_nz", p.base_nz);
          e.kv("base_r_mean", p.base_r_mean);
          e.kv("r_spread", p.r_spread);
          e.kv("base_fill", p.base_fill);
          std::string list;
          for (int v : p.scales) list += (list.empty() ? "" : ", ") + std::to_string(v);
          e.kv("scales", list);
          e.kv("base_g", p.base_g);
          e.kv("nu", p.nu);
          e.kv("lambda", p.lambda);
          e.kv("scheme", scheme_to_string(p.scheme));
        } else if constexpr (std::is_same_v<T, ReSweepScenario>) {
          e.kv("nx", p.nx);
          e.kv("ny", p.ny);
          e.kv("nz", p.nz);
          e.kv("r_mean", p.r_mean);
          e.kv("r_spread", p.r_spread);
          e.kv("fill_height", p.fill_height);
          std::string list;
          for (double v : p.re_list) list += (list.empty() ? "" : ", ") + fmt_double(v);
          e.kv("re_list", list);
          e.kv("nu", p.nu);
          e.kv("lambda", p.lambda);
          e.kv("scheme", scheme_to_string(p.scheme));
          e.kv("g_seed", p.g_seed);
        } else if constexpr (std::is_same_v<T, GlbmRevScenario>) {
          e.kv("porosity_csv", p.porosity_csv);
          e.kv("grain_diameter", p.grain_diameter);
          e.kv("g", p.g);
          e.kv("nu", p.nu);
          e.kv("lambda", p.lambda);
          e.kv("variant", p.variant);
          e.kv("calibrate", p.calibrate);
        } else if constexpr (std::is_same_v<T, TwoDomainScenario>) {
          e.kv("condition", p.condition);
          e.kv("h_f", p.h_f);
          e.kv("h_p", p.h_p);
          e.kv("mu", p.mu);
          e.kv("j", p.J);
          e.kv("k", p.k);
          e.kv("g", p.g);
          e.kv("alpha", p.alpha);
          e.kv("beta", p.beta);
          e.kv("points", p.points);
        } else if constexpr (std::is_same_v<T, ExtractScenario>) {
          e.kv("profile_csv", p.profile_csv);
          e.kv("interface_z", p.interface_z);
          e.kv("mu_eff", p.mu_eff);
        } else if constexpr (std::is_same_v<T, BenchScenario>) {
          e.kv("n", p.n);
          e.kv("sphere_diameter", p.sphere_diameter);
          e.kv("warmup", p.warmup);
          e.kv("steps", p.steps);
          e.kv("nu", p.nu);
          e.kv("lambda", p.lambda);
          e.kv("g", p.g);
        }
      },
      s.params);
  return e.os.str();
}

bool scenario_equal(const Scenario& a, const Scenario& b) {
  return echo_scenario(a) == echo_scenario(b);
}

}  // namespace porolb
