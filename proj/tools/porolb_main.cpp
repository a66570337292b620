#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "porolb/config.hpp"
#include "porolb/errors.hpp"
#include "porolb/interface_models.hpp"
#include "porolb/io.hpp"
#include "porolb/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitInstability = 2;
constexpr int kExitUnconverged = 3;

struct CommonFlags {
  int threads = -1;
  long seed = -1;
  std::string out;
  long max_steps = -1;
  bool vtk = false;
};

void apply_flags(porolb::Scenario& scenario, const CommonFlags& flags) {
  if (flags.threads >= 0) scenario.threads = flags.threads;
  if (flags.seed >= 0) scenario.seed = static_cast<std::uint64_t>(flags.seed);
  if (!flags.out.empty()) scenario.out_dir = flags.out;
  if (flags.max_steps >= 0) scenario.steady.max_steps = flags.max_steps;
  if (flags.vtk) scenario.vtk = true;
}

int execute(porolb::Scenario scenario) {
  const porolb::ScenarioOutcome outcome = porolb::run_scenario(scenario);
  std::cout << outcome.summary << "\n";
  return outcome.converged ? kExitOk : kExitUnconverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Boltzmann solver for coupled free and porous-media flow"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  std::string profile_path;
  double interface_z = 0.0;
  double mu_eff = 0.0;

  CLI::App* run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("config", config_path, "Scenario config file")->required();

  CLI::App* bench = app.add_subcommand("bench", "Run the SBB/CLI throughput benchmark");
  bench->add_option("config", config_path, "Bench config file")->required();

  CLI::App* fit = app.add_subcommand("fit", "Extract interface parameters from a profile");
  fit->add_option("profile", profile_path, "Profile CSV")->required();
  fit->add_option("--interface-z", interface_z, "Interface elevation (default: detected)");
  fit->add_option("--mu-eff", mu_eff, "Effective viscosity override");

  for (CLI::App* sub : {run, bench, fit}) {
    sub->add_option("--threads", flags.threads, "Worker threads (default: hardware)");
    sub->add_option("--seed", flags.seed, "Random seed override");
    sub->add_option("--out", flags.out, "Output directory override");
    sub->add_option("--max-steps", flags.max_steps, "Step budget override");
    sub->add_flag("--vtk", flags.vtk, "Write VTK field output");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      porolb::Scenario scenario = porolb::load_scenario(config_path);
      apply_flags(scenario, flags);
      return execute(std::move(scenario));
    }
    if (bench->parsed()) {
      porolb::Scenario scenario = porolb::load_scenario(config_path);
      if (scenario.kind != porolb::ScenarioKind::Bench) {
        throw porolb::ConfigError("'bench' requires a config with kind = bench");
      }
      apply_flags(scenario, flags);
      return execute(std::move(scenario));
    }
    if (fit->parsed()) {
      porolb::Scenario scenario;
      scenario.kind = porolb::ScenarioKind::ExtractParams;
      porolb::ExtractScenario p;
      p.profile_csv = profile_path;
      p.interface_z = interface_z;
      p.mu_eff = mu_eff;
      scenario.params = p;
      scenario.out_dir = flags.out.empty() ? "fit_out" : flags.out;
      apply_flags(scenario, flags);
      return execute(std::move(scenario));
    }
  } catch (const porolb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const porolb::GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const porolb::NumericalInstability& e) {
    std::cerr << "numerical instability: " << e.what() << "\n";
    return kExitInstability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
