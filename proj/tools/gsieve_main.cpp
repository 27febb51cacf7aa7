// gsieve: Gaussian-state evolution and predictability-sieve calculations for
// a damped harmonic oscillator.
//
//   gsieve evolve --config scenario.json [--tmax T --steps N --out traj.csv]
//   gsieve sieve  --config scenario.json [--eval-time auto|T --format json]
//   gsieve scan   --config scan.json [--threads N]
//   gsieve coeffs --a1 1 0 --b1 0 -1
//
// Exit codes: 0 success, 2 configuration error, 3 physics validation error.

#include <complex>
#include <iostream>

#include <CLI11.hpp>

#include "gsieve/cli/commands.hpp"
#include "gsieve/cli/output.hpp"

namespace {

using gsieve::cli::Command;

struct SubcommandArgs {
  std::string config_path;
  bool dump_config = false;
  unsigned threads = 0;
  gsieve::cli::Overrides overrides;
  std::vector<double> a1, a2, b1, b2;
};

template <typename T>
void optional_option(CLI::App* app, const std::string& name, std::optional<T>& target,
                     const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

CLI::App* add_subcommand(CLI::App& app, const std::string& name, const std::string& help,
                         SubcommandArgs& args) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", args.config_path, "Scenario config (JSON)");
  sub->add_flag("--dump-config", args.dump_config,
                "Print the effective config as JSON and exit");
  auto& ov = args.overrides;
  optional_option(sub, "--lambda", ov.lambda, "Friction constant");
  optional_option(sub, "--omega", ov.omega, "Oscillator angular frequency");
  optional_option(sub, "--dqq", ov.d_qq, "Diffusion coefficient D_qq");
  optional_option(sub, "--dpp", ov.d_pp, "Diffusion coefficient D_pp");
  optional_option(sub, "--dpq", ov.d_pq, "Cross diffusion D_pq");
  optional_option(sub, "--tmax", ov.t_max, "Final time of the output grid");
  optional_option(sub, "--steps", ov.steps, "Number of time steps");
  optional_option(sub, "--eval-time", ov.eval_time, "Sieve evaluation time or 'auto'");
  optional_option(sub, "--out", ov.out, "Output path ('-' for stdout)");
  optional_option(sub, "--format", ov.format, "Output format: csv or json");
  return sub;
}

std::optional<std::complex<double>> as_complex(const std::vector<double>& pair) {
  if (pair.empty()) return std::nullopt;
  return std::complex<double>(pair[0], pair[1]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state Lindblad evolution and predictability sieve"};
  app.require_subcommand(1);

  SubcommandArgs args;
  CLI::App* evolve = add_subcommand(app, "evolve", "Write the covariance trajectory", args);
  CLI::App* sieve = add_subcommand(app, "sieve", "Optimal initial squeezing report", args);
  CLI::App* scan = add_subcommand(app, "scan", "Closed form vs numeric over a parameter grid", args);
  CLI::App* coeffs = add_subcommand(app, "coeffs", "Diffusion/friction from Lindblad coefficients", args);
  scan->add_option("--threads", args.threads, "Worker threads (0 = all cores)");
  coeffs->add_option("--a1", args.a1, "a1 as RE IM")->expected(2);
  coeffs->add_option("--a2", args.a2, "a2 as RE IM")->expected(2);
  coeffs->add_option("--b1", args.b1, "b1 as RE IM")->expected(2);
  coeffs->add_option("--b2", args.b2, "b2 as RE IM")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gsieve::cli::kExitConfigError;
  }

  Command command = Command::evolve;
  if (sieve->parsed()) command = Command::sieve;
  if (scan->parsed()) command = Command::scan;
  if (coeffs->parsed()) command = Command::coeffs;
  (void)evolve;

  args.overrides.a1 = as_complex(args.a1);
  args.overrides.a2 = as_complex(args.a2);
  args.overrides.b1 = as_complex(args.b1);
  args.overrides.b2 = as_complex(args.b2);

  gsieve::cli::ScenarioConfig config;
  try {
    if (!args.config_path.empty()) config = gsieve::cli::load_config_file(args.config_path);
    gsieve::cli::apply_overrides(config, args.overrides);
    if (args.dump_config) {
      gsieve::cli::validate_config(config);
      gsieve::cli::write_json(std::cout, gsieve::cli::to_json(config));
      return gsieve::cli::kExitOk;
    }
  } catch (const gsieve::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return gsieve::cli::kExitConfigError;
  }

  gsieve::cli::RunOptions options;
  options.threads = args.threads;
  return gsieve::cli::execute(command, config, std::cout, std::cerr, options);
}
