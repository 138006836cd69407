#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"

namespace cli = anchorplan::cli;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> step_m;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Scenario JSON; omitted keys take defaults")->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out_dir, "Output directory")->required();
  cmd->add_option("--seed", flags.seed, "Master seed, overrides simulation.master_seed");
  cmd->add_option("--step-m", flags.step_m, "Traversal step in meters, overrides traversal.step_m");
  cmd->add_option("--threads", flags.threads, "Worker threads (0 = all cores); outputs do not depend on it");
}

cli::ScenarioConfig effective_config(const CommonFlags& flags) {
  auto config = flags.config_path.empty() ? cli::parse_config("{}", "defaults") : cli::load_config(flags.config_path);
  if (flags.seed) config.simulation.master_seed = *flags.seed;
  if (flags.step_m) {
    if (!(*flags.step_m > 0.0)) throw cli::ConfigError("--step-m: must be positive");
    config.traversal.step_m = *flags.step_m;
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anchor-cluster deployment planner for AUV navigation"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool samples = false;
  std::string input;

  auto* field = app.add_subcommand("field", "CRLB field around one cluster");
  auto* optimize = app.add_subcommand("optimize", "Sweep anchors per cluster and lambda1");
  auto* feasibility = app.add_subcommand("feasibility", "Largest coverable square versus total anchors");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo voyages over the deployment");
  auto* fit = app.add_subcommand("fit", "Fit the INS divergence law to an error series");
  for (auto* cmd : {field, optimize, feasibility, simulate, fit}) add_common(cmd, flags);
  simulate->add_flag("--samples", samples, "Also write every path sample");
  fit->add_option("--input", input, "CSV with header delta_p,variance_m2")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitValidation;
  }

  try {
    const auto config = effective_config(flags);
    const cli::RunOptions options{flags.out_dir, flags.threads, samples};
    if (field->parsed()) cli::run_field(config, options);
    if (optimize->parsed()) cli::run_optimize(config, options);
    if (feasibility->parsed()) cli::run_feasibility(config, options);
    if (simulate->parsed()) cli::run_simulate(config, options);
    if (fit->parsed()) cli::run_fit(config, input, options);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitValidation;
  } catch (const anchorplan::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitIo;
  }
  return cli::kExitOk;
}
