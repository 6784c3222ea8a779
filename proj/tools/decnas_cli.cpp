#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decnas/runner.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 infeasible budget.
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

decnas::RunConfig load_config(const std::string& config_path,
                              std::int64_t seed_override,
                              const std::string& out_override) {
  decnas::RunConfig cfg;
  if (!config_path.empty()) cfg = decnas::parse_run_config(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (!out_override.empty()) cfg.output_dir = out_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of federated architecture search by "
               "iterative filter pruning"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::int64_t seed_override = -1;
  int threads = 1;
  std::string out_override;
  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--seed", seed_override, "Override the config seed");
  app.add_option("--threads", threads, "Worker thread cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_override, "Override the output directory");

  auto* search = app.add_subcommand("run-search", "Run the pruning search");

  std::vector<double> factors{0.75, 0.5};
  auto* baseline =
      app.add_subcommand("run-baseline", "Width-multiplier baselines");
  baseline->add_option("--factors", factors, "Width factors in (0, 1]");

  std::string model_path;
  auto* tune = app.add_subcommand("fl-tune", "Federated fine-tuning");
  tune->add_option("--model", model_path, "Model JSON to tune (default GM_0)");

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Summarize a finished run");
  report->add_option("--out", run_dir, "Run directory to report on");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) {
      if (run_dir.empty()) run_dir = out_override;
      if (run_dir.empty()) throw decnas::ConfigError("report needs --out DIR");
      decnas::execute_report(run_dir);
      return 0;
    }

    decnas::RunConfig cfg =
        load_config(config_path, seed_override, out_override);
    if (baseline->parsed()) {
      for (double f : factors)
        if (!(f > 0.0 && f <= 1.0))
          throw decnas::ConfigError("width factor must be in (0, 1]");
    }

    decnas::RunContext ctx = decnas::prepare_run(std::move(cfg), threads);
    if (search->parsed()) {
      decnas::execute_search(ctx);
    } else if (baseline->parsed()) {
      decnas::execute_baseline(ctx, factors);
    } else if (tune->parsed()) {
      decnas::execute_fl_tune(ctx, model_path);
    }
    return 0;
  } catch (const decnas::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const decnas::DataError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const decnas::BudgetError& e) {
    std::cerr << "infeasible budget: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
