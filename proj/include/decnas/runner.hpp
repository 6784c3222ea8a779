#pragma once

#include <string>
#include <vector>

#include "decnas/config.hpp"
#include "decnas/coordinator.hpp"

namespace decnas {

// Federation + pretrained seed model + pooled test set for one run config.
struct RunContext {
  RunConfig cfg;
  int threads = 1;
  Federation fed;
  Architecture gm0_arch;
  Parameters gm0_params;
  Batch global_test;
};

RunContext prepare_run(RunConfig cfg, int threads);

SearchConfig make_search_config(const RunConfig& cfg, std::int64_t gm0_macs,
                                int threads);

// Union of every client's test shard, in client order.
Batch pooled_test_set(const Federation& fed);

// Executes the search, fl-tunes the endpoints (or every GM with
// fl_tune_all), and writes frontier.csv / costs.csv / run.json / models/.
void execute_search(const RunContext& ctx);

// Width-multiplier baselines trained from scratch with the same fl-tune
// round budget; rows are appended to the run's frontier.csv.
void execute_baseline(const RunContext& ctx, const std::vector<double>& factors);

void execute_fl_tune(const RunContext& ctx, const std::string& model_path);

void execute_report(const std::string& run_dir);

}  // namespace decnas
