#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decnas/coordinator.hpp"

namespace decnas {

// Flat key=value run configuration with [section] headers. Unknown keys are
// rejected with the offending line number.
struct RunConfig {
  // [run]
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  // [data]
  std::string dataset = "synthetic";  // "synthetic" or an image directory
  int num_clients = 200;
  std::string shard_mode = "label_skew";  // iid | label_skew
  int classes_per_client = 2;
  int class_count = 8;
  int sample_count = 4000;  // synthetic only
  double noise = 0.35;      // synthetic only

  // [model]
  std::string model_template = "convnet-small";  // | convnet-celeba-shape
  int pretrain_rounds = 40;

  // [search]
  int group_count = 10;
  double balance_r = 1.1;
  int epochs = 1;
  double drop_alpha = 33.0;
  double lr = 0.05;
  int batch_size = 32;
  double delta_percent = 10.0;        // delta_0 as % of R_0
  double decay = 0.93;
  double final_budget_percent = 50.0; // target MACs as % of R_0
  std::string round_schedule = "1-2:2,3-4:4,5-:6";
  bool grouping_enabled = true;
  bool dynamic_rounds_enabled = true;
  bool early_drop_enabled = true;
  bool oracle_mode = false;
  bool fl_tune_all = false;

  // [fl_tune]
  int fl_rounds = 60;
  int clients_per_round = 20;

  // [cost]
  double seconds_per_mac = 2e-8;
};

RunConfig parse_run_config(const std::string& path);

// "1-5:5,7-10:10,11-15:15,16-:20"
RoundSchedule parse_round_schedule(const std::string& text);

struct FrontierRow {
  std::string method;  // decnas | width_multiplier | oracle
  int iteration = 0;
  std::int64_t macs = 0;
  double macs_ratio = 0.0;
  double top1_accuracy = 0.0;
};

// Fixed header method,iteration,macs,macs_ratio,top1_accuracy; rows sorted
// by macs descending.
void write_frontier_csv(std::vector<FrontierRow> rows, const std::string& path);
std::vector<FrontierRow> read_frontier_csv(const std::string& path);

}  // namespace decnas
