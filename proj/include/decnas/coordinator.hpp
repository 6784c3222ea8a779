#pragma once

#include <cstdint>
#include <vector>

#include "decnas/cost.hpp"
#include "decnas/data.hpp"
#include "decnas/grouping.hpp"
#include "decnas/nn.hpp"
#include "decnas/pruner.hpp"

namespace decnas {

// Piecewise-constant rounds-per-iteration table. A gap between tiers
// resolves to the following tier.
struct RoundSchedule {
  struct Tier {
    int first_iter = 1;
    int last_iter = -1;  // -1 = open-ended
    int rounds = 1;
  };
  std::vector<Tier> tiers;

  int max_rounds() const;
};

int dynamic_round_number(int t, const RoundSchedule& schedule, bool enabled);

struct SearchConfig {
  std::uint64_t seed = 1;
  int group_count = 10;          // 𝒦
  double balance_r = 1.1;        // r
  int epochs = 1;                // E
  double drop_alpha = 33.0;      // α, percent per round
  RoundSchedule round_schedule;
  float lr = 0.05f;
  int batch_size = 32;
  double delta_0 = 0.0;          // initial budget reduction, MACs
  double decay = 0.98;
  double final_budget = 0.0;     // MACs
  bool grouping_enabled = true;
  bool dynamic_rounds_enabled = true;
  bool early_drop_enabled = true;
  int threads = 1;
};

struct ClientReport {
  int client_id = 0;
  double acc = 0.0;
  int test_num = 0;
  int train_num = 0;
  GradientDelta grad;  // parameter delta over E local epochs
};

// Algorithm: train E epochs of minibatch SGD on the local training shard,
// report the parameter delta plus the post-training validation accuracy.
ClientReport client_operation(const Architecture& arch, const Parameters& params,
                              const ClientDataset& client, int epochs, float lr,
                              int batch_size, std::uint64_t task_seed);

// test_num-weighted mean accuracy.
double fuse_accuracy(const std::vector<ClientReport>& reports);

// train_num-weighted mean delta; apply as params + fused.
GradientDelta fuse_gradients(const std::vector<ClientReport>& reports);

// (Acc(prev_GM) - candidate_acc) / (Res(prev_GM) - Res(candidate)); lower is
// better, negative when the candidate improved.
double acc_degradation(double prev_gm_acc, std::int64_t prev_gm_macs,
                       double candidate_acc, std::int64_t candidate_macs);

struct CandidateState {
  Candidate candidate;
  std::vector<double> fused_acc_history;
  double degradation = 0.0;
  bool alive = true;
  int assigned_group = -1;
  int dropped_in_round = -1;
};

// drop_num = min(ceil(alpha% * k_original), alive - 1); the largest
// degradation ratios go. Returns the ids dropped this call.
std::vector<int> drop_candidates(std::vector<CandidateState>& states,
                                 double alpha, int k_original, int round);

struct IterationReport {
  int iteration = 0;
  double budget = 0.0;                 // R_t
  int chosen_layer_index = -1;
  int chosen_candidate_id = -1;
  double fused_accuracy = 0.0;
  std::int64_t macs = 0;
  int rounds = 0;
  int candidate_count = 0;
  std::vector<std::pair<int, int>> drop_log;  // (round, candidate_id)
};

struct GlobalModel {
  Architecture arch;
  Parameters params;
};

struct SearchResult {
  std::vector<GlobalModel> gms;  // GM_1 .. GM_T
  std::vector<IterationReport> reports;
  CostLedger ledger;
};

// Accuracy fusion, dropping, then gradient fusion for the survivors only.
// `prev_gm_acc`/`prev_gm_macs` anchor the degradation ratio.
void cloud_one_round(std::vector<CandidateState>& states,
                     const Partition& partition, const Federation& fed,
                     const SearchConfig& config, int t, int round,
                     double prev_gm_acc, std::int64_t prev_gm_macs,
                     CostLedger& ledger);

SearchResult run_search(const SearchConfig& config, const Federation& fed,
                        const Architecture& gm0_arch,
                        const Parameters& gm0_params);

// Standard FedAvg: sample clients uniformly each round, fuse train_num-
// weighted deltas. Round-budgeted, no convergence check.
Parameters fl_tune(const Architecture& arch, const Parameters& params,
                   const Federation& fed, int rounds, int clients_per_round,
                   int epochs, float lr, int batch_size, std::uint64_t seed,
                   int threads, CostLedger* ledger = nullptr);

}  // namespace decnas
