#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace decnas {

struct LedgerEntry {
  int iteration = 0;
  int round = 0;       // 0 = per-iteration metadata (distribution summary)
  int candidate_id = -1;
  int client_id = 0;
  std::int64_t uplink_bytes = 0;
  std::int64_t downlink_bytes = 0;
  std::int64_t compute_macs = 0;
};

// Byte cost of one accuracy report.
inline constexpr std::int64_t kAccuracyReportBytes = 8;

// Byte cost of one per-client class-count summary.
inline std::int64_t distribution_summary_bytes(int class_count) {
  return 4 * std::int64_t(class_count);
}

// Training costs forward + backward at 3x the forward MACs.
inline constexpr std::int64_t kTrainMacFactor = 3;

struct CostLedger {
  std::vector<LedgerEntry> entries;

  // One round of a candidate on one client. `dropped_this_round` suppresses
  // the gradient upload (the accuracy report still goes up).
  void record_client_round(int iteration, int round, int candidate_id,
                           int client_id, std::int64_t model_bytes,
                           std::int64_t model_macs, int train_num, int test_num,
                           int epochs, bool dropped_this_round);

  // Per-iteration class-count summary upload, once per client.
  void record_distribution_upload(int iteration, int client_id, int class_count);

  void append(const CostLedger& other);
};

struct CostSummary {
  std::int64_t total_uplink_bytes = 0;
  std::int64_t total_downlink_bytes = 0;
  std::int64_t total_compute_macs = 0;
  int distinct_clients = 0;
  double avg_uplink_bytes_per_client = 0.0;
  double avg_downlink_bytes_per_client = 0.0;
  double total_compute_seconds = 0.0;
  double avg_compute_seconds_per_client = 0.0;
};

CostSummary summarize(const std::vector<LedgerEntry>& entries,
                      double seconds_per_mac);

void write_ledger_csv(const std::vector<LedgerEntry>& entries,
                      const std::string& path);

}  // namespace decnas
