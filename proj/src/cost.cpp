#include "decnas/cost.hpp"

#include <fstream>
#include <set>

#include "decnas/errors.hpp"

namespace decnas {

void CostLedger::record_client_round(int iteration, int round, int candidate_id,
                                     int client_id, std::int64_t model_bytes,
                                     std::int64_t model_macs, int train_num,
                                     int test_num, int epochs,
                                     bool dropped_this_round) {
  LedgerEntry e;
  e.iteration = iteration;
  e.round = round;
  e.candidate_id = candidate_id;
  e.client_id = client_id;
  e.downlink_bytes = model_bytes;
  e.compute_macs = model_macs * train_num * epochs * kTrainMacFactor +
                   model_macs * test_num;
  e.uplink_bytes = kAccuracyReportBytes + (dropped_this_round ? 0 : model_bytes);
  entries.push_back(e);
}

void CostLedger::record_distribution_upload(int iteration, int client_id,
                                            int class_count) {
  LedgerEntry e;
  e.iteration = iteration;
  e.round = 0;
  e.candidate_id = -1;
  e.client_id = client_id;
  e.uplink_bytes = distribution_summary_bytes(class_count);
  entries.push_back(e);
}

void CostLedger::append(const CostLedger& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

CostSummary summarize(const std::vector<LedgerEntry>& entries,
                      double seconds_per_mac) {
  CostSummary s;
  std::set<int> clients;
  for (const auto& e : entries) {
    s.total_uplink_bytes += e.uplink_bytes;
    s.total_downlink_bytes += e.downlink_bytes;
    s.total_compute_macs += e.compute_macs;
    clients.insert(e.client_id);
  }
  s.distinct_clients = static_cast<int>(clients.size());
  s.total_compute_seconds = double(s.total_compute_macs) * seconds_per_mac;
  if (s.distinct_clients > 0) {
    s.avg_uplink_bytes_per_client =
        double(s.total_uplink_bytes) / s.distinct_clients;
    s.avg_downlink_bytes_per_client =
        double(s.total_downlink_bytes) / s.distinct_clients;
    s.avg_compute_seconds_per_client =
        s.total_compute_seconds / s.distinct_clients;
  }
  return s;
}

void write_ledger_csv(const std::vector<LedgerEntry>& entries,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << "iteration,round,candidate_id,client_id,uplink_bytes,downlink_bytes,compute_macs\n";
  for (const auto& e : entries) {
    out << e.iteration << ',' << e.round << ',' << e.candidate_id << ','
        << e.client_id << ',' << e.uplink_bytes << ',' << e.downlink_bytes
        << ',' << e.compute_macs << '\n';
  }
}

}  // namespace decnas
