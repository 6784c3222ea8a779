#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "decnas/cost.hpp"

using namespace decnas;

TEST_CASE("dropped candidates upload only the accuracy report") {
  CostLedger ledger;
  ledger.record_client_round(1, 1, 0, 7, 440, 1000, 0, 5, 1, true);
  REQUIRE(ledger.entries.size() == 1);
  const LedgerEntry& e = ledger.entries[0];
  CHECK(e.uplink_bytes == 8);
  CHECK(e.downlink_bytes == 440);
  // no training samples -> test-only MACs
  CHECK(e.compute_macs == 1000 * 5);
}

TEST_CASE("surviving candidates upload accuracy plus the gradient") {
  CostLedger ledger;
  ledger.record_client_round(2, 3, 1, 9, 440, 1000, 12, 4, 2, false);
  const LedgerEntry& e = ledger.entries[0];
  CHECK(e.uplink_bytes == 8 + 440);
  CHECK(e.downlink_bytes == 440);
  // train: macs * train_num * epochs * 3, plus test: macs * test_num
  CHECK(e.compute_macs == 1000LL * 12 * 2 * 3 + 1000LL * 4);
  CHECK(e.iteration == 2);
  CHECK(e.round == 3);
  CHECK(e.candidate_id == 1);
  CHECK(e.client_id == 9);
}

TEST_CASE("distribution uploads cost four bytes per class") {
  CostLedger ledger;
  ledger.record_distribution_upload(1, 3, 8);
  const LedgerEntry& e = ledger.entries[0];
  CHECK(e.uplink_bytes == 32);
  CHECK(e.downlink_bytes == 0);
  CHECK(e.compute_macs == 0);
  CHECK(e.round == 0);
  CHECK(e.candidate_id == -1);
  CHECK(distribution_summary_bytes(10) == 40);
}

TEST_CASE("summarize totals and per-client averages") {
  CostLedger ledger;
  CHECK(summarize(ledger.entries, 1e-9).total_uplink_bytes == 0);
  CHECK(summarize(ledger.entries, 1e-9).distinct_clients == 0);

  ledger.record_client_round(1, 1, 0, 0, 100, 50, 2, 1, 1, false);
  ledger.record_client_round(1, 1, 0, 1, 100, 50, 2, 1, 1, false);
  ledger.record_client_round(1, 2, 0, 0, 100, 50, 2, 1, 1, true);
  CostSummary s = summarize(ledger.entries, 2e-8);
  CHECK(s.total_uplink_bytes == 108 + 108 + 8);
  CHECK(s.total_downlink_bytes == 300);
  CHECK(s.total_compute_macs == 3 * (50LL * 2 * 1 * 3 + 50));
  CHECK(s.distinct_clients == 2);
  CHECK(s.avg_uplink_bytes_per_client == doctest::Approx(224.0 / 2));
  CHECK(s.avg_downlink_bytes_per_client == doctest::Approx(150.0));
  CHECK(s.total_compute_seconds ==
        doctest::Approx(2e-8 * double(s.total_compute_macs)));
}

TEST_CASE("append merges ledgers") {
  CostLedger a, b;
  a.record_client_round(1, 1, 0, 0, 10, 10, 1, 1, 1, false);
  b.record_client_round(2, 1, 0, 1, 10, 10, 1, 1, 1, false);
  a.append(b);
  CHECK(a.entries.size() == 2);
  CHECK(a.entries[1].iteration == 2);
}

TEST_CASE("csv export round-trips through a file") {
  CostLedger ledger;
  ledger.record_client_round(1, 2, 3, 4, 100, 1000, 6, 2, 1, false);
  const std::string path = "/tmp/decnas_test_costs.csv";
  write_ledger_csv(ledger.entries, path);
  std::ifstream in(path);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  CHECK(header ==
        "iteration,round,candidate_id,client_id,uplink_bytes,downlink_bytes,"
        "compute_macs");
  REQUIRE(std::getline(in, row));
  CHECK(row == "1,2,3,4,108,100,20000");
  std::remove(path.c_str());
}
