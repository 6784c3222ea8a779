#pragma once

#include <cstdint>
#include <vector>

#include "decnas/data.hpp"

namespace decnas {

struct Group {
  int group_id = 0;
  std::vector<int> client_ids;
  std::int64_t d = 0;  // total sample count
  DistributionVector aggregate_v;
};

struct Partition {
  std::vector<Group> groups;
  double r = 1.1;
  double mean_distance = 0.0;
  // set when r is unsatisfiable for the given client sizes; the partition is
  // still the greedy best effort
  bool balance_violated = false;
};

// sum_i |a_i - b_i|, in [0, 2] for distribution vectors
double manhattan_distance(const DistributionVector& a,
                          const DistributionVector& b);

// Sample-count-weighted class distribution over all clients (the imaginary
// group holding every client's data).
DistributionVector federation_distribution(const Federation& fed);

// Sort clients by data size descending, dispatch each to the group that
// minimizes the resulting mean distance to the full-federation distribution
// among groups whose total stays under r times the balanced target.
Partition greedy_partition(const Federation& fed, int group_count, double r);

// One candidate-to-group assignment for an iteration. Candidates beyond the
// group count queue up in later waves (FIFO over group completion).
struct Assignment {
  int candidate_id = 0;
  int group_id = 0;
  int wave = 0;
};

std::vector<Assignment> schedule_candidates(const std::vector<int>& candidate_ids,
                                            int group_count, std::uint64_t seed);

}  // namespace decnas
