#pragma once

// Partitioning helpers shared by the unit and acceptance suites: a federation
// stub built from (size, distribution) specs and an exhaustive brute-force
// reference for the mean-distance objective.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "decnas/grouping.hpp"

namespace testutil {

// Federation stub: per-client (size, distribution), no actual samples. The
// partitioner only reads total_samples() and the distribution vector, both
// reconstructable from a synthetic train shard.
inline decnas::Federation stub_federation(
    const std::vector<std::pair<int, decnas::DistributionVector>>& spec) {
  using namespace decnas;
  Federation fed;
  fed.class_count = spec.empty() ? 0 : static_cast<int>(spec[0].second.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    ClientDataset c;
    c.client_id = static_cast<int>(i);
    // materialize `size` samples with labels matching the distribution
    int size = spec[i].first;
    int placed = 0;
    for (int cls = 0; cls < fed.class_count; ++cls) {
      int n = static_cast<int>(std::lround(spec[i].second[cls] * size));
      for (int j = 0; j < n && placed < size; ++j, ++placed) {
        Sample s;
        s.label = cls;
        c.train.push_back(s);
      }
    }
    while (placed < size) {
      Sample s;
      s.label = 0;
      c.train.push_back(s);
      ++placed;
    }
    c.distribution = distribution_vector(c, fed.class_count);
    fed.clients.push_back(std::move(c));
  }
  return fed;
}

// Exhaustive search over all assignments of clients to `k` groups; returns
// the best mean distance among balance-feasible partitions (max <= r*min),
// or the best overall if none is feasible.
inline double brute_force_mean_distance(const decnas::Federation& fed, int k,
                                        double r) {
  using namespace decnas;
  const int n = static_cast<int>(fed.clients.size());
  DistributionVector g_all = federation_distribution(fed);
  double best = 1e18, best_any = 1e18;
  std::vector<int> assign(n, 0);
  const long total = static_cast<long>(std::pow(k, n));
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i) {
      assign[i] = c % k;
      c /= k;
    }
    std::vector<std::int64_t> d(k, 0);
    std::vector<DistributionVector> sums(k, DistributionVector(fed.class_count, 0.0));
    bool empty_group = false;
    for (int i = 0; i < n; ++i) {
      int sz = fed.clients[i].total_samples();
      d[assign[i]] += sz;
      for (int cls = 0; cls < fed.class_count; ++cls)
        sums[assign[i]][cls] += fed.clients[i].distribution[cls] * sz;
    }
    for (int g = 0; g < k; ++g) empty_group |= d[g] == 0;
    if (empty_group) continue;
    double mean = 0.0;
    for (int g = 0; g < k; ++g) {
      DistributionVector v(fed.class_count);
      for (int cls = 0; cls < fed.class_count; ++cls) v[cls] = sums[g][cls] / d[g];
      mean += manhattan_distance(v, g_all);
    }
    mean /= k;
    best_any = std::min(best_any, mean);
    auto [mn, mx] = std::minmax_element(d.begin(), d.end());
    if (double(*mx) <= r * double(*mn) + 1e-9) best = std::min(best, mean);
  }
  return best < 1e17 ? best : best_any;
}

}  // namespace testutil
