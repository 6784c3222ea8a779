#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decnas/tensor.hpp"

namespace decnas {

struct Sample {
  Tensor features;  // (h, w, c)
  int label = 0;
};

// Per-class sample ratios; components sum to 1.
using DistributionVector = std::vector<double>;

struct ClientDataset {
  int client_id = 0;
  std::vector<Sample> train;
  std::vector<Sample> validation;
  std::vector<Sample> test;
  DistributionVector distribution;

  int train_num() const { return static_cast<int>(train.size()); }
  int test_num() const { return static_cast<int>(validation.size()); }
  int total_samples() const {
    return static_cast<int>(train.size() + validation.size() + test.size());
  }
};

struct Federation {
  std::vector<ClientDataset> clients;
  int class_count = 0;
};

// Class-conditional Gaussian-blob images, fully determined by the seed.
std::vector<Sample> load_synthetic(std::uint64_t seed, int class_count,
                                   int sample_count, Shape3 shape,
                                   float noise = 0.35f);

// One subdirectory per class (labels in sorted-name order); 8-bit grayscale
// or RGB PNG/PGM, nearest-neighbor resized to `shape`.
std::vector<Sample> load_image_directory(const std::string& path, Shape3 shape);

struct ShardMode {
  bool iid = true;
  int classes_per_client = 0;  // label_skew only

  static ShardMode Iid() { return {true, 0}; }
  static ShardMode LabelSkew(int k) { return {false, k}; }
};

// 6:2:2 with largest-remainder rounding, seeded-random, stratified by label
// where counts permit. Requires >= 5 samples.
void split_client(std::vector<Sample> samples, std::uint64_t seed,
                  std::vector<Sample>& train, std::vector<Sample>& validation,
                  std::vector<Sample>& test);

DistributionVector distribution_vector(const ClientDataset& client,
                                       int class_count);

// Disjoint split of `samples` over clients; clients ending up with < 5
// samples are dropped (warning on stderr).
Federation shard_clients(const std::vector<Sample>& samples, int num_clients,
                         ShardMode mode, int class_count, std::uint64_t seed);

}  // namespace decnas
