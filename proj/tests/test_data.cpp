#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "decnas/data.hpp"

using namespace decnas;

namespace {

const Shape3 kShape{8, 8, 1};

std::vector<Sample> blobs(std::uint64_t seed, int classes, int count) {
  return load_synthetic(seed, classes, count, kShape);
}

// Fingerprint of a sample for set-equality checks.
std::pair<int, float> key(const Sample& s) {
  float sum = 0.0f;
  for (float v : s.features.values) sum += v;
  return {s.label, sum};
}

std::multiset<std::pair<int, float>> keys(const std::vector<Sample>& v) {
  std::multiset<std::pair<int, float>> out;
  for (const auto& s : v) out.insert(key(s));
  return out;
}

std::multiset<std::pair<int, float>> federation_keys(const Federation& fed) {
  std::multiset<std::pair<int, float>> out;
  for (const auto& c : fed.clients)
    for (const auto* part : {&c.train, &c.validation, &c.test})
      for (const auto& s : *part) out.insert(key(s));
  return out;
}

}  // namespace

TEST_CASE("synthetic generation is deterministic") {
  auto a = blobs(1, 8, 400);
  auto b = blobs(1, 8, 400);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].features.values == b[i].features.values);
  }
  auto c = blobs(2, 8, 400);
  bool same = true;
  for (std::size_t i = 0; i < a.size() && same; ++i)
    same = a[i].features.values == c[i].features.values;
  CHECK_FALSE(same);
}

TEST_CASE("synthetic classes are near-balanced and all represented") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto samples = blobs(seed, 8, 4000);
    std::map<int, int> counts;
    for (const auto& s : samples) counts[s.label]++;
    REQUIRE(counts.size() == 8);
    for (auto [label, n] : counts) {
      CHECK(n > 0.9 * 4000 / 8);
      CHECK(n < 1.1 * 4000 / 8);
    }
  }
}

TEST_CASE("split_client produces 6:2:2 with largest-remainder rounding") {
  auto samples = blobs(1, 4, 100);

  auto sizes = [&](int n) {
    std::vector<Sample> sub(samples.begin(), samples.begin() + n);
    std::vector<Sample> tr, va, te;
    split_client(sub, 7, tr, va, te);
    return std::vector<int>{int(tr.size()), int(va.size()), int(te.size())};
  };
  CHECK(sizes(10) == std::vector<int>{6, 2, 2});
  CHECK(sizes(5) == std::vector<int>{3, 1, 1});
  CHECK(sizes(100) == std::vector<int>{60, 20, 20});

  std::vector<Sample> tiny(samples.begin(), samples.begin() + 4);
  std::vector<Sample> tr, va, te;
  CHECK_THROWS_AS(split_client(tiny, 7, tr, va, te), DataError);
}

TEST_CASE("split preserves the sample multiset") {
  auto samples = blobs(3, 4, 50);
  std::vector<Sample> tr, va, te;
  split_client(samples, 9, tr, va, te);
  std::vector<Sample> all;
  for (const auto* p : {&tr, &va, &te}) all.insert(all.end(), p->begin(), p->end());
  CHECK(keys(all) == keys(samples));
}

TEST_CASE("distribution_vector matches label counts") {
  ClientDataset c;
  auto samples = blobs(1, 4, 40);
  split_client(samples, 1, c.train, c.validation, c.test);
  auto v = distribution_vector(c, 4);
  REQUIRE(v.size() == 4);
  std::map<int, int> counts;
  for (const auto* p : {&c.train, &c.validation, &c.test})
    for (const auto& s : *p) counts[s.label]++;
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    CHECK(v[i] == doctest::Approx(counts[i] / 40.0));
    sum += v[i];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("iid sharding balances client sizes within one sample") {
  auto samples = blobs(1, 8, 1000);
  Federation fed = shard_clients(samples, 10, ShardMode::Iid(), 8, 5);
  REQUIRE(fed.clients.size() == 10);
  for (const auto& c : fed.clients) CHECK(c.total_samples() == 100);
  CHECK(federation_keys(fed) == keys(samples));
}

TEST_CASE("label_skew k=1 gives one-hot distributions") {
  auto samples = blobs(2, 8, 1600);
  Federation fed = shard_clients(samples, 8, ShardMode::LabelSkew(1), 8, 3);
  for (const auto& c : fed.clients) {
    int nonzero = 0;
    for (double v : c.distribution) nonzero += v > 0 ? 1 : 0;
    CHECK(nonzero == 1);
  }
}

TEST_CASE("label_skew k=2 gives at-most-two-hot distributions") {
  auto samples = blobs(4, 8, 4000);
  Federation fed = shard_clients(samples, 50, ShardMode::LabelSkew(2), 8, 7);
  CHECK(fed.clients.size() >= 45);  // a few may fall under the 5-sample floor
  for (const auto& c : fed.clients) {
    int nonzero = 0;
    for (double v : c.distribution) nonzero += v > 0 ? 1 : 0;
    CHECK(nonzero <= 2);
    CHECK(nonzero >= 1);
    CHECK(c.train_num() >= 1);
    CHECK(c.test_num() >= 1);
  }
}

TEST_CASE("sharding is deterministic and disjoint") {
  auto samples = blobs(6, 8, 2000);
  Federation a = shard_clients(samples, 20, ShardMode::LabelSkew(2), 8, 11);
  Federation b = shard_clients(samples, 20, ShardMode::LabelSkew(2), 8, 11);
  REQUIRE(a.clients.size() == b.clients.size());
  for (std::size_t i = 0; i < a.clients.size(); ++i) {
    CHECK(a.clients[i].client_id == b.clients[i].client_id);
    CHECK(a.clients[i].train_num() == b.clients[i].train_num());
    REQUIRE(a.clients[i].train.size() == b.clients[i].train.size());
    for (std::size_t j = 0; j < a.clients[i].train.size(); ++j)
      CHECK(a.clients[i].train[j].features.values ==
            b.clients[i].train[j].features.values);
  }
  // partition property: union over clients equals the input multiset minus
  // nothing (no client dropped in this configuration)
  auto fk = federation_keys(a);
  auto sk = keys(samples);
  CHECK(std::includes(sk.begin(), sk.end(), fk.begin(), fk.end()));
}

TEST_CASE("client ids are unique") {
  auto samples = blobs(6, 8, 2000);
  Federation fed = shard_clients(samples, 30, ShardMode::Iid(), 8, 1);
  std::set<int> ids;
  for (const auto& c : fed.clients) ids.insert(c.client_id);
  CHECK(ids.size() == fed.clients.size());
}
