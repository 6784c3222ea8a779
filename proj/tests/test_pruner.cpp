#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "decnas/models.hpp"
#include "decnas/pruner.hpp"

#include "pruning_helpers.h"

using namespace decnas;
using namespace testutil;

namespace {

Architecture small_convnet(int classes = 4) {
  Architecture arch;
  arch.input = {8, 8, 1};
  arch.class_count = classes;
  arch.layers = {
      LayerSpec::conv2d(6, 3, 3),  LayerSpec::relu(), LayerSpec::maxpool2d(2),
      LayerSpec::conv2d(8, 3, 3),  LayerSpec::relu(),
      LayerSpec::flatten(),
      LayerSpec::dense(classes),
      LayerSpec::softmax(),
  };
  validate(arch);
  return arch;
}

Tensor random_input(std::mt19937_64& rng, Shape3 in, int n) {
  Tensor t({std::size_t(n), std::size_t(in.h), std::size_t(in.w),
            std::size_t(in.c)});
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (auto& v : t.values) v = dist(rng);
  return t;
}

}  // namespace

TEST_CASE("prunable layers exclude the classifier") {
  Architecture arch = small_convnet();
  auto layers = prunable_layers(arch);
  CHECK(layers == std::vector<int>{0, 3});

  Architecture celeba = make_template("convnet-celeba-shape", 8);
  CHECK(prunable_layers(celeba).size() == 6);
}

TEST_CASE("filter norms: 3-4-5 and ascending order with stable ties") {
  Architecture arch;
  arch.input = {1, 1, 2};
  arch.class_count = 2;
  arch.layers = {LayerSpec::flatten(), LayerSpec::dense(3),
                 LayerSpec::dense(2), LayerSpec::softmax()};
  // bypass validate: dense(3)->dense(2) is fine shape-wise
  Parameters params = init_parameters(arch, 1);
  params.layers[1].weights.values = {3, 4,       // filter 0: norm 5
                                     1, 0,       // filter 1: norm 1
                                     0.1f, 0.1f};  // filter 2: norm ~0.1414
  auto norms = filter_norms(arch, params, 1);
  REQUIRE(norms.size() == 3);
  CHECK(norms[0].first == 2);
  CHECK(norms[0].second == doctest::Approx(std::sqrt(0.02)));
  CHECK(norms[1].first == 1);
  CHECK(norms[1].second == doctest::Approx(1.0));
  CHECK(norms[2].first == 0);
  CHECK(norms[2].second == doctest::Approx(5.0));

  // all-equal filters keep index order
  params.layers[1].weights.values = {1, 1, 1, 1, 1, 1};
  norms = filter_norms(arch, params, 1);
  CHECK(norms[0].first == 0);
  CHECK(norms[1].first == 1);
  CHECK(norms[2].first == 2);
}

TEST_CASE("zero-vs-remove equivalence on random nets") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Architecture arch = small_convnet();
    Parameters params = init_parameters(arch, 500 + trial);
    int layer = trial % 2 == 0 ? 0 : 3;
    int remove = 1 + trial % 3;

    auto norms = filter_norms(arch, params, layer);
    std::set<int> removed;
    for (int i = 0; i < remove; ++i) removed.insert(norms[i].first);

    Architecture pruned_arch;
    Parameters pruned_params;
    remove_filters(arch, params, layer, remove, pruned_arch, pruned_params);
    CHECK(pruned_arch.layers[layer].filter_count ==
          arch.layers[layer].filter_count - remove);

    Parameters zeroed = zeroed_equivalent(arch, params, layer, removed);
    Tensor x = random_input(rng, arch.input, 3);
    Tensor a = forward(arch, zeroed, x);
    Tensor b = forward(pruned_arch, pruned_params, x);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-5));
  }
}

TEST_CASE("surviving filters keep their original weights and order") {
  Architecture arch = small_convnet();
  Parameters params = init_parameters(arch, 77);
  auto norms = filter_norms(arch, params, 0);
  std::set<int> removed{norms[0].first, norms[1].first};

  Architecture out_arch;
  Parameters out_params;
  remove_filters(arch, params, 0, 2, out_arch, out_params);

  const std::size_t per_filter = params.layers[0].weights.size() / 6;
  std::size_t dst = 0;
  for (int f = 0; f < 6; ++f) {
    if (removed.count(f)) continue;
    for (std::size_t i = 0; i < per_filter; ++i)
      CHECK(out_params.layers[0].weights.values[dst * per_filter + i] ==
            params.layers[0].weights.values[f * per_filter + i]);
    CHECK(out_params.layers[0].bias.values[dst] ==
          params.layers[0].bias.values[f]);
    ++dst;
  }
}

TEST_CASE("prune_layer_to_budget removes the minimum filter count") {
  Architecture arch = small_convnet();
  Parameters params = init_parameters(arch, 9);
  const std::int64_t full = macs(arch);

  for (double frac : {0.95, 0.8, 0.6, 0.4}) {
    double budget = frac * double(full);
    auto cand = prune_layer_to_budget(arch, params, 0, budget);
    if (!cand) continue;
    CHECK(cand->macs <= std::int64_t(budget));
    CHECK(cand->pruned_layer_index == 0);
    // linear-scan oracle: removing one fewer filter must exceed the budget
    if (cand->filters_removed > 0) {
      Architecture weaker_arch;
      Parameters weaker_params;
      remove_filters(arch, params, 0, cand->filters_removed - 1, weaker_arch,
                     weaker_params);
      CHECK(macs(weaker_arch) > std::int64_t(budget));
    }
  }

  // budget >= macs -> identity candidate
  auto ident = prune_layer_to_budget(arch, params, 0, double(full));
  REQUIRE(ident.has_value());
  CHECK(ident->filters_removed == 0);
  CHECK(ident->macs == full);

  // budget requiring zero filters -> infeasible
  auto infeasible = prune_layer_to_budget(arch, params, 0, 1.0);
  CHECK_FALSE(infeasible.has_value());
}

TEST_CASE("generate_candidates yields one candidate per feasible layer") {
  Architecture arch = small_convnet();
  Parameters params = init_parameters(arch, 3);
  const std::int64_t full = macs(arch);

  auto cands = generate_candidates(arch, params, 0.9 * double(full));
  CHECK(cands.size() == 2);
  std::set<int> layers;
  for (const auto& c : cands) {
    layers.insert(c.pruned_layer_index);
    CHECK(c.macs <= std::int64_t(0.9 * double(full)));
    CHECK(c.macs < full);
    CHECK(c.parent_macs == full);
    validate(c.arch);
  }
  CHECK(layers == std::set<int>{0, 3});

  CHECK_THROWS_AS(generate_candidates(arch, params, 1.0), BudgetError);
}

TEST_CASE("width multiplier scales filter counts, classifier untouched") {
  Architecture arch = small_convnet();
  Architecture half = width_multiplier(arch, 0.5);
  CHECK(half.layers[0].filter_count == 3);
  CHECK(half.layers[3].filter_count == 4);
  CHECK(half.layers[6].filter_count == arch.class_count);
  validate(half);

  Architecture same = width_multiplier(arch, 1.0);
  for (std::size_t i = 0; i < arch.layers.size(); ++i)
    CHECK(same.layers[i].filter_count == arch.layers[i].filter_count);

  CHECK_THROWS_AS(width_multiplier(arch, 0.0), ConfigError);
  CHECK_THROWS_AS(width_multiplier(arch, 1.5), ConfigError);
}

TEST_CASE("width multiplier 0.5 quarters a pure conv stack's inner macs") {
  Architecture arch;
  arch.input = {8, 8, 4};
  arch.class_count = 2;
  arch.layers = {LayerSpec::conv2d(8, 3, 3), LayerSpec::conv2d(8, 3, 3),
                 LayerSpec::flatten(), LayerSpec::dense(2),
                 LayerSpec::softmax()};
  validate(arch);
  Architecture half = width_multiplier(arch, 0.5);
  // second conv: both c_in and c_out halve -> 1/4 of the MACs
  std::int64_t conv2_full = 8LL * 8 * 3 * 3 * 8 * 8;
  std::int64_t conv2_half = 8LL * 8 * 3 * 3 * 4 * 4;
  CHECK(conv2_half * 4 == conv2_full);
  CHECK(half.layers[1].filter_count == 4);
}

TEST_CASE("budget schedule follows the geometric recurrence") {
  BudgetSchedule s = budget_schedule(100.0, 5.0, 0.98, 86.0);
  REQUIRE(s.budgets.size() == 3);
  CHECK(s.budgets[0] == doctest::Approx(95.0));
  CHECK(s.budgets[1] == doctest::Approx(90.1));
  CHECK(s.budgets[2] == doctest::Approx(85.298));

  BudgetSchedule flat = budget_schedule(100.0, 5.0, 1.0, 90.0);
  REQUIRE(flat.budgets.size() == 2);
  CHECK(flat.budgets[0] == doctest::Approx(95.0));
  CHECK(flat.budgets[1] == doctest::Approx(90.0));

  for (std::size_t i = 1; i < s.budgets.size(); ++i)
    CHECK(s.budgets[i] < s.budgets[i - 1]);

  // geometric tail bound: 5/(1-0.98) = 250 of total possible reduction
  CHECK_THROWS_AS(budget_schedule(1000.0, 5.0, 0.9, 100.0), BudgetError);
}
