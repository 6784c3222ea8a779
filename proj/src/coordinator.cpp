#include "decnas/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "decnas/kernels.hpp"
#include "decnas/util.hpp"

namespace decnas {

namespace {

// Tasks are mutually independent and write disjoint slots, so any thread
// count produces identical results.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  int nt = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int tid = 0; tid < nt; ++tid) {
    pool.emplace_back([&, tid] {
      try {
        for (std::size_t i = tid; i < n; i += nt) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

Batch make_batch(const std::vector<Sample>& samples,
                 const std::vector<std::size_t>& idx) {
  if (idx.empty()) throw DataError("empty batch");
  const auto& shp = samples[idx[0]].features.shape;
  Batch b;
  b.features = Tensor({idx.size(), shp[0], shp[1], shp[2]});
  b.labels.resize(idx.size());
  const std::size_t stride = samples[idx[0]].features.size();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::copy(samples[idx[i]].features.values.begin(),
              samples[idx[i]].features.values.end(),
              b.features.values.begin() + i * stride);
    b.labels[i] = samples[idx[i]].label;
  }
  return b;
}

Batch make_batch_all(const std::vector<Sample>& samples) {
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), 0);
  return make_batch(samples, idx);
}

}  // namespace

int RoundSchedule::max_rounds() const {
  int mx = 1;
  for (const auto& t : tiers) mx = std::max(mx, t.rounds);
  return mx;
}

int dynamic_round_number(int t, const RoundSchedule& schedule, bool enabled) {
  if (t < 1) throw ConfigError("iteration index must be >= 1");
  if (schedule.tiers.empty()) throw ConfigError("empty round schedule");
  if (!enabled) return schedule.max_rounds();
  for (const auto& tier : schedule.tiers) {
    // a gap before this tier falls into it
    if (tier.last_iter < 0 || t <= tier.last_iter) return tier.rounds;
  }
  return schedule.tiers.back().rounds;
}

ClientReport client_operation(const Architecture& arch, const Parameters& params,
                              const ClientDataset& client, int epochs, float lr,
                              int batch_size, std::uint64_t task_seed) {
  if (client.train.empty() || client.validation.empty())
    throw DataError("client " + std::to_string(client.client_id) +
                    " has empty shards");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");

  const std::size_t n = client.train.size();
  const std::size_t bs = std::min<std::size_t>(std::max(1, batch_size), n);
  auto rng = make_rng(task_seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  Parameters cur = params;
  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += bs) {
      std::vector<std::size_t> idx(order.begin() + start,
                                   order.begin() + std::min(start + bs, n));
      auto lg = loss_and_grad(arch, cur, make_batch(client.train, idx));
      cur = add_scaled(cur, lg.grad, -lr);
    }
  }

  ClientReport rep;
  rep.client_id = client.client_id;
  rep.train_num = static_cast<int>(n);
  rep.test_num = static_cast<int>(client.validation.size());
  auto eval = evaluate(arch, cur, make_batch_all(client.validation));
  rep.acc = eval.accuracy;
  rep.grad = add_scaled(cur, params, -1.0f);  // parameter delta
  return rep;
}

double fuse_accuracy(const std::vector<ClientReport>& reports) {
  if (reports.empty()) throw DataError("fuse_accuracy: no reports");
  double num = 0.0;
  std::int64_t denom = 0;
  for (const auto& r : reports) {
    num += double(r.test_num) * r.acc;
    denom += r.test_num;
  }
  if (denom == 0) throw DataError("fuse_accuracy: zero total test_num");
  return num / double(denom);
}

GradientDelta fuse_gradients(const std::vector<ClientReport>& reports) {
  if (reports.empty()) throw DataError("fuse_gradients: no reports");
  std::vector<const ClientReport*> sorted;
  sorted.reserve(reports.size());
  for (const auto& r : reports) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->client_id < b->client_id;
  });

  std::int64_t total = 0;
  for (const auto* r : sorted) total += r->train_num;
  if (total == 0) throw DataError("fuse_gradients: zero total train_num");

  GradientDelta fused = zero_like(sorted.front()->grad);
  for (const auto* r : sorted) {
    check_congruent(fused, r->grad);
    float w = float(double(r->train_num) / double(total));
    for (std::size_t i = 0; i < fused.layers.size(); ++i) {
      kernels::axpy(w, r->grad.layers[i].weights.data(),
                    fused.layers[i].weights.data(),
                    fused.layers[i].weights.size());
      kernels::axpy(w, r->grad.layers[i].bias.data(),
                    fused.layers[i].bias.data(), fused.layers[i].bias.size());
    }
  }
  return fused;
}

double acc_degradation(double prev_gm_acc, std::int64_t prev_gm_macs,
                       double candidate_acc, std::int64_t candidate_macs) {
  if (prev_gm_macs <= candidate_macs)
    throw NumericError("degradation ratio needs a positive resource reduction");
  return (prev_gm_acc - candidate_acc) /
         double(prev_gm_macs - candidate_macs);
}

std::vector<int> drop_candidates(std::vector<CandidateState>& states,
                                 double alpha, int k_original, int round) {
  if (alpha < 0.0 || alpha > 100.0)
    throw ConfigError("drop ratio must be in [0, 100]");
  std::vector<CandidateState*> alive;
  for (auto& s : states)
    if (s.alive) alive.push_back(&s);
  if (alive.empty()) throw DataError("no alive candidates");

  int drop_num =
      std::min(static_cast<int>(std::ceil(alpha / 100.0 * k_original)),
               static_cast<int>(alive.size()) - 1);
  if (drop_num <= 0) return {};

  // largest degradation goes first; ties keep the lower candidate id
  std::sort(alive.begin(), alive.end(), [](const auto* a, const auto* b) {
    if (a->degradation != b->degradation) return a->degradation > b->degradation;
    return a->candidate.candidate_id > b->candidate.candidate_id;
  });
  std::vector<int> dropped;
  for (int i = 0; i < drop_num; ++i) {
    alive[i]->alive = false;
    alive[i]->dropped_in_round = round;
    dropped.push_back(alive[i]->candidate.candidate_id);
  }
  return dropped;
}

namespace {

struct TrainTask {
  std::size_t state_idx;
  std::size_t fed_client_idx;
};

std::unordered_map<int, std::size_t> client_index(const Federation& fed) {
  std::unordered_map<int, std::size_t> map;
  for (std::size_t i = 0; i < fed.clients.size(); ++i)
    map[fed.clients[i].client_id] = i;
  return map;
}

}  // namespace

void cloud_one_round(std::vector<CandidateState>& states,
                     const Partition& partition, const Federation& fed,
                     const SearchConfig& config, int t, int round,
                     double prev_gm_acc, std::int64_t prev_gm_macs,
                     CostLedger& ledger) {
  auto idx_of = client_index(fed);
  std::vector<TrainTask> tasks;
  for (std::size_t si = 0; si < states.size(); ++si) {
    if (!states[si].alive) continue;
    if (states[si].assigned_group < 0)
      throw ConfigError("alive candidate without an assigned group");
    const Group& g = partition.groups[states[si].assigned_group];
    std::vector<int> ids = g.client_ids;
    std::sort(ids.begin(), ids.end());
    for (int cid : ids) tasks.push_back({si, idx_of.at(cid)});
  }

  std::vector<ClientReport> reports(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const auto& task = tasks[i];
    const CandidateState& st = states[task.state_idx];
    const ClientDataset& client = fed.clients[task.fed_client_idx];
    std::uint64_t task_seed = seed_combine(
        config.seed, std::uint64_t(t), std::uint64_t(round),
        std::uint64_t(st.candidate.candidate_id), std::uint64_t(client.client_id));
    reports[i] = client_operation(st.candidate.arch, st.candidate.params, client,
                                  config.epochs, config.lr, config.batch_size,
                                  task_seed);
  });

  // accuracy fusion first, so dropped candidates never upload gradients
  std::vector<std::vector<ClientReport>> per_state(states.size());
  for (std::size_t i = 0; i < tasks.size(); ++i)
    per_state[tasks[i].state_idx].push_back(std::move(reports[i]));
  for (std::size_t si = 0; si < states.size(); ++si) {
    if (!states[si].alive) continue;
    double fused = fuse_accuracy(per_state[si]);
    states[si].fused_acc_history.push_back(fused);
    if (states[si].candidate.macs < prev_gm_macs) {
      states[si].degradation =
          acc_degradation(prev_gm_acc, prev_gm_macs, fused,
                          states[si].candidate.macs);
    } else {
      // identity candidate (the parent already met the budget): no resource
      // reduction, so the ratio degenerates — free unless accuracy fell
      states[si].degradation =
          fused < prev_gm_acc ? std::numeric_limits<double>::infinity() : 0.0;
    }
  }

  std::vector<int> dropped;
  if (config.early_drop_enabled)
    dropped = drop_candidates(states, config.drop_alpha,
                              static_cast<int>(states.size()), round);

  for (std::size_t si = 0; si < states.size(); ++si) {
    if (per_state[si].empty()) continue;
    const CandidateState& st = states[si];
    bool dropped_now =
        std::find(dropped.begin(), dropped.end(), st.candidate.candidate_id) !=
        dropped.end();
    std::int64_t bytes = param_bytes(st.candidate.arch);
    std::int64_t m = macs(st.candidate.arch);
    for (const auto& rep : per_state[si])
      ledger.record_client_round(t, round, st.candidate.candidate_id,
                                 rep.client_id, bytes, m, rep.train_num,
                                 rep.test_num, config.epochs, dropped_now);
  }

  // model fusion for the survivors
  for (std::size_t si = 0; si < states.size(); ++si) {
    if (!states[si].alive || per_state[si].empty()) continue;
    GradientDelta fused = fuse_gradients(per_state[si]);
    states[si].candidate.params =
        add_scaled(states[si].candidate.params, fused, 1.0f);
  }
}

namespace {

Partition all_clients_partition(const Federation& fed) {
  Partition p;
  p.r = 1.0;
  Group g;
  g.group_id = 0;
  for (const auto& c : fed.clients) {
    g.client_ids.push_back(c.client_id);
    g.d += c.total_samples();
  }
  g.aggregate_v = federation_distribution(fed);
  p.groups.push_back(std::move(g));
  return p;
}

// Evaluation-only pass of the seed model: every client reports validation
// accuracy so the first iteration has a degradation anchor.
double initial_fused_accuracy(const Architecture& arch, const Parameters& params,
                              const Federation& fed, const SearchConfig& config,
                              CostLedger& ledger) {
  std::vector<ClientReport> reports(fed.clients.size());
  parallel_for(fed.clients.size(), config.threads, [&](std::size_t i) {
    const ClientDataset& client = fed.clients[i];
    ClientReport rep;
    rep.client_id = client.client_id;
    rep.train_num = 0;
    rep.test_num = client.test_num();
    rep.acc = evaluate(arch, params, make_batch_all(client.validation)).accuracy;
    reports[i] = std::move(rep);
  });
  std::int64_t bytes = param_bytes(arch);
  std::int64_t m = macs(arch);
  for (const auto& rep : reports)
    ledger.record_client_round(0, 0, -1, rep.client_id, bytes, m, 0,
                               rep.test_num, 0, /*dropped=*/true);
  return fuse_accuracy(reports);
}

}  // namespace

SearchResult run_search(const SearchConfig& config, const Federation& fed,
                        const Architecture& gm0_arch,
                        const Parameters& gm0_params) {
  validate(gm0_arch);
  SearchResult result;
  const std::int64_t gm0_macs = macs(gm0_arch);
  BudgetSchedule sched =
      budget_schedule(double(gm0_macs), config.delta_0, config.decay,
                      config.final_budget);
  if (sched.budgets.empty()) return result;

  Architecture gm_arch = gm0_arch;
  Parameters gm_params = gm0_params;
  double prev_acc =
      initial_fused_accuracy(gm_arch, gm_params, fed, config, result.ledger);
  std::int64_t prev_macs = gm0_macs;

  for (int t = 1; t <= sched.iterations(); ++t) {
    const double budget = sched.budgets[t - 1];

    Partition partition;
    if (config.grouping_enabled) {
      partition = greedy_partition(fed, config.group_count, config.balance_r);
      for (const auto& c : fed.clients)
        result.ledger.record_distribution_upload(t, c.client_id,
                                                 fed.class_count);
    } else {
      partition = all_clients_partition(fed);
    }

    auto candidates = generate_candidates(gm_arch, gm_params, budget);
    std::vector<CandidateState> states;
    states.reserve(candidates.size());
    for (auto& c : candidates) states.push_back({std::move(c)});

    std::vector<int> ids;
    for (const auto& s : states) ids.push_back(s.candidate.candidate_id);
    auto assignments = schedule_candidates(
        ids, static_cast<int>(partition.groups.size()),
        seed_combine(config.seed, 0xa551ULL, std::uint64_t(t)));
    for (const auto& a : assignments)
      states[a.candidate_id].assigned_group = a.group_id;

    const int rounds = dynamic_round_number(t, config.round_schedule,
                                            config.dynamic_rounds_enabled);
    IterationReport report;
    report.iteration = t;
    report.budget = budget;
    report.rounds = rounds;
    report.candidate_count = static_cast<int>(states.size());

    for (int round = 1; round <= rounds; ++round) {
      cloud_one_round(states, partition, fed, config, t, round, prev_acc,
                      prev_macs, result.ledger);
      for (const auto& s : states)
        if (s.dropped_in_round == round)
          report.drop_log.emplace_back(round, s.candidate.candidate_id);
    }

    // GM_t = alive candidate with the smallest degradation ratio
    const CandidateState* best = nullptr;
    for (const auto& s : states) {
      if (!s.alive) continue;
      if (!best || s.degradation < best->degradation ||
          (s.degradation == best->degradation &&
           s.candidate.candidate_id < best->candidate.candidate_id))
        best = &s;
    }
    if (!best) throw DataError("no surviving candidate");

    gm_arch = best->candidate.arch;
    gm_params = best->candidate.params;
    prev_acc = best->fused_acc_history.back();
    prev_macs = best->candidate.macs;

    report.chosen_layer_index = best->candidate.pruned_layer_index;
    report.chosen_candidate_id = best->candidate.candidate_id;
    report.fused_accuracy = prev_acc;
    report.macs = prev_macs;
    result.reports.push_back(std::move(report));
    result.gms.push_back({gm_arch, gm_params});
  }
  return result;
}

Parameters fl_tune(const Architecture& arch, const Parameters& params,
                   const Federation& fed, int rounds, int clients_per_round,
                   int epochs, float lr, int batch_size, std::uint64_t seed,
                   int threads, CostLedger* ledger) {
  if (rounds < 1) throw ConfigError("fl_tune rounds must be >= 1");
  const int k = std::min<int>(std::max(1, clients_per_round),
                              static_cast<int>(fed.clients.size()));
  Parameters cur = params;
  const std::int64_t bytes = param_bytes(arch);
  const std::int64_t m = macs(arch);
  for (int round = 1; round <= rounds; ++round) {
    auto rng = make_rng(seed_combine(seed, 0xf17eULL, std::uint64_t(round)));
    std::vector<std::size_t> order(fed.clients.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(k);
    std::sort(order.begin(), order.end());

    std::vector<ClientReport> reports(k);
    parallel_for(order.size(), threads, [&](std::size_t i) {
      const ClientDataset& client = fed.clients[order[i]];
      std::uint64_t task_seed =
          seed_combine(seed, 0xf17eULL, std::uint64_t(round),
                       std::uint64_t(client.client_id));
      reports[i] = client_operation(arch, cur, client, epochs, lr, batch_size,
                                    task_seed);
    });
    if (ledger) {
      for (const auto& rep : reports)
        ledger->record_client_round(-1, round, -1, rep.client_id, bytes, m,
                                    rep.train_num, rep.test_num, epochs, false);
    }
    cur = add_scaled(cur, fuse_gradients(reports), 1.0f);
  }
  return cur;
}

}  // namespace decnas
