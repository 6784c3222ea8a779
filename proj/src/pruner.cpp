#include "decnas/pruner.hpp"

#include <algorithm>
#include <cmath>

#include "decnas/kernels.hpp"

namespace decnas {

namespace {

bool is_trainable_kind(LayerKind k) {
  return k == LayerKind::Conv2d || k == LayerKind::Dense;
}

int next_trainable_layer(const Architecture& arch, int after) {
  for (std::size_t i = after + 1; i < arch.layers.size(); ++i)
    if (is_trainable_kind(arch.layers[i].kind)) return static_cast<int>(i);
  return -1;
}

}  // namespace

std::vector<int> prunable_layers(const Architecture& arch) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < arch.layers.size(); ++i)
    if (is_trainable_kind(arch.layers[i].kind)) idx.push_back(static_cast<int>(i));
  if (!idx.empty()) idx.pop_back();  // protect the classifier
  return idx;
}

std::vector<std::pair<int, double>> filter_norms(const Architecture& arch,
                                                 const Parameters& params,
                                                 int layer_index) {
  if (layer_index < 0 || layer_index >= static_cast<int>(arch.layers.size()) ||
      !is_trainable_kind(arch.layers[layer_index].kind))
    throw ShapeError("filter_norms: layer " + std::to_string(layer_index) +
                     " is not prunable");
  const Tensor& w = params.layers[layer_index].weights;
  const int filters = static_cast<int>(w.shape[0]);
  const std::size_t per_filter = w.size() / filters;
  std::vector<std::pair<int, double>> norms(filters);
  for (int f = 0; f < filters; ++f) {
    float sq = kernels::sum_squares(w.data() + f * per_filter, per_filter);
    norms[f] = {f, std::sqrt(double(sq))};
  }
  std::stable_sort(norms.begin(), norms.end(), [](const auto& a, const auto& b) {
    return a.second < b.second;
  });
  return norms;
}

void remove_filters(const Architecture& arch, const Parameters& params,
                    int layer_index, int count, Architecture& out_arch,
                    Parameters& out_params) {
  out_arch = arch;
  out_params = params;
  if (count == 0) return;
  auto norms = filter_norms(arch, params, layer_index);
  const int filters = static_cast<int>(norms.size());
  if (count < 0 || count >= filters)
    throw ShapeError("cannot remove " + std::to_string(count) + " of " +
                     std::to_string(filters) + " filters");

  std::vector<bool> keep(filters, true);
  for (int i = 0; i < count; ++i) keep[norms[i].first] = false;
  std::vector<int> kept;
  for (int f = 0; f < filters; ++f)
    if (keep[f]) kept.push_back(f);

  // shrink the pruned layer itself
  const Tensor& w = params.layers[layer_index].weights;
  const std::size_t per_filter = w.size() / filters;
  out_arch.layers[layer_index].filter_count = static_cast<int>(kept.size());
  Tensor nw(w.shape);
  nw.shape[0] = kept.size();
  nw.values.resize(kept.size() * per_filter);
  Tensor nb({kept.size()});
  for (std::size_t i = 0; i < kept.size(); ++i) {
    std::copy_n(w.data() + std::size_t(kept[i]) * per_filter, per_filter,
                nw.data() + i * per_filter);
    nb[i] = params.layers[layer_index].bias[kept[i]];
  }
  out_params.layers[layer_index].weights = std::move(nw);
  out_params.layers[layer_index].bias = std::move(nb);

  // slice the successor's input channels to match
  int succ = next_trainable_layer(arch, layer_index);
  if (succ < 0) {
    validate(out_arch);
    return;
  }
  const Tensor& sw = params.layers[succ].weights;
  if (arch.layers[succ].kind == LayerKind::Conv2d) {
    // (c_out, k_h, k_w, c_in): drop the removed c_in slices
    const std::size_t c_out = sw.shape[0], kh = sw.shape[1], kw = sw.shape[2];
    Tensor nsw({c_out, kh, kw, kept.size()});
    for (std::size_t o = 0; o < c_out * kh * kw; ++o)
      for (std::size_t i = 0; i < kept.size(); ++i)
        nsw.values[o * kept.size() + i] = sw.values[o * filters + kept[i]];
    out_params.layers[succ].weights = std::move(nsw);
  } else {
    // dense after (possibly) pooling/flatten: flattened column j belongs to
    // channel j % c_old
    const std::size_t out_units = sw.shape[0];
    const std::size_t in_old = sw.shape[1];
    std::vector<std::size_t> kept_cols;
    kept_cols.reserve(in_old / filters * kept.size());
    for (std::size_t j = 0; j < in_old; ++j)
      if (keep[j % filters]) kept_cols.push_back(j);
    Tensor nsw({out_units, kept_cols.size()});
    for (std::size_t o = 0; o < out_units; ++o)
      for (std::size_t i = 0; i < kept_cols.size(); ++i)
        nsw.values[o * kept_cols.size() + i] = sw.values[o * in_old + kept_cols[i]];
    out_params.layers[succ].weights = std::move(nsw);
  }
  validate(out_arch);
}

std::optional<Candidate> prune_layer_to_budget(const Architecture& gm_arch,
                                               const Parameters& gm_params,
                                               int layer_index, double budget) {
  if (layer_index < 0 || layer_index >= static_cast<int>(gm_arch.layers.size()) ||
      !is_trainable_kind(gm_arch.layers[layer_index].kind))
    throw ShapeError("prune_layer_to_budget: invalid layer index");

  const std::int64_t parent = macs(gm_arch);
  const int filters = gm_arch.layers[layer_index].filter_count;

  // smallest removal count whose MACs fit the budget; MACs are monotone in
  // the filter count so a linear scan suffices
  int removal = -1;
  for (int m = 0; m < filters; ++m) {
    Architecture probe = gm_arch;
    probe.layers[layer_index].filter_count = filters - m;
    if (double(macs(probe)) <= budget) {
      removal = m;
      break;
    }
  }
  if (removal < 0) return std::nullopt;

  Candidate cand;
  cand.pruned_layer_index = layer_index;
  cand.filters_removed = removal;
  remove_filters(gm_arch, gm_params, layer_index, removal, cand.arch, cand.params);
  cand.macs = macs(cand.arch);
  cand.parent_macs = parent;
  return cand;
}

std::vector<Candidate> generate_candidates(const Architecture& gm_arch,
                                           const Parameters& gm_params,
                                           double budget) {
  std::vector<Candidate> out;
  for (int li : prunable_layers(gm_arch)) {
    auto cand = prune_layer_to_budget(gm_arch, gm_params, li, budget);
    if (!cand) continue;
    cand->candidate_id = static_cast<int>(out.size());
    out.push_back(std::move(*cand));
  }
  if (out.empty())
    throw BudgetError("no layer can be pruned to meet the budget");
  return out;
}

Architecture width_multiplier(const Architecture& arch, double factor) {
  if (!(factor > 0.0) || factor > 1.0)
    throw ConfigError("width multiplier factor must be in (0, 1]");
  Architecture out = arch;
  for (int li : prunable_layers(arch)) {
    int scaled = static_cast<int>(std::lround(arch.layers[li].filter_count * factor));
    out.layers[li].filter_count = std::max(1, scaled);
  }
  validate(out);
  return out;
}

BudgetSchedule budget_schedule(double r0, double delta_0, double decay,
                               double final_budget) {
  if (!(decay > 0.0) || decay > 1.0)
    throw ConfigError("decay must be in (0, 1]");
  if (!(delta_0 > 0.0) || delta_0 >= r0)
    throw ConfigError("delta_0 must be in (0, R_0)");

  BudgetSchedule sched{r0, delta_0, decay, {}};
  if (final_budget >= r0) return sched;  // nothing to tighten

  if (decay < 1.0) {
    double limit = r0 - delta_0 / (1.0 - decay);
    if (final_budget <= limit)
      throw BudgetError("budget schedule never reaches the final budget");
  }

  double r = r0;
  double step = delta_0;
  while (true) {
    r -= step;
    sched.budgets.push_back(r);
    if (r <= final_budget) break;
    step *= decay;
  }
  return sched;
}

}  // namespace decnas
