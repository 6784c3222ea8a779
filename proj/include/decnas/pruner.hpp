#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "decnas/nn.hpp"

namespace decnas {

// A model produced by shrinking one layer of its parent; surviving filters
// keep the parent's weights.
struct Candidate {
  int candidate_id = 0;
  int pruned_layer_index = -1;
  int filters_removed = 0;
  Architecture arch;
  Parameters params;
  std::int64_t macs = 0;
  std::int64_t parent_macs = 0;
};

// Conv/dense layer indices eligible for pruning (the final classifier layer
// is protected; pruning it would change the task).
std::vector<int> prunable_layers(const Architecture& arch);

// (filter_index, l2 norm of the filter's weights, bias excluded), sorted
// ascending by norm; ties keep the lower filter index first.
std::vector<std::pair<int, double>> filter_norms(const Architecture& arch,
                                                 const Parameters& params,
                                                 int layer_index);

// Remove the `count` smallest-norm filters from `layer_index`, slicing the
// successor layer's input channels to match. Weights are copied, never
// re-initialized.
void remove_filters(const Architecture& arch, const Parameters& params,
                    int layer_index, int count, Architecture& out_arch,
                    Parameters& out_params);

// nullopt when the budget would require removing every filter.
std::optional<Candidate> prune_layer_to_budget(const Architecture& gm_arch,
                                               const Parameters& gm_params,
                                               int layer_index, double budget);

// One candidate per prunable layer, infeasible layers skipped. Throws
// BudgetError when no layer can meet the budget.
std::vector<Candidate> generate_candidates(const Architecture& gm_arch,
                                           const Parameters& gm_params,
                                           double budget);

// Uniformly scale every prunable layer's filter count; fresh parameters are
// the caller's job (the baseline trains from scratch).
Architecture width_multiplier(const Architecture& arch, double factor);

struct BudgetSchedule {
  double initial = 0.0;   // R_0
  double delta_0 = 0.0;
  double decay = 1.0;
  std::vector<double> budgets;  // R_1 .. R_T, strictly decreasing

  int iterations() const { return static_cast<int>(budgets.size()); }
};

// R_t = R_{t-1} - delta_0 * decay^(t-1); stops at the first R_t <=
// final_budget. Throws BudgetError if the geometric tail can never reach it.
BudgetSchedule budget_schedule(double r0, double delta_0, double decay,
                               double final_budget);

}  // namespace decnas
