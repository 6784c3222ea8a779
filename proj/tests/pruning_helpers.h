#pragma once

// Pruning helpers shared by the unit and acceptance suites.

#include <algorithm>
#include <set>

#include "decnas/nn.hpp"

namespace testutil {

// Zero out the weights (and bias) of the `removed` filters of `layer_index`
// plus the successor weights reading from them — the logits must match the
// physically pruned model exactly.
inline decnas::Parameters zeroed_equivalent(const decnas::Architecture& arch,
                                            decnas::Parameters params,
                                            int layer_index,
                                            const std::set<int>& removed) {
  using namespace decnas;
  LayerParams& lp = params.layers[layer_index];
  const LayerSpec& spec = arch.layers[layer_index];
  const int filters = spec.filter_count;
  const std::size_t per_filter = lp.weights.size() / filters;
  for (int f : removed) {
    std::fill_n(lp.weights.values.begin() + f * per_filter, per_filter, 0.0f);
    lp.bias.values[f] = 0.0f;
  }
  // successor trainable layer: zero the input slices fed by removed filters
  for (std::size_t j = layer_index + 1; j < arch.layers.size(); ++j) {
    if (!params.layers[j].trainable) continue;
    LayerParams& succ = params.layers[j];
    const LayerSpec& sspec = arch.layers[j];
    if (sspec.kind == LayerKind::Conv2d) {
      // (c_out, kh, kw, c_in): zero c_in positions in `removed`
      const int c_in = filters;
      const std::size_t spatial = succ.weights.size() /
                                  (std::size_t(sspec.filter_count) * c_in);
      for (std::size_t o = 0; o < std::size_t(sspec.filter_count); ++o)
        for (std::size_t s = 0; s < spatial; ++s)
          for (int f : removed)
            succ.weights.values[(o * spatial + s) * c_in + f] = 0.0f;
    } else {
      // dense after flatten: columns j with j % filters in `removed`
      const std::size_t in = succ.weights.size() / sspec.filter_count;
      for (std::size_t o = 0; o < std::size_t(sspec.filter_count); ++o)
        for (std::size_t i = 0; i < in; ++i)
          if (removed.count(static_cast<int>(i % filters)))
            succ.weights.values[o * in + i] = 0.0f;
    }
    break;
  }
  return params;
}

}  // namespace testutil
