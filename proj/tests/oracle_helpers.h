#pragma once

// Gradient-oracle helpers shared by the unit and acceptance suites: an
// independent double-precision forward pass plus a finite-difference
// comparison against the library's analytic gradients.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "decnas/nn.hpp"

namespace testutil {

// Random small net covering every layer kind, < 500 parameters.
inline decnas::Architecture random_small_arch(std::mt19937_64& rng) {
  using namespace decnas;
  std::uniform_int_distribution<int> f1(2, 4), f2(2, 3), cls(2, 4);
  Architecture arch;
  arch.input = {6, 6, 2};
  arch.class_count = cls(rng);
  arch.layers = {
      LayerSpec::conv2d(f1(rng), 3, 3), LayerSpec::relu(),
      LayerSpec::maxpool2d(2),
      LayerSpec::conv2d(f2(rng), 3, 3), LayerSpec::relu(),
      LayerSpec::flatten(),
      LayerSpec::dense(arch.class_count),
      LayerSpec::softmax(),
  };
  return arch;
}

inline decnas::Batch random_batch(std::mt19937_64& rng, decnas::Shape3 in,
                                  int n, int classes) {
  decnas::Batch b;
  b.features = decnas::Tensor({std::size_t(n), std::size_t(in.h),
                               std::size_t(in.w), std::size_t(in.c)});
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (auto& v : b.features.values) v = dist(rng);
  std::uniform_int_distribution<int> lab(0, classes - 1);
  b.labels.resize(n);
  for (auto& l : b.labels) l = lab(rng);
  return b;
}

// Independent double-precision reference forward pass: same layer semantics
// as the library, written from the layer definitions rather than shared code.
// Returns the mean cross-entropy over the batch.
inline double reference_loss(const decnas::Architecture& arch,
                             const std::vector<std::vector<double>>& weights,
                             const std::vector<std::vector<double>>& biases,
                             const decnas::Batch& batch) {
  using namespace decnas;
  const int n = static_cast<int>(batch.features.shape[0]);
  double total = 0.0;
  for (int s = 0; s < n; ++s) {
    int h = arch.input.h, w = arch.input.w, c = arch.input.c;
    std::vector<double> act(std::size_t(h) * w * c);
    const std::size_t off = std::size_t(s) * act.size();
    for (std::size_t i = 0; i < act.size(); ++i)
      act[i] = batch.features.values[off + i];

    for (std::size_t li = 0; li < arch.layers.size(); ++li) {
      const LayerSpec& sp = arch.layers[li];
      switch (sp.kind) {
        case LayerKind::Conv2d: {
          int oh, ow, pt = 0, pl = 0;
          if (sp.padding == Padding::Same) {
            oh = (h + sp.stride - 1) / sp.stride;
            ow = (w + sp.stride - 1) / sp.stride;
            pt = std::max((oh - 1) * sp.stride + sp.kernel_h - h, 0) / 2;
            pl = std::max((ow - 1) * sp.stride + sp.kernel_w - w, 0) / 2;
          } else {
            oh = (h - sp.kernel_h) / sp.stride + 1;
            ow = (w - sp.kernel_w) / sp.stride + 1;
          }
          std::vector<double> next(std::size_t(oh) * ow * sp.filter_count);
          for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x)
              for (int f = 0; f < sp.filter_count; ++f) {
                double acc = biases[li][f];
                for (int ky = 0; ky < sp.kernel_h; ++ky)
                  for (int kx = 0; kx < sp.kernel_w; ++kx) {
                    int iy = y * sp.stride + ky - pt;
                    int ix = x * sp.stride + kx - pl;
                    if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                    for (int ic = 0; ic < c; ++ic)
                      acc += weights[li][((std::size_t(f) * sp.kernel_h + ky) *
                                              sp.kernel_w + kx) * c + ic] *
                             act[(std::size_t(iy) * w + ix) * c + ic];
                  }
                next[(std::size_t(y) * ow + x) * sp.filter_count + f] = acc;
              }
          act = std::move(next);
          h = oh; w = ow; c = sp.filter_count;
          break;
        }
        case LayerKind::Dense: {
          const int in = h * w * c;
          std::vector<double> next(sp.filter_count);
          for (int o = 0; o < sp.filter_count; ++o) {
            double acc = biases[li][o];
            for (int i = 0; i < in; ++i)
              acc += weights[li][std::size_t(o) * in + i] * act[i];
            next[o] = acc;
          }
          act = std::move(next);
          h = w = 1; c = sp.filter_count;
          break;
        }
        case LayerKind::MaxPool2d: {
          int oh = (h - sp.window) / sp.pool_stride + 1;
          int ow = (w - sp.window) / sp.pool_stride + 1;
          std::vector<double> next(std::size_t(oh) * ow * c);
          for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x)
              for (int ch = 0; ch < c; ++ch) {
                double m = -1e300;
                for (int ky = 0; ky < sp.window; ++ky)
                  for (int kx = 0; kx < sp.window; ++kx) {
                    int iy = y * sp.pool_stride + ky, ix = x * sp.pool_stride + kx;
                    m = std::max(m, act[(std::size_t(iy) * w + ix) * c + ch]);
                  }
                next[(std::size_t(y) * ow + x) * c + ch] = m;
              }
          act = std::move(next);
          h = oh; w = ow;
          break;
        }
        case LayerKind::Relu:
          for (auto& v : act) v = std::max(v, 0.0);
          break;
        case LayerKind::Flatten:
          h = w = 1; c = static_cast<int>(act.size());
          break;
        case LayerKind::Softmax: {
          double m = *std::max_element(act.begin(), act.end());
          double z = 0.0;
          for (auto& v : act) { v = std::exp(v - m); z += v; }
          for (auto& v : act) v /= z;
          break;
        }
      }
    }
    total += -std::log(act[batch.labels[s]]);
  }
  return total / n;
}

// Max relative error between the library's analytic gradient and central
// finite differences of the double-precision reference loss, over every
// trainable scalar. relu/maxpool kinks are detected by step-halving
// disagreement and skipped (counted in `skipped`).
inline double max_fd_error(const decnas::Architecture& arch,
                           const decnas::Parameters& params,
                           const decnas::Batch& batch, std::size_t& checked,
                           std::size_t& skipped) {
  using namespace decnas;
  auto analytic = loss_and_grad(arch, params, batch).grad;

  std::vector<std::vector<double>> weights(params.layers.size());
  std::vector<std::vector<double>> biases(params.layers.size());
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    if (!params.layers[li].trainable) continue;
    weights[li].assign(params.layers[li].weights.values.begin(),
                       params.layers[li].weights.values.end());
    biases[li].assign(params.layers[li].bias.values.begin(),
                      params.layers[li].bias.values.end());
  }

  const double h = 1e-5;
  double worst = 0.0;
  checked = skipped = 0;
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    if (!params.layers[li].trainable) continue;
    for (int part = 0; part < 2; ++part) {
      std::vector<double>& t = part == 0 ? weights[li] : biases[li];
      const Tensor& g = part == 0 ? analytic.layers[li].weights
                                  : analytic.layers[li].bias;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double orig = t[i];
        auto fd_at = [&](double step) {
          t[i] = orig + step;
          double lp = reference_loss(arch, weights, biases, batch);
          t[i] = orig - step;
          double lm = reference_loss(arch, weights, biases, batch);
          t[i] = orig;
          return (lp - lm) / (2.0 * step);
        };
        double fd = fd_at(h), fd_half = fd_at(h / 2);
        if (std::abs(fd - fd_half) > 1e-7 * std::max(1.0, std::abs(fd_half))) {
          ++skipped;
          continue;
        }
        ++checked;
        double denom = std::max({1.0, std::abs(fd), std::abs(double(g[i]))});
        worst = std::max(worst, std::abs(fd - g[i]) / denom);
      }
    }
  }
  return worst;
}

}  // namespace testutil
