#include "decnas/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "decnas/kernels.hpp"

namespace decnas {

const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::Conv2d: return "conv2d";
    case LayerKind::Dense: return "dense";
    case LayerKind::MaxPool2d: return "maxpool2d";
    case LayerKind::Relu: return "relu";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::Softmax: return "softmax";
  }
  return "?";
}

namespace {

std::string layer_tag(std::size_t idx, LayerKind kind) {
  return "layer " + std::to_string(idx) + " (" + layer_kind_name(kind) + ")";
}

struct ConvGeometry {
  int out_h, out_w, pad_top, pad_left;
};

ConvGeometry conv_geometry(const LayerSpec& spec, const Shape3& in) {
  ConvGeometry g{};
  if (spec.padding == Padding::Same) {
    g.out_h = (in.h + spec.stride - 1) / spec.stride;
    g.out_w = (in.w + spec.stride - 1) / spec.stride;
    int pad_h = std::max((g.out_h - 1) * spec.stride + spec.kernel_h - in.h, 0);
    int pad_w = std::max((g.out_w - 1) * spec.stride + spec.kernel_w - in.w, 0);
    g.pad_top = pad_h / 2;
    g.pad_left = pad_w / 2;
  } else {
    g.out_h = (in.h - spec.kernel_h) / spec.stride + 1;
    g.out_w = (in.w - spec.kernel_w) / spec.stride + 1;
  }
  return g;
}

}  // namespace

std::vector<Shape3> propagate_shapes(const Architecture& arch) {
  std::vector<Shape3> out;
  out.reserve(arch.layers.size());
  Shape3 cur = arch.input;
  if (cur.h < 1 || cur.w < 1 || cur.c < 1)
    throw ShapeError("invalid input shape");
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& spec = arch.layers[i];
    switch (spec.kind) {
      case LayerKind::Conv2d: {
        if (spec.filter_count < 1 || spec.kernel_h < 1 || spec.kernel_w < 1 ||
            spec.stride < 1)
          throw ShapeError("bad conv spec at " + layer_tag(i, spec.kind));
        ConvGeometry g = conv_geometry(spec, cur);
        if (g.out_h < 1 || g.out_w < 1)
          throw ShapeError("kernel larger than input at " + layer_tag(i, spec.kind));
        cur = {g.out_h, g.out_w, spec.filter_count};
        break;
      }
      case LayerKind::Dense: {
        if (spec.filter_count < 1)
          throw ShapeError("bad dense spec at " + layer_tag(i, spec.kind));
        cur = {1, 1, spec.filter_count};
        break;
      }
      case LayerKind::MaxPool2d: {
        if (spec.window < 1 || spec.pool_stride < 1)
          throw ShapeError("bad pool spec at " + layer_tag(i, spec.kind));
        int oh = (cur.h - spec.window) / spec.pool_stride + 1;
        int ow = (cur.w - spec.window) / spec.pool_stride + 1;
        if (oh < 1 || ow < 1)
          throw ShapeError("pool window larger than input at " + layer_tag(i, spec.kind));
        cur = {oh, ow, cur.c};
        break;
      }
      case LayerKind::Relu:
        break;
      case LayerKind::Flatten:
        cur = {1, 1, static_cast<int>(cur.count())};
        break;
      case LayerKind::Softmax:
        break;
    }
    out.push_back(cur);
  }
  return out;
}

void validate(const Architecture& arch) {
  auto shapes = propagate_shapes(arch);
  if (arch.class_count < 2) throw ShapeError("class_count must be >= 2");
  if (arch.layers.empty()) throw ShapeError("empty layer list");
  if (arch.layers.back().kind != LayerKind::Softmax)
    throw ShapeError("final layer must be softmax");
  if (static_cast<int>(shapes.back().count()) != arch.class_count)
    throw ShapeError("final output length " +
                     std::to_string(shapes.back().count()) +
                     " != class_count " + std::to_string(arch.class_count));
}

Parameters init_parameters(const Architecture& arch, std::uint64_t seed) {
  auto shapes = propagate_shapes(arch);
  std::mt19937_64 rng(seed);
  Parameters params;
  params.layers.resize(arch.layers.size());
  Shape3 in = arch.input;
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& spec = arch.layers[i];
    LayerParams& lp = params.layers[i];
    if (spec.kind == LayerKind::Conv2d) {
      std::size_t fan_in =
          static_cast<std::size_t>(spec.kernel_h) * spec.kernel_w * in.c;
      float limit = std::sqrt(6.0f / static_cast<float>(fan_in));
      std::uniform_real_distribution<float> dist(-limit, limit);
      lp.weights = Tensor({static_cast<std::size_t>(spec.filter_count),
                           static_cast<std::size_t>(spec.kernel_h),
                           static_cast<std::size_t>(spec.kernel_w),
                           static_cast<std::size_t>(in.c)});
      for (auto& v : lp.weights.values) v = dist(rng);
      lp.bias = Tensor({static_cast<std::size_t>(spec.filter_count)});
      lp.trainable = true;
    } else if (spec.kind == LayerKind::Dense) {
      std::size_t fan_in = in.count();
      float limit = std::sqrt(6.0f / static_cast<float>(fan_in));
      std::uniform_real_distribution<float> dist(-limit, limit);
      lp.weights = Tensor({static_cast<std::size_t>(spec.filter_count), fan_in});
      for (auto& v : lp.weights.values) v = dist(rng);
      lp.bias = Tensor({static_cast<std::size_t>(spec.filter_count)});
      lp.trainable = true;
    }
    in = shapes[i];
  }
  return params;
}

GradientDelta zero_like(const Parameters& params) {
  GradientDelta g;
  g.layers.resize(params.layers.size());
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    if (!params.layers[i].trainable) continue;
    g.layers[i].weights = Tensor(params.layers[i].weights.shape);
    g.layers[i].bias = Tensor(params.layers[i].bias.shape);
    g.layers[i].trainable = true;
  }
  return g;
}

void check_congruent(const Parameters& a, const Parameters& b) {
  if (a.layers.size() != b.layers.size())
    throw ShapeError("parameter stacks differ in layer count");
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (a.layers[i].weights.shape != b.layers[i].weights.shape ||
        a.layers[i].bias.shape != b.layers[i].bias.shape)
      throw ShapeError("parameter shape mismatch at layer " + std::to_string(i));
  }
}

std::size_t scalar_count(const Parameters& params) {
  std::size_t n = 0;
  for (const auto& lp : params.layers) n += lp.weights.size() + lp.bias.size();
  return n;
}

Parameters add_scaled(const Parameters& params, const GradientDelta& delta,
                      float alpha) {
  check_congruent(params, delta);
  Parameters out = params;
  for (std::size_t i = 0; i < out.layers.size(); ++i) {
    kernels::axpy(alpha, delta.layers[i].weights.data(),
                  out.layers[i].weights.data(), out.layers[i].weights.size());
    kernels::axpy(alpha, delta.layers[i].bias.data(),
                  out.layers[i].bias.data(), out.layers[i].bias.size());
  }
  return out;
}

Parameters sgd_step(const Parameters& params, const GradientDelta& grad,
                    float lr) {
  if (lr <= 0.0f) throw ConfigError("learning rate must be positive");
  return add_scaled(params, grad, -lr);
}

namespace {

// Activations after every layer plus bookkeeping needed for backward.
struct ForwardCache {
  std::vector<Tensor> acts;                    // acts[i] = output of layer i
  std::vector<std::vector<std::int32_t>> pool_argmax;  // per maxpool layer slot
  Tensor logits;                               // input of the final softmax
};

void check_finite(const Tensor& t, std::size_t layer_idx, LayerKind kind) {
  for (float v : t.values) {
    if (!std::isfinite(v))
      throw NumericError("non-finite activation at " + layer_tag(layer_idx, kind));
  }
}

void conv_forward(const LayerSpec& spec, const Shape3& in_s, const Shape3& out_s,
                  const LayerParams& lp, const Tensor& in, Tensor& out,
                  std::size_t n) {
  ConvGeometry g = conv_geometry(spec, in_s);
  const std::size_t patch_len =
      static_cast<std::size_t>(spec.kernel_h) * spec.kernel_w * in_s.c;
  std::vector<float> patch(patch_len);
  const std::size_t in_stride = in_s.count();
  const std::size_t out_stride = out_s.count();
  for (std::size_t s = 0; s < n; ++s) {
    const float* ip = in.data() + s * in_stride;
    float* op = out.data() + s * out_stride;
    for (int oy = 0; oy < g.out_h; ++oy) {
      for (int ox = 0; ox < g.out_w; ++ox) {
        // im2col one receptive field, zero-padded rows left as zero
        std::fill(patch.begin(), patch.end(), 0.0f);
        for (int ky = 0; ky < spec.kernel_h; ++ky) {
          int iy = oy * spec.stride - g.pad_top + ky;
          if (iy < 0 || iy >= in_s.h) continue;
          for (int kx = 0; kx < spec.kernel_w; ++kx) {
            int ix = ox * spec.stride - g.pad_left + kx;
            if (ix < 0 || ix >= in_s.w) continue;
            const float* src = ip + (static_cast<std::size_t>(iy) * in_s.w + ix) * in_s.c;
            std::copy(src, src + in_s.c,
                      patch.data() + (static_cast<std::size_t>(ky) * spec.kernel_w + kx) * in_s.c);
          }
        }
        float* orow = op + (static_cast<std::size_t>(oy) * g.out_w + ox) * spec.filter_count;
        for (int f = 0; f < spec.filter_count; ++f) {
          const float* wf = lp.weights.data() + static_cast<std::size_t>(f) * patch_len;
          orow[f] = kernels::dot(wf, patch.data(), patch_len) + lp.bias[f];
        }
      }
    }
  }
}

void conv_backward(const LayerSpec& spec, const Shape3& in_s, const Shape3& out_s,
                   const LayerParams& lp, const Tensor& in, const Tensor& gout,
                   Tensor& gin, LayerParams& glp, std::size_t n) {
  ConvGeometry g = conv_geometry(spec, in_s);
  const std::size_t patch_len =
      static_cast<std::size_t>(spec.kernel_h) * spec.kernel_w * in_s.c;
  std::vector<float> patch(patch_len);
  std::vector<float> dpatch(patch_len);
  const std::size_t in_stride = in_s.count();
  const std::size_t out_stride = out_s.count();
  for (std::size_t s = 0; s < n; ++s) {
    const float* ip = in.data() + s * in_stride;
    float* gip = gin.data() + s * in_stride;
    const float* gop = gout.data() + s * out_stride;
    for (int oy = 0; oy < g.out_h; ++oy) {
      for (int ox = 0; ox < g.out_w; ++ox) {
        std::fill(patch.begin(), patch.end(), 0.0f);
        std::fill(dpatch.begin(), dpatch.end(), 0.0f);
        for (int ky = 0; ky < spec.kernel_h; ++ky) {
          int iy = oy * spec.stride - g.pad_top + ky;
          if (iy < 0 || iy >= in_s.h) continue;
          for (int kx = 0; kx < spec.kernel_w; ++kx) {
            int ix = ox * spec.stride - g.pad_left + kx;
            if (ix < 0 || ix >= in_s.w) continue;
            const float* src = ip + (static_cast<std::size_t>(iy) * in_s.w + ix) * in_s.c;
            std::copy(src, src + in_s.c,
                      patch.data() + (static_cast<std::size_t>(ky) * spec.kernel_w + kx) * in_s.c);
          }
        }
        const float* grow = gop + (static_cast<std::size_t>(oy) * g.out_w + ox) * spec.filter_count;
        for (int f = 0; f < spec.filter_count; ++f) {
          float gf = grow[f];
          if (gf == 0.0f) continue;
          const float* wf = lp.weights.data() + static_cast<std::size_t>(f) * patch_len;
          float* dwf = glp.weights.data() + static_cast<std::size_t>(f) * patch_len;
          kernels::axpy(gf, wf, dpatch.data(), patch_len);
          kernels::axpy(gf, patch.data(), dwf, patch_len);
          glp.bias[f] += gf;
        }
        // scatter dpatch back through the padding window
        for (int ky = 0; ky < spec.kernel_h; ++ky) {
          int iy = oy * spec.stride - g.pad_top + ky;
          if (iy < 0 || iy >= in_s.h) continue;
          for (int kx = 0; kx < spec.kernel_w; ++kx) {
            int ix = ox * spec.stride - g.pad_left + kx;
            if (ix < 0 || ix >= in_s.w) continue;
            float* dst = gip + (static_cast<std::size_t>(iy) * in_s.w + ix) * in_s.c;
            const float* src = dpatch.data() + (static_cast<std::size_t>(ky) * spec.kernel_w + kx) * in_s.c;
            for (int c = 0; c < in_s.c; ++c) dst[c] += src[c];
          }
        }
      }
    }
  }
}

void softmax_rows(const float* logits, float* probs, std::size_t rows,
                  std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const float* lr = logits + r * cols;
    float* pr = probs + r * cols;
    float mx = lr[0];
    for (std::size_t i = 1; i < cols; ++i) mx = std::max(mx, lr[i]);
    float denom = 0.0f;
    for (std::size_t i = 0; i < cols; ++i) {
      pr[i] = std::exp(lr[i] - mx);
      denom += pr[i];
    }
    for (std::size_t i = 0; i < cols; ++i) pr[i] /= denom;
  }
}

Tensor run_forward(const Architecture& arch, const Parameters& params,
                   const Tensor& batch, ForwardCache* cache) {
  if (batch.shape.size() != 4 ||
      static_cast<int>(batch.shape[1]) != arch.input.h ||
      static_cast<int>(batch.shape[2]) != arch.input.w ||
      static_cast<int>(batch.shape[3]) != arch.input.c)
    throw ShapeError("batch shape does not match architecture input");
  if (params.layers.size() != arch.layers.size())
    throw ShapeError("parameter stack does not match architecture");
  auto shapes = propagate_shapes(arch);
  const std::size_t n = batch.shape[0];

  Tensor cur = batch;
  Shape3 in_s = arch.input;
  if (cache) {
    cache->acts.clear();
    cache->pool_argmax.assign(arch.layers.size(), {});
  }
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& spec = arch.layers[i];
    const Shape3& out_s = shapes[i];
    Tensor out({n, static_cast<std::size_t>(out_s.h),
                static_cast<std::size_t>(out_s.w),
                static_cast<std::size_t>(out_s.c)});
    switch (spec.kind) {
      case LayerKind::Conv2d: {
        const LayerParams& lp = params.layers[i];
        std::size_t expect_in = static_cast<std::size_t>(spec.kernel_h) *
                                spec.kernel_w * in_s.c;
        if (lp.weights.size() !=
            expect_in * static_cast<std::size_t>(spec.filter_count))
          throw ShapeError("weight shape mismatch at " + layer_tag(i, spec.kind));
        conv_forward(spec, in_s, out_s, lp, cur, out, n);
        break;
      }
      case LayerKind::Dense: {
        const LayerParams& lp = params.layers[i];
        std::size_t in_len = in_s.count();
        if (lp.weights.shape.size() != 2 || lp.weights.shape[1] != in_len ||
            static_cast<int>(lp.weights.shape[0]) != spec.filter_count)
          throw ShapeError("weight shape mismatch at " + layer_tag(i, spec.kind));
        for (std::size_t s = 0; s < n; ++s) {
          const float* x = cur.data() + s * in_len;
          float* y = out.data() + s * static_cast<std::size_t>(spec.filter_count);
          for (int o = 0; o < spec.filter_count; ++o) {
            const float* wo = lp.weights.data() + static_cast<std::size_t>(o) * in_len;
            y[o] = kernels::dot(wo, x, in_len) + lp.bias[o];
          }
        }
        break;
      }
      case LayerKind::MaxPool2d: {
        std::vector<std::int32_t>* argmax = nullptr;
        if (cache) {
          cache->pool_argmax[i].assign(n * out_s.count(), 0);
          argmax = &cache->pool_argmax[i];
        }
        const std::size_t in_stride = in_s.count();
        const std::size_t out_stride = out_s.count();
        for (std::size_t s = 0; s < n; ++s) {
          const float* ip = cur.data() + s * in_stride;
          float* op = out.data() + s * out_stride;
          for (int oy = 0; oy < out_s.h; ++oy)
            for (int ox = 0; ox < out_s.w; ++ox)
              for (int c = 0; c < out_s.c; ++c) {
                float best = -std::numeric_limits<float>::infinity();
                std::int32_t best_idx = 0;
                for (int ky = 0; ky < spec.window; ++ky)
                  for (int kx = 0; kx < spec.window; ++kx) {
                    int iy = oy * spec.pool_stride + ky;
                    int ix = ox * spec.pool_stride + kx;
                    std::size_t idx = (static_cast<std::size_t>(iy) * in_s.w + ix) * in_s.c + c;
                    if (ip[idx] > best) {
                      best = ip[idx];
                      best_idx = static_cast<std::int32_t>(idx);
                    }
                  }
                std::size_t oidx = (static_cast<std::size_t>(oy) * out_s.w + ox) * out_s.c + c;
                op[oidx] = best;
                if (argmax) (*argmax)[s * out_stride + oidx] = best_idx;
              }
        }
        break;
      }
      case LayerKind::Relu:
        for (std::size_t j = 0; j < cur.size(); ++j)
          out.values[j] = cur.values[j] > 0.0f ? cur.values[j] : 0.0f;
        break;
      case LayerKind::Flatten:
        out.values = cur.values;  // row-major (h,w,c) flattens in place
        break;
      case LayerKind::Softmax:
        if (cache) cache->logits = cur;
        softmax_rows(cur.data(), out.data(), n, shapes[i].count());
        break;
    }
    check_finite(out, i, spec.kind);
    if (cache) cache->acts.push_back(out);
    cur = std::move(out);
    in_s = out_s;
  }
  return cur;
}

}  // namespace

Tensor forward(const Architecture& arch, const Parameters& params,
               const Tensor& batch) {
  return run_forward(arch, params, batch, nullptr);
}

LossAndGrad loss_and_grad(const Architecture& arch, const Parameters& params,
                          const Batch& batch) {
  if (arch.layers.empty() || arch.layers.back().kind != LayerKind::Softmax)
    throw ShapeError("loss requires a final softmax layer");
  const std::size_t n = batch.features.shape[0];
  if (batch.labels.size() != n)
    throw ShapeError("label count does not match batch size");
  for (int y : batch.labels)
    if (y < 0 || y >= arch.class_count)
      throw ShapeError("label out of range");

  ForwardCache cache;
  Tensor probs = run_forward(arch, params, batch.features, &cache);
  auto shapes = propagate_shapes(arch);
  const std::size_t classes = static_cast<std::size_t>(arch.class_count);

  // mean cross-entropy from the logits (stable log-sum-exp)
  double loss = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const float* lr = cache.logits.data() + s * classes;
    float mx = lr[0];
    for (std::size_t i = 1; i < classes; ++i) mx = std::max(mx, lr[i]);
    double lse = 0.0;
    for (std::size_t i = 0; i < classes; ++i) lse += std::exp(double(lr[i]) - mx);
    loss += mx + std::log(lse) - lr[batch.labels[s]];
  }
  loss /= double(n);

  GradientDelta grad = zero_like(params);

  // fused softmax + cross-entropy: dL/dlogits = (p - onehot)/n
  Tensor gcur = probs;
  const float inv_n = 1.0f / static_cast<float>(n);
  for (std::size_t s = 0; s < n; ++s) {
    float* gr = gcur.data() + s * classes;
    gr[batch.labels[s]] -= 1.0f;
    for (std::size_t i = 0; i < classes; ++i) gr[i] *= inv_n;
  }

  // backward from the layer below the softmax down to the input
  for (int li_ = static_cast<int>(arch.layers.size()) - 2; li_ >= 0; --li_) {
    const std::size_t li = static_cast<std::size_t>(li_);
    const LayerSpec& spec = arch.layers[li];
    const Shape3 in_s = li == 0 ? arch.input : shapes[li - 1];
    const Shape3 out_s = shapes[li];
    const Tensor& in_act = li == 0 ? batch.features : cache.acts[li - 1];
    Tensor gin({n, static_cast<std::size_t>(in_s.h),
                static_cast<std::size_t>(in_s.w),
                static_cast<std::size_t>(in_s.c)});
    switch (spec.kind) {
      case LayerKind::Conv2d:
        conv_backward(spec, in_s, out_s, params.layers[li], in_act, gcur, gin,
                      grad.layers[li], n);
        break;
      case LayerKind::Dense: {
        const std::size_t in_len = in_s.count();
        const LayerParams& lp = params.layers[li];
        LayerParams& glp = grad.layers[li];
        for (std::size_t s = 0; s < n; ++s) {
          const float* x = in_act.data() + s * in_len;
          const float* go = gcur.data() + s * static_cast<std::size_t>(spec.filter_count);
          float* gx = gin.data() + s * in_len;
          for (int o = 0; o < spec.filter_count; ++o) {
            float g = go[o];
            if (g == 0.0f) continue;
            kernels::axpy(g, lp.weights.data() + static_cast<std::size_t>(o) * in_len,
                          gx, in_len);
            kernels::axpy(g, x,
                          glp.weights.data() + static_cast<std::size_t>(o) * in_len,
                          in_len);
            glp.bias[o] += g;
          }
        }
        break;
      }
      case LayerKind::MaxPool2d: {
        const auto& argmax = cache.pool_argmax[li];
        const std::size_t in_stride = in_s.count();
        const std::size_t out_stride = out_s.count();
        for (std::size_t s = 0; s < n; ++s)
          for (std::size_t j = 0; j < out_stride; ++j)
            gin.values[s * in_stride + argmax[s * out_stride + j]] +=
                gcur.values[s * out_stride + j];
        break;
      }
      case LayerKind::Relu:
        for (std::size_t j = 0; j < gin.size(); ++j)
          gin.values[j] = in_act.values[j] > 0.0f ? gcur.values[j] : 0.0f;
        break;
      case LayerKind::Flatten:
        gin.values = gcur.values;
        break;
      case LayerKind::Softmax:
        throw ShapeError("softmax is only supported as the final layer");
    }
    gcur = std::move(gin);
  }

  for (std::size_t i = 0; i < grad.layers.size(); ++i) {
    check_finite(grad.layers[i].weights, i, arch.layers[i].kind);
  }
  return {static_cast<float>(loss), std::move(grad)};
}

std::int64_t macs(const Architecture& arch) {
  auto shapes = propagate_shapes(arch);
  std::int64_t total = 0;
  Shape3 in = arch.input;
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& spec = arch.layers[i];
    if (spec.kind == LayerKind::Conv2d) {
      total += std::int64_t(shapes[i].h) * shapes[i].w * spec.kernel_h *
               spec.kernel_w * in.c * spec.filter_count;
    } else if (spec.kind == LayerKind::Dense) {
      total += std::int64_t(in.count()) * spec.filter_count;
    }
    in = shapes[i];
  }
  return total;
}

std::int64_t param_bytes(const Architecture& arch) {
  auto shapes = propagate_shapes(arch);
  std::int64_t scalars = 0;
  Shape3 in = arch.input;
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& spec = arch.layers[i];
    if (spec.kind == LayerKind::Conv2d) {
      scalars += std::int64_t(spec.filter_count) * spec.kernel_h * spec.kernel_w * in.c +
                 spec.filter_count;
    } else if (spec.kind == LayerKind::Dense) {
      scalars += std::int64_t(spec.filter_count) * in.count() + spec.filter_count;
    }
    in = shapes[i];
  }
  return 4 * scalars;
}

EvalResult evaluate(const Architecture& arch, const Parameters& params,
                    const Batch& samples) {
  const std::size_t n = samples.features.shape[0];
  if (n == 0) throw DataError("evaluate called with no samples");
  Tensor probs = forward(arch, params, samples.features);
  const std::size_t classes = static_cast<std::size_t>(arch.class_count);
  int correct = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const float* pr = probs.data() + s * classes;
    std::size_t best = 0;
    for (std::size_t i = 1; i < classes; ++i)
      if (pr[i] > pr[best]) best = i;
    if (static_cast<int>(best) == samples.labels[s]) ++correct;
  }
  return {double(correct) / double(n), static_cast<int>(n)};
}

}  // namespace decnas
