#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decnas/tensor.hpp"

namespace decnas {

enum class LayerKind { Conv2d, Dense, MaxPool2d, Relu, Flatten, Softmax };

enum class Padding { Same, Valid };

struct LayerSpec {
  LayerKind kind = LayerKind::Relu;
  // conv2d
  int kernel_h = 0;
  int kernel_w = 0;
  int stride = 1;
  Padding padding = Padding::Same;
  int filter_count = 0;  // conv2d output channels / dense units
  // maxpool2d
  int window = 0;
  int pool_stride = 0;  // 0 means window

  static LayerSpec conv2d(int filters, int kh, int kw, int stride = 1,
                          Padding pad = Padding::Same) {
    LayerSpec s;
    s.kind = LayerKind::Conv2d;
    s.filter_count = filters;
    s.kernel_h = kh;
    s.kernel_w = kw;
    s.stride = stride;
    s.padding = pad;
    return s;
  }
  static LayerSpec dense(int units) {
    LayerSpec s;
    s.kind = LayerKind::Dense;
    s.filter_count = units;
    return s;
  }
  static LayerSpec maxpool2d(int window, int stride = 0) {
    LayerSpec s;
    s.kind = LayerKind::MaxPool2d;
    s.window = window;
    s.pool_stride = stride == 0 ? window : stride;
    return s;
  }
  static LayerSpec relu() { return LayerSpec{LayerKind::Relu}; }
  static LayerSpec flatten() { return LayerSpec{LayerKind::Flatten}; }
  static LayerSpec softmax() { return LayerSpec{LayerKind::Softmax}; }
};

const char* layer_kind_name(LayerKind k);

struct Architecture {
  Shape3 input;
  std::vector<LayerSpec> layers;
  int class_count = 0;
};

// Output extents of every layer, in order. Throws ShapeError naming the
// offending layer if propagation fails or the final output does not match
// class_count.
std::vector<Shape3> propagate_shapes(const Architecture& arch);

void validate(const Architecture& arch);

struct LayerParams {
  Tensor weights;  // conv: (c_out, k_h, k_w, c_in); dense: (out, in)
  Tensor bias;     // (c_out) / (out); empty for non-trainable layers
  bool trainable = false;
};

// Per-layer weights aligned with Architecture.layers. GradientDelta shares
// the representation: a shape-congruent per-layer value stack.
struct Parameters {
  std::vector<LayerParams> layers;
};
using GradientDelta = Parameters;

Parameters init_parameters(const Architecture& arch, std::uint64_t seed);
GradientDelta zero_like(const Parameters& params);
void check_congruent(const Parameters& a, const Parameters& b);
std::size_t scalar_count(const Parameters& params);

// params + alpha * delta, elementwise.
Parameters add_scaled(const Parameters& params, const GradientDelta& delta,
                      float alpha);

// Labeled minibatch: features (n, h, w, c), one label per sample.
struct Batch {
  Tensor features;
  std::vector<int> labels;
};

// Class probabilities, shape (n, 1, 1, class_count).
Tensor forward(const Architecture& arch, const Parameters& params,
               const Tensor& batch);

struct LossAndGrad {
  float loss = 0.0f;  // mean cross-entropy over the batch
  GradientDelta grad;
};

LossAndGrad loss_and_grad(const Architecture& arch, const Parameters& params,
                          const Batch& batch);

Parameters sgd_step(const Parameters& params, const GradientDelta& grad,
                    float lr);

// Total multiply-accumulates of one forward pass on a single sample.
std::int64_t macs(const Architecture& arch);

// Serialized size of all trainable scalars at 4 bytes each.
std::int64_t param_bytes(const Architecture& arch);

struct EvalResult {
  double accuracy = 0.0;
  int test_num = 0;
};

EvalResult evaluate(const Architecture& arch, const Parameters& params,
                    const Batch& samples);

}  // namespace decnas
