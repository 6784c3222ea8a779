#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "decnas/errors.hpp"

namespace decnas {

// Dense row-major float tensor.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> values;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s)
      : shape(std::move(s)), values(element_count(shape), 0.0f) {}
  Tensor(std::vector<std::size_t> s, std::vector<float> v)
      : shape(std::move(s)), values(std::move(v)) {
    if (values.size() != element_count(shape))
      throw ShapeError("tensor value count does not match shape");
  }

  static std::size_t element_count(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (auto e : s) n *= e;
    return n;
  }

  std::size_t size() const { return values.size(); }
  float* data() { return values.data(); }
  const float* data() const { return values.data(); }
  float& operator[](std::size_t i) { return values[i]; }
  float operator[](std::size_t i) const { return values[i]; }
};

// (h, w, c) activation extents.
struct Shape3 {
  int h = 0;
  int w = 0;
  int c = 0;
  bool operator==(const Shape3&) const = default;
  std::size_t count() const {
    return static_cast<std::size_t>(h) * w * c;
  }
};

}  // namespace decnas
