#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace loggrad {

// Dense row-major tensor of doubles with explicit shape.
struct Tensor {
  std::vector<size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<size_t> s, double fill = 0.0)
      : shape(std::move(s)),
        data(std::accumulate(shape.begin(), shape.end(), size_t{1}, std::multiplies<>()), fill) {}

  size_t size() const { return data.size(); }

  size_t dim(size_t i) const { return shape.at(i); }

  // 3-D HWC accessor.
  double& at(size_t y, size_t x, size_t c) {
    return data[(y * shape[1] + x) * shape[2] + c];
  }
  double at(size_t y, size_t x, size_t c) const {
    return data[(y * shape[1] + x) * shape[2] + c];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  static Tensor zeros_like(const Tensor& o) { return Tensor(o.shape); }
};

inline void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace loggrad
