#pragma once

#include <vector>

#include "loggrad/tensor.hpp"

namespace loggrad {

enum class Padding { Valid, SameZero, SameReplicate };

// Stride-1 cross-correlation. x is HxWxCin, w is kh x kw x Cin x Cout,
// bias has Cout entries. Same padding places k/2 rows/cols before and
// k-1-k/2 after (asymmetric for even kernels).
Tensor conv2d_forward(const Tensor& x, const Tensor& w, const std::vector<double>& bias,
                      Padding pad);

struct ConvGrads {
  Tensor grad_x;
  Tensor grad_w;
  std::vector<double> grad_bias;
};

ConvGrads conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& grad_out,
                          Padding pad);

Tensor relu_forward(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

// Non-overlapping p x p windows; trailing rows/cols that do not fill a
// window are dropped. Ties route the gradient to the first (row-major) max.
Tensor maxpool_forward(const Tensor& x, int p);
Tensor maxpool_backward(const Tensor& x, int p, const Tensor& grad_out);

// x flattened row-major; w is in x out, bias out.
Tensor dense_forward(const Tensor& x, const Tensor& w, const std::vector<double>& bias);

struct DenseGrads {
  Tensor grad_x;
  Tensor grad_w;
  std::vector<double> grad_bias;
};

DenseGrads dense_backward(const Tensor& x, const Tensor& w, const Tensor& grad_out);

Tensor flatten(const Tensor& x);

}  // namespace loggrad
