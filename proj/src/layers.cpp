#include "loggrad/layers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace loggrad {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<MatRM>;
using MapMConst = Eigen::Map<const MatRM>;

struct ConvGeom {
  int h, w, cin, kh, kw, cout;
  int out_h, out_w;
  int pad_top, pad_left;  // pad_bottom/right implied by out size
  bool replicate;
  bool padded;
};

ConvGeom conv_geometry(const Tensor& x, const Tensor& w, Padding pad) {
  if (x.shape.size() != 3) throw std::invalid_argument("conv2d: input must be HxWxC");
  if (w.shape.size() != 4) throw std::invalid_argument("conv2d: kernel must be kh x kw x Cin x Cout");
  ConvGeom g;
  g.h = static_cast<int>(x.shape[0]);
  g.w = static_cast<int>(x.shape[1]);
  g.cin = static_cast<int>(x.shape[2]);
  g.kh = static_cast<int>(w.shape[0]);
  g.kw = static_cast<int>(w.shape[1]);
  g.cout = static_cast<int>(w.shape[3]);
  if (static_cast<int>(w.shape[2]) != g.cin)
    throw std::invalid_argument("conv2d: kernel Cin does not match input");
  if (pad == Padding::Valid) {
    g.out_h = g.h - g.kh + 1;
    g.out_w = g.w - g.kw + 1;
    if (g.out_h <= 0 || g.out_w <= 0) throw std::invalid_argument("conv2d: kernel larger than input");
    g.pad_top = g.pad_left = 0;
    g.padded = false;
  } else {
    g.out_h = g.h;
    g.out_w = g.w;
    g.pad_top = g.kh / 2;
    g.pad_left = g.kw / 2;
    g.padded = true;
  }
  g.replicate = pad == Padding::SameReplicate;
  return g;
}

// Source pixel index for column element, or -1 for a zero pad.
inline long src_index(const ConvGeom& g, int oy, int ox, int ky, int kx) {
  int y = oy + ky - g.pad_top;
  int x = ox + kx - g.pad_left;
  if (g.replicate) {
    y = std::clamp(y, 0, g.h - 1);
    x = std::clamp(x, 0, g.w - 1);
  } else if (y < 0 || y >= g.h || x < 0 || x >= g.w) {
    return -1;
  }
  return static_cast<long>(y) * g.w + x;
}

// Rows: output pixels; cols: kh*kw*cin patch entries.
MatRM im2col(const Tensor& x, const ConvGeom& g) {
  MatRM col(static_cast<long>(g.out_h) * g.out_w, static_cast<long>(g.kh) * g.kw * g.cin);
  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      long row = static_cast<long>(oy) * g.out_w + ox;
      long c = 0;
      for (int ky = 0; ky < g.kh; ++ky) {
        for (int kx = 0; kx < g.kw; ++kx) {
          long src = src_index(g, oy, ox, ky, kx);
          for (int ch = 0; ch < g.cin; ++ch, ++c)
            col(row, c) = src < 0 ? 0.0 : x.data[src * g.cin + ch];
        }
      }
    }
  }
  return col;
}

}  // namespace

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const std::vector<double>& bias,
                      Padding pad) {
  ConvGeom g = conv_geometry(x, w, pad);
  if (static_cast<int>(bias.size()) != g.cout)
    throw std::invalid_argument("conv2d: bias size does not match Cout");

  MatRM col = im2col(x, g);
  MapMConst wm(w.data.data(), static_cast<long>(g.kh) * g.kw * g.cin, g.cout);

  Tensor out({static_cast<size_t>(g.out_h), static_cast<size_t>(g.out_w),
              static_cast<size_t>(g.cout)});
  MapM om(out.data.data(), col.rows(), g.cout);
  om.noalias() = col * wm;
  for (long r = 0; r < om.rows(); ++r)
    for (int c = 0; c < g.cout; ++c) om(r, c) += bias[c];
  return out;
}

ConvGrads conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& grad_out,
                          Padding pad) {
  ConvGeom g = conv_geometry(x, w, pad);
  if (grad_out.shape != std::vector<size_t>{static_cast<size_t>(g.out_h),
                                            static_cast<size_t>(g.out_w),
                                            static_cast<size_t>(g.cout)})
    throw std::invalid_argument("conv2d_backward: grad_out shape mismatch");

  MatRM col = im2col(x, g);
  MapMConst wm(w.data.data(), col.cols(), g.cout);
  MapMConst gm(grad_out.data.data(), col.rows(), g.cout);

  ConvGrads grads;
  grads.grad_w = Tensor(w.shape);
  MapM gwm(grads.grad_w.data.data(), col.cols(), g.cout);
  gwm.noalias() = col.transpose() * gm;

  grads.grad_bias.assign(g.cout, 0.0);
  for (long r = 0; r < gm.rows(); ++r)
    for (int c = 0; c < g.cout; ++c) grads.grad_bias[c] += gm(r, c);

  // col2im scatter-add; replicate padding adds into the clamped source,
  // which is the exact adjoint of the clamped gather.
  MatRM gcol(col.rows(), col.cols());
  gcol.noalias() = gm * wm.transpose();
  grads.grad_x = Tensor(x.shape);
  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      long row = static_cast<long>(oy) * g.out_w + ox;
      long c = 0;
      for (int ky = 0; ky < g.kh; ++ky) {
        for (int kx = 0; kx < g.kw; ++kx) {
          long src = src_index(g, oy, ox, ky, kx);
          if (src < 0) {
            c += g.cin;
            continue;
          }
          for (int ch = 0; ch < g.cin; ++ch, ++c) grads.grad_x.data[src * g.cin + ch] += gcol(row, c);
        }
      }
    }
  }
  return grads;
}

Tensor relu_forward(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = std::max(v, 0.0);
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  check_same_shape(x, grad_out, "relu_backward");
  Tensor g = grad_out;
  for (size_t i = 0; i < g.data.size(); ++i)
    if (x.data[i] <= 0.0) g.data[i] = 0.0;
  return g;
}

Tensor maxpool_forward(const Tensor& x, int p) {
  if (p < 1) throw std::invalid_argument("maxpool: p must be >= 1");
  size_t oh = x.shape[0] / p, ow = x.shape[1] / p, ch = x.shape[2];
  if (oh == 0 || ow == 0) throw std::invalid_argument("maxpool: window larger than input");
  Tensor out({oh, ow, ch});
  for (size_t y = 0; y < oh; ++y)
    for (size_t x2 = 0; x2 < ow; ++x2)
      for (size_t c = 0; c < ch; ++c) {
        double best = x.at(y * p, x2 * p, c);
        for (int dy = 0; dy < p; ++dy)
          for (int dx = 0; dx < p; ++dx) best = std::max(best, x.at(y * p + dy, x2 * p + dx, c));
        out.at(y, x2, c) = best;
      }
  return out;
}

Tensor maxpool_backward(const Tensor& x, int p, const Tensor& grad_out) {
  size_t oh = x.shape[0] / static_cast<size_t>(p), ow = x.shape[1] / static_cast<size_t>(p);
  size_t ch = x.shape[2];
  if (grad_out.shape != std::vector<size_t>{oh, ow, ch})
    throw std::invalid_argument("maxpool_backward: grad_out shape mismatch");
  Tensor g(x.shape);
  for (size_t y = 0; y < oh; ++y)
    for (size_t x2 = 0; x2 < ow; ++x2)
      for (size_t c = 0; c < ch; ++c) {
        // first row-major max wins ties
        size_t by = y * p, bx = x2 * p;
        double best = x.at(by, bx, c);
        for (int dy = 0; dy < p; ++dy)
          for (int dx = 0; dx < p; ++dx) {
            double v = x.at(y * p + dy, x2 * p + dx, c);
            if (v > best) {
              best = v;
              by = y * p + dy;
              bx = x2 * p + dx;
            }
          }
        g.at(by, bx, c) += grad_out.at(y, x2, c);
      }
  return g;
}

Tensor dense_forward(const Tensor& x, const Tensor& w, const std::vector<double>& bias) {
  size_t in = x.size(), out_n = w.shape[1];
  if (w.shape.size() != 2 || w.shape[0] != in)
    throw std::invalid_argument("dense: weight shape mismatch");
  if (bias.size() != out_n) throw std::invalid_argument("dense: bias size mismatch");
  Tensor out({out_n});
  MapMConst wm(w.data.data(), static_cast<long>(in), static_cast<long>(out_n));
  Eigen::Map<const Eigen::VectorXd> xv(x.data.data(), static_cast<long>(in));
  Eigen::Map<Eigen::VectorXd> ov(out.data.data(), static_cast<long>(out_n));
  ov.noalias() = wm.transpose() * xv;
  for (size_t i = 0; i < out_n; ++i) out.data[i] += bias[i];
  return out;
}

DenseGrads dense_backward(const Tensor& x, const Tensor& w, const Tensor& grad_out) {
  size_t in = x.size(), out_n = w.shape[1];
  if (grad_out.size() != out_n) throw std::invalid_argument("dense_backward: grad shape mismatch");
  DenseGrads g;
  g.grad_x = Tensor(x.shape);
  g.grad_w = Tensor(w.shape);
  g.grad_bias.assign(grad_out.data.begin(), grad_out.data.end());
  for (size_t i = 0; i < in; ++i) {
    double xi = x.data[i];
    double acc = 0.0;
    for (size_t j = 0; j < out_n; ++j) {
      g.grad_w.data[i * out_n + j] = xi * grad_out.data[j];
      acc += w.data[i * out_n + j] * grad_out.data[j];
    }
    g.grad_x.data[i] = acc;
  }
  return g;
}

Tensor flatten(const Tensor& x) {
  Tensor out = x;
  out.shape = {x.size()};
  return out;
}

}  // namespace loggrad
