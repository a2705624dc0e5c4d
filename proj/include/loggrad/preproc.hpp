#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "loggrad/image.hpp"
#include "loggrad/tensor.hpp"

namespace loggrad {

// Log-domain image, P' = ln(P + shift).
struct LogImage {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  LogImage() = default;
  LogImage(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<size_t>(h) * w, fill) {}

  double& at(int y, int x) { return values[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return values[static_cast<size_t>(y) * width + x]; }
};

// Log-gradient image; zero on constant inputs.
struct GradImage {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  double& at(int y, int x) { return values[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return values[static_cast<size_t>(y) * width + x]; }
};

// Ordered decision thresholds t_1 < ... < t_k plus k+1 integer output codes.
struct QuantizerSpec {
  std::vector<double> thresholds;
  std::vector<int> codes;

  QuantizerSpec(std::vector<double> t, std::vector<int> c);

  // 3 levels, codes {-1, 0, +1}; default dead-zone +-0.10.
  static QuantizerSpec preset_1p5bit(double t = 0.10);
  // 5 levels, codes {-2..+2}; default thresholds +-0.10, +-0.35.
  static QuantizerSpec preset_2p25bit(double t1 = 0.10, double t2 = 0.35);

  int apply(double v) const {
    size_t i = 0;
    while (i < thresholds.size() && thresholds[i] <= v) ++i;
    return codes[i];
  }
};

struct GammaSpec {
  double gamma = 2.2;
  explicit GammaSpec(double g = 2.2) : gamma(g) {
    if (!(gamma > 0.0)) throw std::invalid_argument("GammaSpec: gamma must be > 0");
  }
};

enum class InputFormat { Jpeg8, Raw16, LogGradFP, LogGrad1p5, LogGrad2p25 };

InputFormat parse_input_format(const std::string& name);
std::string format_name(InputFormat fmt);

// P' = ln(P + shift). shift = 0 requires strictly positive pixels.
LogImage log_transform(const GrayImage& img, double shift = 1.0);

// Cross-correlation with the fixed gradient kernel
//   [[0,-1,0],[-1,0,1],[0,1,0]]
// under replicate-edge padding; same-size output. Input must be >= 3x3.
GradImage log_gradient(const LogImage& logimg);

struct QuantImage {
  int height = 0;
  int width = 0;
  std::vector<int> codes;
};

QuantImage quantize(const GradImage& grad, const QuantizerSpec& spec);

// Ratio-domain quantization of (a+shift)/(b+shift) against exp(t_i);
// bit-identical to quantize(ln(a+shift) - ln(b+shift)).
int rdc_quantize(double a, double b, const QuantizerSpec& spec, double shift = 1.0);

// round(255 * (P/65535)^(1/gamma)), clamped to [0, 255].
std::vector<uint8_t> gamma_encode(const GrayImage& img, const GammaSpec& spec);

// Network input per format, H x W x 1:
//   Raw16       P/65535
//   Jpeg8       gamma_encode(P)/255
//   LogGradFP   unscaled log-gradient reals
//   LogGrad1p5  quantized codes {-1,0,+1} as reals
//   LogGrad2p25 quantized codes {-2..+2} as reals
Tensor prepare_input(const GrayImage& img, InputFormat fmt, const QuantizerSpec& q3,
                     const QuantizerSpec& q5, const GammaSpec& gamma);

// Inspection export: code -> gray as code*64 + 128.
GrayImage quant_to_gray(const QuantImage& q);

}  // namespace loggrad
