#include "loggrad/preproc.hpp"

#include <algorithm>
#include <cmath>

namespace loggrad {

QuantizerSpec::QuantizerSpec(std::vector<double> t, std::vector<int> c)
    : thresholds(std::move(t)), codes(std::move(c)) {
  if (codes.size() != thresholds.size() + 1)
    throw std::invalid_argument("QuantizerSpec: need thresholds.size()+1 codes");
  if (!std::is_sorted(thresholds.begin(), thresholds.end(),
                      [](double a, double b) { return a <= b; }))
    throw std::invalid_argument("QuantizerSpec: thresholds must be strictly increasing");
  if (!std::is_sorted(codes.begin(), codes.end(), [](int a, int b) { return a <= b; }))
    throw std::invalid_argument("QuantizerSpec: codes must be strictly increasing");
}

QuantizerSpec QuantizerSpec::preset_1p5bit(double t) {
  return QuantizerSpec({-t, t}, {-1, 0, 1});
}

QuantizerSpec QuantizerSpec::preset_2p25bit(double t1, double t2) {
  return QuantizerSpec({-t2, -t1, t1, t2}, {-2, -1, 0, 1, 2});
}

InputFormat parse_input_format(const std::string& name) {
  if (name == "jpeg8") return InputFormat::Jpeg8;
  if (name == "raw16") return InputFormat::Raw16;
  if (name == "loggrad_fp") return InputFormat::LogGradFP;
  if (name == "loggrad_1p5") return InputFormat::LogGrad1p5;
  if (name == "loggrad_2p25") return InputFormat::LogGrad2p25;
  throw std::invalid_argument("unknown input format '" + name + "'");
}

std::string format_name(InputFormat fmt) {
  switch (fmt) {
    case InputFormat::Jpeg8: return "jpeg8";
    case InputFormat::Raw16: return "raw16";
    case InputFormat::LogGradFP: return "loggrad_fp";
    case InputFormat::LogGrad1p5: return "loggrad_1p5";
    case InputFormat::LogGrad2p25: return "loggrad_2p25";
  }
  throw std::logic_error("bad InputFormat");
}

LogImage log_transform(const GrayImage& img, double shift) {
  if (shift < 0) throw std::invalid_argument("log_transform: shift must be >= 0");
  LogImage out(img.height, img.width);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    double v = img.pixels[i] + shift;
    if (v <= 0) throw std::domain_error("log_transform: zero pixel with shift 0");
    out.values[i] = std::log(v);
  }
  return out;
}

GradImage log_gradient(const LogImage& li) {
  if (li.height < 3 || li.width < 3)
    throw std::invalid_argument("log_gradient: image must be at least 3x3");
  GradImage out{li.height, li.width, std::vector<double>(li.values.size())};
  auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };
  for (int y = 0; y < li.height; ++y) {
    int ym = clampi(y - 1, li.height - 1), yp = clampi(y + 1, li.height - 1);
    for (int x = 0; x < li.width; ++x) {
      int xm = clampi(x - 1, li.width - 1), xp = clampi(x + 1, li.width - 1);
      // cross-correlation with [[0,-1,0],[-1,0,1],[0,1,0]], replicate edges
      out.at(y, x) = (li.at(y, xp) - li.at(y, xm)) + (li.at(yp, x) - li.at(ym, x));
    }
  }
  return out;
}

QuantImage quantize(const GradImage& grad, const QuantizerSpec& spec) {
  QuantImage out{grad.height, grad.width, std::vector<int>(grad.values.size())};
  for (size_t i = 0; i < grad.values.size(); ++i) out.codes[i] = spec.apply(grad.values[i]);
  return out;
}

int rdc_quantize(double a, double b, const QuantizerSpec& spec, double shift) {
  if (a < 0 || b < 0) throw std::invalid_argument("rdc_quantize: a, b must be >= 0");
  // Pure ratio-domain path: no logarithm is taken. The decision levels
  // exp(t_i) are log-spaced, so counting levels below the ratio matches
  // quantize() on ln(a+s) - ln(b+s).
  double ratio = (a + shift) / (b + shift);
  size_t i = 0;
  while (i < spec.thresholds.size() && std::exp(spec.thresholds[i]) <= ratio) ++i;
  return spec.codes[i];
}

std::vector<uint8_t> gamma_encode(const GrayImage& img, const GammaSpec& spec) {
  std::vector<uint8_t> out(img.size());
  for (size_t i = 0; i < img.size(); ++i) {
    double v = 255.0 * std::pow(img.pixels[i] / 65535.0, 1.0 / spec.gamma);
    out[i] = static_cast<uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
  }
  return out;
}

Tensor prepare_input(const GrayImage& img, InputFormat fmt, const QuantizerSpec& q3,
                     const QuantizerSpec& q5, const GammaSpec& gamma) {
  Tensor t({static_cast<size_t>(img.height), static_cast<size_t>(img.width), 1});
  switch (fmt) {
    case InputFormat::Raw16:
      for (size_t i = 0; i < img.size(); ++i) t.data[i] = img.pixels[i] / 65535.0;
      break;
    case InputFormat::Jpeg8: {
      auto enc = gamma_encode(img, gamma);
      for (size_t i = 0; i < enc.size(); ++i) t.data[i] = enc[i] / 255.0;
      break;
    }
    case InputFormat::LogGradFP: {
      GradImage g = log_gradient(log_transform(img));
      t.data = std::move(g.values);
      break;
    }
    case InputFormat::LogGrad1p5:
    case InputFormat::LogGrad2p25: {
      const QuantizerSpec& q = fmt == InputFormat::LogGrad1p5 ? q3 : q5;
      QuantImage qi = quantize(log_gradient(log_transform(img)), q);
      for (size_t i = 0; i < qi.codes.size(); ++i) t.data[i] = qi.codes[i];
      break;
    }
  }
  return t;
}

GrayImage quant_to_gray(const QuantImage& q) {
  GrayImage img(q.height, q.width);
  for (size_t i = 0; i < q.codes.size(); ++i) {
    int v = std::clamp(q.codes[i] * 64 + 128, 0, 255);
    img.pixels[i] = static_cast<uint16_t>(v * 257);
  }
  return img;
}

}  // namespace loggrad
