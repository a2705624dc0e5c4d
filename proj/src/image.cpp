#include "loggrad/image.hpp"

#include <algorithm>
#include <cmath>

namespace loggrad {

GrayImage demosaic_to_gray(const BayerRaw& raw) {
  GrayImage out(raw.height / 2, raw.width / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      int sum = raw.at(2 * y, 2 * x) + raw.at(2 * y, 2 * x + 1) + raw.at(2 * y + 1, 2 * x) +
                raw.at(2 * y + 1, 2 * x + 1);
      // round(mean of the quad); pattern does not matter for grayscale
      out.at(y, x) = static_cast<uint16_t>((sum + 2) / 4);
    }
  }
  return out;
}

GrayImage scale_brightness(const GrayImage& img, BrightnessFactor b) {
  GrayImage out(img.height, img.width);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    double v = std::round(b.b * img.pixels[i]);
    out.pixels[i] = static_cast<uint16_t>(std::clamp(v, 0.0, 65535.0));
  }
  return out;
}

GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w) {
  if (out_h <= 0 || out_w <= 0) throw std::invalid_argument("resize_bilinear: bad output size");
  GrayImage out(out_h, out_w);
  const double sy = static_cast<double>(img.height) / out_h;
  const double sx = static_cast<double>(img.width) / out_w;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double wy = fy - y0;
    int y0c = std::clamp(y0, 0, img.height - 1);
    int y1c = std::clamp(y0 + 1, 0, img.height - 1);
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double wx = fx - x0;
      int x0c = std::clamp(x0, 0, img.width - 1);
      int x1c = std::clamp(x0 + 1, 0, img.width - 1);
      double v = (1 - wy) * ((1 - wx) * img.at(y0c, x0c) + wx * img.at(y0c, x1c)) +
                 wy * ((1 - wx) * img.at(y1c, x0c) + wx * img.at(y1c, x1c));
      out.at(y, x) = static_cast<uint16_t>(std::clamp(std::round(v), 0.0, 65535.0));
    }
  }
  return out;
}

}  // namespace loggrad
