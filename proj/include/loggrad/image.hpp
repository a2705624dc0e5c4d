#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loggrad {

// Linear-domain sensor image, 16-bit range [0, 65535], row-major.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<uint16_t> pixels;

  GrayImage() = default;
  GrayImage(int h, int w, uint16_t fill = 0)
      : height(h), width(w), pixels(static_cast<size_t>(h) * w, fill) {
    if (h <= 0 || w <= 0) throw std::invalid_argument("GrayImage: non-positive dimensions");
  }

  uint16_t& at(int y, int x) { return pixels[static_cast<size_t>(y) * width + x]; }
  uint16_t at(int y, int x) const { return pixels[static_cast<size_t>(y) * width + x]; }
  size_t size() const { return pixels.size(); }

  bool valid() const { return pixels.size() == static_cast<size_t>(height) * width; }
};

enum class BayerPattern { RGGB, BGGR, GRBG, GBRG };

// Raw color mosaic. Both dimensions must be even.
struct BayerRaw {
  int height = 0;
  int width = 0;
  std::vector<uint16_t> pixels;
  BayerPattern pattern = BayerPattern::RGGB;

  BayerRaw(int h, int w, BayerPattern p = BayerPattern::RGGB)
      : height(h), width(w), pixels(static_cast<size_t>(h) * w, 0), pattern(p) {
    if (h <= 0 || w <= 0 || h % 2 != 0 || w % 2 != 0)
      throw std::invalid_argument("BayerRaw: dimensions must be positive and even");
  }

  uint16_t& at(int y, int x) { return pixels[static_cast<size_t>(y) * width + x]; }
  uint16_t at(int y, int x) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

struct BrightnessFactor {
  double b = 1.0;
  explicit BrightnessFactor(double factor) : b(factor) {
    if (!(b > 0.0)) throw std::invalid_argument("BrightnessFactor: b must be > 0");
  }
};

// Grayscale reduction of a Bayer mosaic: each output pixel is the rounded
// mean of its 2x2 quad, so the output is half resolution in each dimension.
GrayImage demosaic_to_gray(const BayerRaw& raw);

// Per-pixel clamp(round(b * P), 0, 65535).
GrayImage scale_brightness(const GrayImage& img, BrightnessFactor b);

// Bilinear resample to out_h x out_w (pixel-center alignment).
GrayImage resize_bilinear(const GrayImage& img, int out_h, int out_w);

}  // namespace loggrad
