#pragma once

#include <string>

#include "loggrad/image.hpp"

namespace loggrad {

// Binary PGM (P5) only; maxval 255 or 65535; 16-bit samples big-endian.
// 8-bit files are promoted to the 16-bit range by x257.
GrayImage load_pgm(const std::string& path);

void save_pgm(const GrayImage& img, const std::string& path, int bit_depth = 16);

}  // namespace loggrad
