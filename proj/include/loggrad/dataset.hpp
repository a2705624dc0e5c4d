#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "loggrad/image.hpp"

namespace loggrad {

struct LabeledItem {
  GrayImage image;
  int label = 0;  // 0, 1, 2
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  std::array<std::string, 3> class_names{"bicycle", "car", "person"};
};

struct SplitSpec {
  int train_pct = 70;
  int val_pct = 15;
  int test_pct = 15;
  uint64_t seed = 0;
};

struct SplitResult {
  LabeledDataset train, val, test;
};

// Deterministic seeded shuffle, then floor-sized val/test with the
// remainder going to train.
SplitResult split_dataset(const LabeledDataset& ds, const SplitSpec& spec);

// Split sizes alone (train, val, test) for a dataset of n items.
std::tuple<size_t, size_t, size_t> split_sizes(size_t n, const SplitSpec& spec);

struct SynthParams {
  int resolution = 96;
  double noise_std = 8.0;
  // Probability of a random piecewise illumination field (2-4 plateaus).
  double plateau_prob = 0.85;
};

// Renders one scene of the given class onto a textured background at a
// random pose, applies plateau illumination and the global illum factor
// in the linear domain, adds Gaussian noise, clamps to [0, 65535].
GrayImage synth_scene(int class_id, BrightnessFactor illum, const SynthParams& p,
                      uint64_t seed);

// Balanced synthetic 3-class dataset; item i uses a seed derived from
// (master_seed, i).
LabeledDataset synth_dataset(size_t num_images, const SynthParams& p, uint64_t master_seed);

// Loads 16-bit PGM crops from <dir>/<class_name>/*.pgm, bilinearly resized
// to resolution x resolution. Every class directory must be non-empty.
LabeledDataset load_pascal_raw(const std::string& dir, int resolution);

}  // namespace loggrad
