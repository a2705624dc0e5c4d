#include "loggrad/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "loggrad/pgm.hpp"
#include "loggrad/rng.hpp"

namespace fs = std::filesystem;

namespace loggrad {

std::tuple<size_t, size_t, size_t> split_sizes(size_t n, const SplitSpec& spec) {
  if (spec.train_pct + spec.val_pct + spec.test_pct != 100)
    throw std::invalid_argument("SplitSpec: fractions must sum to 100");
  if (spec.train_pct <= 0 || spec.val_pct <= 0 || spec.test_pct <= 0)
    throw std::invalid_argument("SplitSpec: every fraction must be positive");
  size_t val = n * spec.val_pct / 100;
  size_t test = n * spec.test_pct / 100;
  size_t train = n - val - test;
  if (val == 0 || test == 0 || train == 0)
    throw std::invalid_argument("split_dataset: a split would be empty");
  return {train, val, test};
}

SplitResult split_dataset(const LabeledDataset& ds, const SplitSpec& spec) {
  const size_t n = ds.items.size();
  auto [n_train, n_val, n_test] = split_sizes(n, spec);

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(mix_seed(spec.seed, "split"));
  for (size_t i = n; i > 1; --i) {  // Fisher-Yates
    size_t j = rng.uniform_index(i);
    std::swap(order[i - 1], order[j]);
  }

  SplitResult out;
  out.train.class_names = out.val.class_names = out.test.class_names = ds.class_names;
  for (size_t i = 0; i < n; ++i) {
    const LabeledItem& item = ds.items[order[i]];
    if (i < n_train)
      out.train.items.push_back(item);
    else if (i < n_train + n_val)
      out.val.items.push_back(item);
    else
      out.test.items.push_back(item);
  }
  return out;
}

namespace {

struct Canvas {
  int n;
  std::vector<double> v;
  explicit Canvas(int res) : n(res), v(static_cast<size_t>(res) * res, 0.0) {}
  double& at(int y, int x) { return v[static_cast<size_t>(y) * n + x]; }
};

// Smooth multiplicative texture: a coarse random grid, bilinearly upsampled.
void apply_texture(Canvas& c, Rng& rng) {
  constexpr int G = 5;
  double grid[G][G];
  for (auto& row : grid)
    for (double& g : row) g = rng.uniform(0.8, 1.2);
  for (int y = 0; y < c.n; ++y) {
    double fy = static_cast<double>(y) / (c.n - 1) * (G - 1);
    int y0 = std::min(static_cast<int>(fy), G - 2);
    double wy = fy - y0;
    for (int x = 0; x < c.n; ++x) {
      double fx = static_cast<double>(x) / (c.n - 1) * (G - 1);
      int x0 = std::min(static_cast<int>(fx), G - 2);
      double wx = fx - x0;
      double t = (1 - wy) * ((1 - wx) * grid[y0][x0] + wx * grid[y0][x0 + 1]) +
                 wy * ((1 - wx) * grid[y0 + 1][x0] + wx * grid[y0 + 1][x0 + 1]);
      c.at(y, x) *= t;
    }
  }
}

inline bool in_ring(double dy, double dx, double r, double thick) {
  double d = std::sqrt(dy * dy + dx * dx);
  return d >= r - thick && d <= r + thick;
}

inline bool in_bar(double dy, double dx, double half_len, double half_thick) {
  return std::abs(dx) <= half_len && std::abs(dy) <= half_thick;
}

// Shape mask per class at pixel (y, x), in a coordinate frame centered on
// (cy, cx) with scale s (pixels).
bool shape_mask(int class_id, double y, double x, double cy, double cx, double s) {
  double dy = y - cy, dx = x - cx;
  switch (class_id) {
    case 0: {  // two-wheeler: two rings plus a connecting bar
      double r = 0.21 * s, thick = 0.05 * s;
      double off = 0.30 * s, drop = 0.14 * s;
      if (in_ring(dy - drop, dx + off, r, thick)) return true;
      if (in_ring(dy - drop, dx - off, r, thick)) return true;
      if (in_bar(dy + 0.10 * s, dx, 0.30 * s, 0.045 * s)) return true;
      return false;
    }
    case 1: {  // boxy: rectangular frame
      double hw = 0.40 * s, hh = 0.26 * s, t = 0.07 * s;
      bool outer = std::abs(dx) <= hw && std::abs(dy) <= hh;
      bool inner = std::abs(dx) <= hw - t && std::abs(dy) <= hh - t;
      return outer && !inner;
    }
    default: {  // vertical blob: filled upright ellipse
      double a = 0.17 * s, b = 0.42 * s;
      double q = (dx / a) * (dx / a) + (dy / b) * (dy / b);
      return q <= 1.0;
    }
  }
}

// 1 or 2 axis-aligned cuts, each side scaled independently: 2-4 plateaus.
void apply_plateaus(Canvas& c, Rng& rng) {
  int cuts = 1 + static_cast<int>(rng.uniform_index(2));
  for (int k = 0; k < cuts; ++k) {
    bool vertical = rng.uniform() < 0.5;
    int pos = static_cast<int>(rng.uniform(0.25, 0.75) * c.n);
    double f_lo = rng.uniform(0.5, 1.3);
    double f_hi = rng.uniform(0.5, 1.3);
    for (int y = 0; y < c.n; ++y)
      for (int x = 0; x < c.n; ++x) c.at(y, x) *= ((vertical ? x : y) < pos) ? f_lo : f_hi;
  }
}

}  // namespace

GrayImage synth_scene(int class_id, BrightnessFactor illum, const SynthParams& p, uint64_t seed) {
  if (class_id < 0 || class_id > 2) throw std::invalid_argument("synth_scene: class_id not in {0,1,2}");
  if (p.noise_std < 0) throw std::invalid_argument("synth_scene: noise_std must be >= 0");

  Rng rng(seed);
  const int n = p.resolution;
  Canvas c(n);

  double base = std::exp(rng.uniform(std::log(1500.0), std::log(6000.0)));
  for (double& v : c.v) v = base;
  apply_texture(c, rng);

  // multiplicative shape contrast keeps pixel ratios illumination-stable
  bool bright = rng.uniform() < 0.5;
  double rho = bright ? rng.uniform(1.9, 2.8) : rng.uniform(0.35, 0.55);
  double s = rng.uniform(0.55, 0.85) * n;
  double cy = n / 2.0 + rng.uniform(-0.08, 0.08) * n;
  double cx = n / 2.0 + rng.uniform(-0.08, 0.08) * n;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (shape_mask(class_id, y, x, cy, cx, s)) c.at(y, x) *= rho;

  if (rng.uniform() < p.plateau_prob) apply_plateaus(c, rng);

  GrayImage img(n, n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double v = c.at(y, x) * illum.b;
      if (p.noise_std > 0) v += rng.normal(0.0, p.noise_std);
      img.at(y, x) = static_cast<uint16_t>(std::clamp(std::round(v), 0.0, 65535.0));
    }
  }
  return img;
}

LabeledDataset synth_dataset(size_t num_images, const SynthParams& p, uint64_t master_seed) {
  LabeledDataset ds;
  ds.items.reserve(num_images);
  for (size_t i = 0; i < num_images; ++i) {
    int label = static_cast<int>(i % 3);
    uint64_t seed = mix_seed(master_seed, "synth-item-" + std::to_string(i));
    ds.items.push_back({synth_scene(label, BrightnessFactor(1.0), p, seed), label});
  }
  return ds;
}

LabeledDataset load_pascal_raw(const std::string& dir, int resolution) {
  if (!fs::is_directory(dir)) throw std::runtime_error("load_pascal_raw: not a directory: " + dir);

  std::vector<std::string> class_dirs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) class_dirs.push_back(e.path().filename().string());
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.size() != 3)
    throw std::runtime_error("load_pascal_raw: expected 3 class directories, found " +
                             std::to_string(class_dirs.size()));

  LabeledDataset ds;
  for (int label = 0; label < 3; ++label) {
    ds.class_names[label] = class_dirs[label];
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(fs::path(dir) / class_dirs[label])) {
      if (!e.is_regular_file()) continue;
      if (e.path().extension() != ".pgm")
        throw std::runtime_error("load_pascal_raw: non-PGM file " + e.path().string());
      files.push_back(e.path().string());
    }
    if (files.empty())
      throw std::runtime_error("load_pascal_raw: empty class directory " + class_dirs[label]);
    std::sort(files.begin(), files.end());
    for (const std::string& f : files)
      ds.items.push_back({resize_bilinear(load_pgm(f), resolution, resolution), label});
  }
  return ds;
}

}  // namespace loggrad
