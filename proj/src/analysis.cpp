#include "loggrad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "loggrad/pgm.hpp"

namespace loggrad {

using nlohmann::json;

std::vector<NormalizedFilter> normalize_filters(const ModelSpec& spec, const ModelParams& params,
                                                int layer) {
  if (layer < 0 || static_cast<size_t>(layer) >= params.layers.size())
    throw std::invalid_argument("normalize_filters: layer index out of range");
  // map parametric index back to a spec layer; must be conv
  int pi = -1;
  const ConvSpec* conv = nullptr;
  for (const LayerSpec& l : spec.layers) {
    if (auto* c = std::get_if<ConvSpec>(&l)) {
      ++pi;
      if (pi == layer) {
        conv = c;
        break;
      }
    } else if (std::get_if<DenseSpec>(&l)) {
      ++pi;
      if (pi == layer) break;
    }
  }
  if (!conv) throw std::invalid_argument("normalize_filters: layer is not convolutional");

  const Tensor& w = params.layers[layer].w;  // kh x kw x cin x cout
  size_t per_filter = w.shape[0] * w.shape[1] * w.shape[2];
  size_t cout = w.shape[3];
  std::vector<NormalizedFilter> out;
  out.reserve(cout);
  for (size_t f = 0; f < cout; ++f) {
    NormalizedFilter nf;
    nf.layer_index = layer;
    nf.filter_index = static_cast<int>(f);
    nf.values.resize(per_filter);
    double norm2 = 0.0;
    for (size_t i = 0; i < per_filter; ++i) {
      double v = w.data[i * cout + f];
      nf.values[i] = v;
      norm2 += v * v;
    }
    if (norm2 == 0.0)
      throw std::runtime_error("normalize_filters: zero-norm filter at index " +
                               std::to_string(f));
    double inv = 1.0 / std::sqrt(norm2);
    for (double& v : nf.values) v *= inv;
    out.push_back(std::move(nf));
  }
  return out;
}

std::vector<double> similarity_matrix(const std::vector<NormalizedFilter>& filters) {
  const size_t n = filters.size();
  if (n < 2) throw std::invalid_argument("similarity_matrix: need at least 2 filters");
  const size_t len = filters[0].values.size();
  for (const auto& f : filters)
    if (f.values.size() != len)
      throw std::invalid_argument("similarity_matrix: filter length mismatch");

  std::vector<double> m(n * n);
  for (size_t i = 0; i < n; ++i) {
    m[i * n + i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (size_t k = 0; k < len; ++k) dot += filters[i].values[k] * filters[j].values[k];
      m[i * n + j] = m[j * n + i] = dot;
    }
  }
  return m;
}

Histogram histogram(const std::vector<double>& values, int bin_count, double lo, double hi) {
  if (values.empty()) throw std::invalid_argument("histogram: empty input");
  if (bin_count < 1 || !(hi > lo)) throw std::invalid_argument("histogram: bad bins or range");
  Histogram h;
  h.edges.resize(bin_count + 1);
  for (int i = 0; i <= bin_count; ++i)
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / bin_count;
  h.counts.assign(bin_count, 0);
  for (double v : values) {
    double t = (v - lo) / (hi - lo) * bin_count;
    int bin = static_cast<int>(std::floor(t));
    // last bin is right-inclusive; clamp covers hi exactly
    bin = std::clamp(bin, 0, bin_count - 1);
    ++h.counts[bin];
  }
  return h;
}

Histogram cumulative_abs_histogram(const std::vector<double>& values, int bin_count) {
  std::vector<double> abs_vals(values.size());
  for (size_t i = 0; i < values.size(); ++i) abs_vals[i] = std::abs(values[i]);
  Histogram h = histogram(abs_vals, bin_count, 0.0, 1.0 + 1e-9);
  for (size_t i = 1; i < h.counts.size(); ++i) h.counts[i] += h.counts[i - 1];
  return h;
}

std::vector<SimilarPair> similar_pairs(const std::vector<double>& matrix, int n,
                                       double threshold) {
  std::vector<SimilarPair> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s = matrix[static_cast<size_t>(i) * n + j];
      if (std::abs(s) > threshold) pairs.push_back({i, j, s});
    }
  std::sort(pairs.begin(), pairs.end(), [](const SimilarPair& a, const SimilarPair& b) {
    if (std::abs(a.s) != std::abs(b.s)) return std::abs(a.s) > std::abs(b.s);
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  return pairs;
}

SimilarityReport similarity_report(const ModelSpec& spec, const ModelParams& params, int layer,
                                   double threshold, int bin_count) {
  auto filters = normalize_filters(spec, params, layer);
  SimilarityReport r;
  r.layer_index = layer;
  r.filter_count = static_cast<int>(filters.size());
  r.matrix = similarity_matrix(filters);
  r.threshold = threshold;

  std::vector<double> off_diag;
  off_diag.reserve(filters.size() * (filters.size() - 1) / 2);
  for (int i = 0; i < r.filter_count; ++i)
    for (int j = i + 1; j < r.filter_count; ++j) off_diag.push_back(r.at(i, j));
  r.hist = histogram(off_diag, bin_count, -1.0 - 1e-9, 1.0 + 1e-9);
  r.cumulative_abs = cumulative_abs_histogram(off_diag, bin_count);
  r.pairs = similar_pairs(r.matrix, r.filter_count, threshold);
  return r;
}

std::string report_to_json(const SimilarityReport& r) {
  json j;
  j["layer"] = r.layer_index;
  j["filter_count"] = r.filter_count;
  j["threshold"] = r.threshold;
  j["matrix"] = r.matrix;
  j["histogram"] = {{"edges", r.hist.edges}, {"counts", r.hist.counts}};
  j["cumulative_abs"] = {{"edges", r.cumulative_abs.edges}, {"counts", r.cumulative_abs.counts}};
  json pairs = json::array();
  for (const SimilarPair& p : r.pairs) pairs.push_back({{"i", p.i}, {"j", p.j}, {"s", p.s}});
  j["pairs"] = pairs;
  return j.dump(2);
}

int export_filter_gallery(const ModelSpec& spec, const ModelParams& params, int layer,
                          const std::vector<SimilarPair>& pairs, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const Tensor& w = params.layers[layer].w;
  size_t kh = w.shape[0], kw = w.shape[1], cin = w.shape[2], cout = w.shape[3];
  (void)spec;

  auto render = [&](int f, const std::string& name) {
    // stack input channels vertically
    GrayImage img(static_cast<int>(kh * cin), static_cast<int>(kw));
    double lo = 1e300, hi = -1e300;
    for (size_t i = 0; i < kh * kw * cin; ++i) {
      double v = w.data[i * cout + f];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (size_t y = 0; y < kh; ++y)
      for (size_t x = 0; x < kw; ++x)
        for (size_t c = 0; c < cin; ++c) {
          double v = w.data[((y * kw + x) * cin + c) * cout + f];
          double g = hi > lo ? 255.0 * (v - lo) / (hi - lo) : 128.0;  // constant -> mid-gray
          img.at(static_cast<int>(c * kh + y), static_cast<int>(x)) =
              static_cast<uint16_t>(std::lround(g) * 257);
        }
    save_pgm(img, (std::filesystem::path(dir) / name).string(), 8);
  };

  int written = 0;
  for (size_t k = 0; k < pairs.size(); ++k) {
    for (int f : {pairs[k].i, pairs[k].j}) {
      render(f, "L" + std::to_string(layer) + "_F" + std::to_string(f) + "_pair" +
                     std::to_string(k) + ".pgm");
      ++written;
    }
  }
  return written;
}

}  // namespace loggrad
