#pragma once

#include <string>
#include <vector>

#include "loggrad/net.hpp"

namespace loggrad {

// Unit-L2 flattened conv filter (kernel x kernel x input-channels).
struct NormalizedFilter {
  int layer_index = 0;
  int filter_index = 0;
  std::vector<double> values;
};

struct SimilarPair {
  int i = 0;
  int j = 0;
  double s = 0.0;
};

struct Histogram {
  std::vector<double> edges;  // bin_count + 1 entries
  std::vector<size_t> counts;
};

struct SimilarityReport {
  int layer_index = 0;
  int filter_count = 0;
  std::vector<double> matrix;  // filter_count x filter_count, row-major
  Histogram hist;              // off-diagonal s over [-1, 1]
  Histogram cumulative_abs;    // cumulative counts of |s| over [0, 1]
  double threshold = 0.98;
  std::vector<SimilarPair> pairs;  // |s| > threshold, sorted by |s| desc

  double at(int i, int j) const { return matrix[static_cast<size_t>(i) * filter_count + j]; }
};

// layer is an index into params.layers and must refer to a conv layer.
std::vector<NormalizedFilter> normalize_filters(const ModelSpec& spec,
                                                const ModelParams& params, int layer);

std::vector<double> similarity_matrix(const std::vector<NormalizedFilter>& filters);

Histogram histogram(const std::vector<double>& values, int bin_count, double lo, double hi);
Histogram cumulative_abs_histogram(const std::vector<double>& values, int bin_count);

std::vector<SimilarPair> similar_pairs(const std::vector<double>& matrix, int n,
                                       double threshold = 0.98);

SimilarityReport similarity_report(const ModelSpec& spec, const ModelParams& params, int layer,
                                   double threshold = 0.98, int bin_count = 50);

std::string report_to_json(const SimilarityReport& r);

// Filters min-max mapped to 8-bit PGMs named L<layer>_F<index>_pair<k>.pgm.
// Returns the number of files written (2 per pair).
int export_filter_gallery(const ModelSpec& spec, const ModelParams& params, int layer,
                          const std::vector<SimilarPair>& pairs, const std::string& dir);

}  // namespace loggrad
