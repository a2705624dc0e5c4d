#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "loggrad/analysis.hpp"
#include "loggrad/rng.hpp"

using namespace loggrad;
namespace fs = std::filesystem;

namespace {

// single conv layer model whose filters we can set directly
struct Fixture {
  ModelSpec spec;
  ModelParams params;

  explicit Fixture(int kernel, int cin, int cout) {
    spec.input_h = spec.input_w = 8;
    spec.input_c = cin;
    spec.layers = {ConvSpec{kernel, cout, Padding::SameZero}};
    ParamTensor pt;
    pt.w = Tensor({static_cast<size_t>(kernel), static_cast<size_t>(kernel),
                   static_cast<size_t>(cin), static_cast<size_t>(cout)});
    pt.b.assign(static_cast<size_t>(cout), 0.0);
    params.layers.push_back(std::move(pt));
  }

  void set_filter(int f, const std::vector<double>& vals) {
    size_t cout = params.layers[0].w.shape[3];
    for (size_t i = 0; i < vals.size(); ++i) params.layers[0].w.data[i * cout + f] = vals[i];
  }
};

}  // namespace

TEST_CASE("normalize_filters basic and scale invariance") {
  Fixture fx(1, 2, 2);
  fx.set_filter(0, {3.0, 4.0});
  fx.set_filter(1, {21.0, 28.0});  // 7x the first
  auto nf = normalize_filters(fx.spec, fx.params, 0);
  CHECK(nf[0].values[0] == doctest::Approx(0.6));
  CHECK(nf[0].values[1] == doctest::Approx(0.8));
  CHECK(nf[1].values[0] == doctest::Approx(0.6));
  CHECK(nf[1].values[1] == doctest::Approx(0.8));
}

TEST_CASE("normalize_filters yields unit norms on random filters") {
  Fixture fx(3, 2, 16);
  Rng rng(1);
  for (double& v : fx.params.layers[0].w.data) v = rng.uniform(-1.0, 1.0);
  for (const auto& f : normalize_filters(fx.spec, fx.params, 0)) {
    double n2 = 0.0;
    for (double v : f.values) n2 += v * v;
    CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-12);
  }
}

TEST_CASE("normalize_filters rejects zero filters and non-conv layers") {
  Fixture fx(1, 2, 2);
  fx.set_filter(0, {1.0, 0.0});
  CHECK_THROWS_WITH_AS(normalize_filters(fx.spec, fx.params, 0), doctest::Contains("index 1"),
                       std::runtime_error);
  CHECK_THROWS_AS(normalize_filters(fx.spec, fx.params, 3), std::invalid_argument);
}

TEST_CASE("similarity_matrix anchors") {
  Fixture fx(1, 2, 3);
  fx.set_filter(0, {1.0, 0.0});
  fx.set_filter(1, {0.0, 1.0});
  fx.set_filter(2, {2.0, 0.0});  // same direction as filter 0
  auto m = similarity_matrix(normalize_filters(fx.spec, fx.params, 0));
  CHECK(m[0 * 3 + 1] == doctest::Approx(0.0));
  CHECK(m[0 * 3 + 2] == doctest::Approx(1.0));
  CHECK(m[1 * 3 + 0] == m[0 * 3 + 1]);
  for (int i = 0; i < 3; ++i) CHECK(m[i * 3 + i] == doctest::Approx(1.0));
}

TEST_CASE("similarity matrix invariant under positive filter rescaling") {
  Fixture a(3, 1, 6), b(3, 1, 6);
  Rng rng(2);
  for (size_t i = 0; i < a.params.layers[0].w.size(); ++i) {
    double v = rng.uniform(-1.0, 1.0);
    a.params.layers[0].w.data[i] = v;
    b.params.layers[0].w.data[i] = v;
  }
  // rescale one filter of b by 7
  for (size_t i = 0; i < b.params.layers[0].w.size(); i += 6) b.params.layers[0].w.data[i + 2] *= 7.0;
  auto ma = similarity_matrix(normalize_filters(a.spec, a.params, 0));
  auto mb = similarity_matrix(normalize_filters(b.spec, b.params, 0));
  for (size_t i = 0; i < ma.size(); ++i) CHECK(ma[i] == doctest::Approx(mb[i]).epsilon(1e-12));
  for (double s : ma) CHECK(std::abs(s) <= 1.0 + 1e-9);  // Cauchy-Schwarz
}

TEST_CASE("histogram: anchors and mass conservation") {
  Histogram h = histogram({-1.0, 0.0, 1.0}, 2, -1.0, 1.0);
  CHECK(h.counts == std::vector<size_t>{1, 2});  // right-inclusive last bin

  Rng rng(3);
  std::vector<double> vals(257);
  for (double& v : vals) v = rng.uniform(-1.0, 1.0);
  Histogram r = histogram(vals, 13, -1.0, 1.0);
  size_t total = 0;
  for (size_t c : r.counts) total += c;
  CHECK(total == vals.size());
  // sort-and-count oracle
  for (size_t bin = 0; bin < r.counts.size(); ++bin) {
    size_t expected = 0;
    for (double v : vals) {
      bool in = v >= r.edges[bin] && (v < r.edges[bin + 1] || (bin + 1 == r.counts.size() && v <= r.edges[bin + 1]));
      if (in) ++expected;
    }
    CHECK(r.counts[bin] == expected);
  }

  CHECK_THROWS_AS(histogram({}, 2, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("cumulative_abs_histogram is non-decreasing and ends at N") {
  Rng rng(4);
  std::vector<double> vals(100);
  for (double& v : vals) v = rng.uniform(-1.0, 1.0);
  Histogram h = cumulative_abs_histogram(vals, 10);
  for (size_t i = 1; i < h.counts.size(); ++i) CHECK(h.counts[i] >= h.counts[i - 1]);
  CHECK(h.counts.back() == vals.size());
}

TEST_CASE("similar_pairs: duplicates, thresholds, monotone inclusion") {
  Fixture fx(1, 2, 3);
  fx.set_filter(0, {1.0, 2.0});
  fx.set_filter(1, {2.0, 4.0});   // duplicate direction
  fx.set_filter(2, {-2.0, 1.0});  // orthogonal
  auto m = similarity_matrix(normalize_filters(fx.spec, fx.params, 0));

  auto pairs = similar_pairs(m, 3, 0.98);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].i == 0);
  CHECK(pairs[0].j == 1);

  CHECK(similar_pairs(m, 3, 1.0 + 1e-9).empty());

  // theta1 <= theta2 implies superset
  auto loose = similar_pairs(m, 3, 0.5);
  CHECK(loose.size() >= pairs.size());

  // brute-force count oracle on random matrices
  Rng rng(5);
  Fixture big(3, 1, 10);
  for (double& v : big.params.layers[0].w.data) v = rng.uniform(-1.0, 1.0);
  auto mb = similarity_matrix(normalize_filters(big.spec, big.params, 0));
  for (double th : {0.1, 0.5, 0.9}) {
    size_t expected = 0;
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j)
        if (std::abs(mb[i * 10 + j]) > th) ++expected;
    CHECK(similar_pairs(mb, 10, th).size() == expected);
  }
}

TEST_CASE("similarity_report structure and JSON round-trip") {
  Fixture fx(3, 1, 8);
  Rng rng(6);
  for (double& v : fx.params.layers[0].w.data) v = rng.uniform(-1.0, 1.0);
  SimilarityReport rep = similarity_report(fx.spec, fx.params, 0);
  for (int i = 0; i < rep.filter_count; ++i) {
    CHECK(rep.at(i, i) == doctest::Approx(1.0).epsilon(1e-9));
    for (int j = 0; j < rep.filter_count; ++j) {
      CHECK(rep.at(i, j) == rep.at(j, i));
      CHECK(std::abs(rep.at(i, j)) <= 1.0 + 1e-9);
    }
  }
  size_t total = 0;
  for (size_t c : rep.hist.counts) total += c;
  CHECK(total == static_cast<size_t>(rep.filter_count * (rep.filter_count - 1) / 2));

  auto j = nlohmann::json::parse(report_to_json(rep));
  CHECK(j.at("filter_count") == rep.filter_count);
  CHECK(j.at("matrix").size() == rep.matrix.size());
  CHECK(j.at("pairs").size() == rep.pairs.size());
}

TEST_CASE("export_filter_gallery writes two files per pair") {
  Fixture fx(3, 1, 4);
  Rng rng(7);
  for (double& v : fx.params.layers[0].w.data) v = rng.uniform(-1.0, 1.0);
  // duplicate filter 0 into filter 1
  for (size_t i = 0; i < fx.params.layers[0].w.size(); i += 4)
    fx.params.layers[0].w.data[i + 1] = fx.params.layers[0].w.data[i];

  SimilarityReport rep = similarity_report(fx.spec, fx.params, 0);
  REQUIRE(!rep.pairs.empty());
  fs::path dir = fs::temp_directory_path() / "loggrad_gallery_test";
  fs::remove_all(dir);
  int written = export_filter_gallery(fx.spec, fx.params, 0, rep.pairs, dir.string());
  CHECK(written == static_cast<int>(2 * rep.pairs.size()));
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++files;
    CHECK(e.path().extension() == ".pgm");
  }
  CHECK(files == static_cast<size_t>(written));
}
