#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "loggrad/dataset.hpp"
#include "loggrad/image.hpp"
#include "loggrad/pgm.hpp"
#include "loggrad/rng.hpp"

using namespace loggrad;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  fs::path d = fs::temp_directory_path() / "loggrad_sensor_io_test";
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

GrayImage random_image(Rng& rng, int h, int w) {
  GrayImage img(h, w);
  for (auto& p : img.pixels) p = static_cast<uint16_t>(rng.uniform_index(65536));
  return img;
}

}  // namespace

TEST_CASE("load_pgm reads 16-bit values exactly") {
  fs::path p = temp_dir() / "a16.pgm";
  std::string payload;
  for (uint16_t v : {0, 100, 200, 65535}) {
    payload.push_back(static_cast<char>(v >> 8));
    payload.push_back(static_cast<char>(v & 0xff));
  }
  write_file(p, "P5\n2 2\n65535\n" + payload);
  GrayImage img = load_pgm(p.string());
  CHECK(img.height == 2);
  CHECK(img.width == 2);
  CHECK(img.pixels == std::vector<uint16_t>{0, 100, 200, 65535});
}

TEST_CASE("load_pgm promotes 8-bit to 16-bit range") {
  fs::path p = temp_dir() / "a8.pgm";
  write_file(p, std::string("P5\n1 1\n255\n") + '\xff');
  GrayImage img = load_pgm(p.string());
  CHECK(img.pixels[0] == 65535);
}

TEST_CASE("load_pgm rejects bad input") {
  fs::path d = temp_dir();
  write_file(d / "p2.pgm", "P2\n1 1\n255\n0");
  CHECK_THROWS_WITH_AS(load_pgm((d / "p2.pgm").string()),
                       doctest::Contains("unsupported format"), std::runtime_error);

  write_file(d / "maxval.pgm", std::string("P5\n1 1\n1023\n") + "\0\0");
  CHECK_THROWS_WITH_AS(load_pgm((d / "maxval.pgm").string()),
                       doctest::Contains("unsupported maxval"), std::runtime_error);

  write_file(d / "trunc.pgm", "P5\n4 4\n65535\nxx");
  CHECK_THROWS_WITH_AS(load_pgm((d / "trunc.pgm").string()), doctest::Contains("truncated"),
                       std::runtime_error);

  CHECK_THROWS_AS(load_pgm((d / "missing.pgm").string()), std::runtime_error);
}

TEST_CASE("save_pgm endpoints") {
  fs::path d = temp_dir();
  GrayImage img(1, 2);
  img.pixels = {0, 65535};
  save_pgm(img, (d / "ends.pgm").string(), 16);
  std::ifstream in(d / "ends.pgm", std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header == "P5");

  GrayImage white(1, 1, 65535);
  save_pgm(white, (d / "white8.pgm").string(), 8);
  std::ifstream in8(d / "white8.pgm", std::ios::binary);
  std::string all((std::istreambuf_iterator<char>(in8)), std::istreambuf_iterator<char>());
  CHECK(static_cast<unsigned char>(all.back()) == 255);
}

TEST_CASE("PGM 16-bit round-trip identity on random images") {
  fs::path p = temp_dir() / "rt.pgm";
  Rng rng(42);
  for (int it = 0; it < 20; ++it) {
    GrayImage img = random_image(rng, 5 + static_cast<int>(rng.uniform_index(12)),
                                 5 + static_cast<int>(rng.uniform_index(12)));
    save_pgm(img, p.string(), 16);
    GrayImage back = load_pgm(p.string());
    REQUIRE(back.pixels == img.pixels);
  }
}

TEST_CASE("demosaic uniform and single quad") {
  BayerRaw uni(4, 4);
  for (auto& v : uni.pixels) v = 777;
  GrayImage g = demosaic_to_gray(uni);
  CHECK(g.height == 2);
  CHECK(g.width == 2);
  for (auto v : g.pixels) CHECK(v == 777);

  BayerRaw quad(2, 2);
  quad.at(0, 0) = 100;
  quad.at(0, 1) = 200;
  quad.at(1, 0) = 300;
  quad.at(1, 1) = 400;
  CHECK(demosaic_to_gray(quad).pixels[0] == 250);
}

TEST_CASE("demosaic equals brute-force quad means on random mosaics") {
  Rng rng(7);
  for (int it = 0; it < 10; ++it) {
    BayerRaw raw(4, 4);
    for (auto& v : raw.pixels) v = static_cast<uint16_t>(rng.uniform_index(65536));
    GrayImage g = demosaic_to_gray(raw);
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) {
        double mean = (raw.at(2 * y, 2 * x) + raw.at(2 * y, 2 * x + 1) + raw.at(2 * y + 1, 2 * x) +
                       raw.at(2 * y + 1, 2 * x + 1)) /
                      4.0;
        CHECK(g.at(y, x) == static_cast<uint16_t>(std::lround(mean)));
      }
  }
}

TEST_CASE("BayerRaw requires even dimensions") {
  CHECK_THROWS_AS(BayerRaw(3, 4), std::invalid_argument);
}

TEST_CASE("scale_brightness arithmetic and clamping") {
  GrayImage img(1, 3);
  img.pixels = {30000, 40000, 65535};

  GrayImage same = scale_brightness(img, BrightnessFactor(1.0));
  CHECK(same.pixels == img.pixels);

  GrayImage doubled = scale_brightness(img, BrightnessFactor(2.0));
  CHECK(doubled.pixels[0] == 60000);
  CHECK(doubled.pixels[1] == 65535);  // clamped

  GrayImage dark = scale_brightness(img, BrightnessFactor(1.0 / 64.0));
  CHECK(dark.pixels[2] == 1024);
}

TEST_CASE("scale_brightness is monotone in b") {
  Rng rng(3);
  GrayImage img = random_image(rng, 4, 4);
  std::vector<double> factors{0.1, 0.5, 1.0, 1.5, 2.0, 4.0, 16.0};
  for (size_t i = 0; i + 1 < factors.size(); ++i) {
    GrayImage lo = scale_brightness(img, BrightnessFactor(factors[i]));
    GrayImage hi = scale_brightness(img, BrightnessFactor(factors[i + 1]));
    for (size_t k = 0; k < img.size(); ++k) CHECK(lo.pixels[k] <= hi.pixels[k]);
  }
}

TEST_CASE("scale_brightness composes on clamp-free power-of-two cases") {
  Rng rng(4);
  GrayImage img(6, 6);
  for (auto& p : img.pixels) p = static_cast<uint16_t>(rng.uniform_index(65536 / 8));
  for (auto [b1, b2] : std::vector<std::pair<double, double>>{{2, 4}, {2, 2}, {4, 2}}) {
    GrayImage two_step = scale_brightness(scale_brightness(img, BrightnessFactor(b1)),
                                          BrightnessFactor(b2));
    GrayImage one_step = scale_brightness(img, BrightnessFactor(b1 * b2));
    CHECK(two_step.pixels == one_step.pixels);
  }
}

TEST_CASE("split sizes: floor with remainder to train") {
  SplitSpec spec{70, 15, 15, 1};
  auto [tr, va, te] = split_sizes(100, spec);
  CHECK(tr == 70);
  CHECK(va == 15);
  CHECK(te == 15);

  auto [tr2, va2, te2] = split_sizes(6550, spec);
  CHECK(tr2 == 4586);
  CHECK(va2 == 982);
  CHECK(te2 == 982);
}

TEST_CASE("split_dataset is a deterministic partition") {
  SynthParams p;
  p.resolution = 16;
  LabeledDataset ds = synth_dataset(40, p, 11);
  SplitSpec spec{70, 15, 15, 99};

  SplitResult a = split_dataset(ds, spec);
  SplitResult b = split_dataset(ds, spec);
  CHECK(a.train.items.size() == 28);
  CHECK(a.val.items.size() == 6);
  CHECK(a.test.items.size() == 6);
  for (size_t i = 0; i < a.train.items.size(); ++i)
    CHECK(a.train.items[i].image.pixels == b.train.items[i].image.pixels);

  // union == original multiset
  auto key = [](const LabeledItem& it) { return it.image.pixels; };
  std::map<std::vector<uint16_t>, int> counts;
  for (const auto& it : ds.items) counts[key(it)]++;
  for (const auto* split : {&a.train, &a.val, &a.test})
    for (const auto& it : split->items) counts[key(it)]--;
  for (const auto& [k, c] : counts) CHECK(c == 0);
}

TEST_CASE("split_dataset rejects degenerate fractions") {
  SynthParams p;
  p.resolution = 16;
  LabeledDataset ds = synth_dataset(6, p, 1);
  CHECK_THROWS_AS(split_dataset(ds, SplitSpec{70, 15, 15, 0}), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(ds, SplitSpec{80, 15, 15, 0}), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(ds, SplitSpec{100, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("synth_scene is deterministic and ratio-consistent in illum") {
  SynthParams p;
  p.resolution = 32;
  GrayImage a = synth_scene(1, BrightnessFactor(1.0), p, 5);
  GrayImage b = synth_scene(1, BrightnessFactor(1.0), p, 5);
  CHECK(a.pixels == b.pixels);

  SynthParams clean = p;
  clean.noise_std = 0.0;
  GrayImage x1 = synth_scene(2, BrightnessFactor(1.0), clean, 9);
  GrayImage x2 = synth_scene(2, BrightnessFactor(2.0), clean, 9);
  for (size_t i = 0; i < x1.size(); ++i) {
    if (x2.pixels[i] == 65535) continue;  // clipped
    CHECK(std::abs(static_cast<double>(x2.pixels[i]) - 2.0 * x1.pixels[i]) <= 2.0);
  }
}

TEST_CASE("load_pascal_raw reads class folders and resizes") {
  fs::path root = temp_dir() / "praw";
  fs::remove_all(root);
  for (const char* cls : {"bicycle", "car", "person"}) {
    fs::create_directories(root / cls);
    GrayImage img(8, 8, 1000);
    save_pgm(img, (root / cls / "x.pgm").string(), 16);
  }
  LabeledDataset ds = load_pascal_raw(root.string(), 4);
  CHECK(ds.items.size() == 3);
  CHECK(ds.items[0].image.height == 4);

  fs::create_directories(root / "bicycle2");  // 4th class dir
  CHECK_THROWS_AS(load_pascal_raw(root.string(), 4), std::runtime_error);
  fs::remove_all(root / "bicycle2");

  fs::remove(root / "car" / "x.pgm");
  CHECK_THROWS_WITH_AS(load_pascal_raw(root.string(), 4), doctest::Contains("empty class"),
                       std::runtime_error);
}

TEST_CASE("bilinear resize of 2x2 checkerboard to 1x1 gives the center value") {
  GrayImage img(2, 2);
  img.pixels = {0, 65535, 65535, 0};
  GrayImage out = resize_bilinear(img, 1, 1);
  CHECK(out.pixels[0] == 32768);
}
