#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loggrad/experiment.hpp"

using namespace loggrad;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// tiny config so experiment-level tests run in seconds
ExperimentConfig tiny_config(const std::string& out_dir) {
  ExperimentConfig cfg;
  cfg.resolution = 32;
  cfg.dataset.num_images = 90;
  cfg.train.epochs = 3;
  cfg.train.batch_size = 16;
  cfg.arch.c1_list = {2};
  cfg.brightness = {0.5, 1.0, 2.0};
  cfg.formats = {InputFormat::Raw16, InputFormat::LogGrad1p5};
  cfg.out_dir = out_dir;
  cfg.seed = 424242;
  return cfg;
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("config hash is sensitive to thresholds and stable otherwise") {
  ExperimentConfig a, b;
  CHECK(a.config_hash() == b.config_hash());
  b.q3_thresholds = {-0.11, 0.11};
  CHECK(a.config_hash() != b.config_hash());

  ExperimentConfig c;
  c.gamma = 2.4;
  CHECK(a.config_hash() != c.config_hash());
}

TEST_CASE("merge_json rejects unknown keys and applies partial overrides") {
  ExperimentConfig cfg;
  cfg.merge_json(R"({"train": {"epochs": 7}, "resolution": 64})");
  CHECK(cfg.train.epochs == 7);
  CHECK(cfg.resolution == 64);
  CHECK(cfg.train.batch_size == 64);  // untouched default

  CHECK_THROWS_WITH_AS(cfg.merge_json(R"({"epochz": 3})"), doctest::Contains("unknown key"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(cfg.merge_json(R"({"train": {"epochz": 3}})"),
                       doctest::Contains("epochz"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.merge_json(R"({"dataset": {"source": "ftp"}})"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.merge_json(R"({"formats": ["png"]})"), std::invalid_argument);
}

TEST_CASE("config JSON round-trips through merge") {
  ExperimentConfig a;
  a.resolution = 48;
  a.train.epochs = 11;
  a.q5_thresholds = {-0.4, -0.2, 0.2, 0.4};
  ExperimentConfig b;
  b.merge_json(a.to_json());
  CHECK(a.to_json() == b.to_json());
  CHECK(a.config_hash() == b.config_hash());
}

TEST_CASE("profiles: desk defaults, paper overrides, bad name rejected") {
  ExperimentConfig desk = ExperimentConfig::profile("desk");
  CHECK(desk.resolution == 96);
  ExperimentConfig paper = ExperimentConfig::profile("paper");
  CHECK(paper.resolution == 224);
  CHECK(paper.recon.epochs == 150);
  CHECK_THROWS_AS(ExperimentConfig::profile("napkin"), std::invalid_argument);
}

TEST_CASE("run seeds differ across runs but reproduce") {
  ExperimentConfig cfg;
  uint64_t a = cfg.run_seed("sweep", InputFormat::Raw16, 2);
  uint64_t b = cfg.run_seed("sweep", InputFormat::Raw16, 4);
  uint64_t c = cfg.run_seed("sweep", InputFormat::LogGrad1p5, 2);
  CHECK(a != b);
  CHECK(a != c);
  CHECK(a == cfg.run_seed("sweep", InputFormat::Raw16, 2));
}

TEST_CASE("cmd_prepare writes manifests with 70/15/15 sizes and previews") {
  fs::path out = fresh_dir("loggrad_prepare_test");
  ExperimentConfig cfg = tiny_config(out.string());
  cmd_prepare(cfg);

  auto train_m = nlohmann::json::parse(slurp(out / "train_manifest.json"));
  auto val_m = nlohmann::json::parse(slurp(out / "val_manifest.json"));
  auto test_m = nlohmann::json::parse(slurp(out / "test_manifest.json"));
  CHECK(train_m.at("files").size() == 64);  // 90 - 13 - 13
  CHECK(val_m.at("files").size() == 13);
  CHECK(test_m.at("files").size() == 13);
  for (const auto& f : train_m.at("files")) CHECK(fs::exists(f.get<std::string>()));

  for (const char* fmt : {"jpeg8", "raw16", "loggrad_fp", "loggrad_1p5", "loggrad_2p25"})
    CHECK(fs::exists(out / "previews" / (std::string(fmt) + ".pgm")));

  // rerun reproduces identical manifests
  std::string before = slurp(out / "train_manifest.json");
  cmd_prepare(cfg);
  CHECK(slurp(out / "train_manifest.json") == before);
}

TEST_CASE("cmd_train then cmd_eval reproduces the test accuracy exactly") {
  fs::path out = fresh_dir("loggrad_train_eval_test");
  ExperimentConfig cfg = tiny_config(out.string());
  auto rows = cmd_train(cfg, InputFormat::LogGrad1p5, 2, 4);
  REQUIRE(rows.size() == 1);

  fs::path ckpt = out / checkpoint_name("train", InputFormat::LogGrad1p5, 2, 4);
  REQUIRE(fs::exists(ckpt));
  auto eval_rows = cmd_eval(cfg, ckpt.string());
  REQUIRE(eval_rows.size() == 1);
  CHECK(eval_rows[0].value == rows[0].value);

  CHECK_THROWS_WITH_AS(cmd_eval(cfg, (out / "missing.ckpt").string()),
                       doctest::Contains("missing checkpoint"), std::runtime_error);
}

TEST_CASE("sweep rows carry the config hash and fixed columns") {
  fs::path out = fresh_dir("loggrad_sweep_test");
  ExperimentConfig cfg = tiny_config(out.string());
  auto rows = cmd_sweep_channels(cfg);
  CHECK(rows.size() == 2);  // 2 formats x 1 width
  for (const ResultRow& r : rows) {
    CHECK(r.config_hash == cfg.config_hash());
    CHECK(r.metric == "accuracy");
    CHECK(r.split == "test");
    CHECK(r.c2 == cfg.arch.c2);
  }

  std::string csv = slurp(out / "results.csv");
  CHECK(csv.rfind("exp,fmt,c1,c2,b,split,metric,value,seed,config_hash\n", 0) == 0);
}

TEST_CASE("results.csv is byte-identical across reruns of the same config") {
  fs::path out = fresh_dir("loggrad_det");
  ExperimentConfig cfg = tiny_config(out.string());
  cmd_sweep_channels(cfg);
  std::string first = slurp(out / "results.csv");
  fs::remove(out / "results.csv");
  cmd_sweep_channels(cfg);
  CHECK(slurp(out / "results.csv") == first);
}

TEST_CASE("brightness sweep leaves the stored dataset untouched") {
  fs::path out = fresh_dir("loggrad_bsweep_test");
  ExperimentConfig cfg = tiny_config(out.string());
  cfg.formats = {InputFormat::LogGrad1p5};

  PreparedData data = prepare_dataset(cfg);
  std::vector<uint16_t> first = data.split.test.items[0].image.pixels;
  RunOutcome run = train_classifier(data, cfg, InputFormat::LogGrad1p5, 2, "sweep_brightness");
  eval_at_brightness(run, data, cfg, InputFormat::LogGrad1p5, 4.0);
  CHECK(data.split.test.items[0].image.pixels == first);

  auto rows = cmd_sweep_brightness(cfg);
  CHECK(rows.size() == cfg.brightness.size());
  // b = 1 row equals the unperturbed test accuracy
  double acc_b1 = -1, acc_eval = evaluate(run.spec, run.params,
                                          make_samples(data, cfg, InputFormat::LogGrad1p5).test,
                                          LossKind::SoftmaxXent);
  for (const ResultRow& r : rows)
    if (r.b == 1.0) acc_b1 = r.value;
  CHECK(acc_b1 == acc_eval);
}

TEST_CASE("checkpoint naming scheme") {
  CHECK(checkpoint_name("sweep", InputFormat::LogGrad2p25, 16, 8) ==
        "sweep_loggrad_2p25_c116_c28.ckpt");
}
