#include "loggrad/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loggrad/checkpoint.hpp"
#include "loggrad/pgm.hpp"
#include "loggrad/rng.hpp"

namespace fs = std::filesystem;

namespace loggrad {

using nlohmann::json;

ExperimentConfig::ExperimentConfig() {
  for (int e = -6; e <= 8; ++e) brightness.push_back(std::pow(2.0, e));
}

QuantizerSpec ExperimentConfig::q3() const {
  std::vector<int> codes{-1, 0, 1};
  return QuantizerSpec(q3_thresholds, codes);
}

QuantizerSpec ExperimentConfig::q5() const {
  std::vector<int> codes{-2, -1, 0, 1, 2};
  return QuantizerSpec(q5_thresholds, codes);
}

namespace {

std::string loss_name(LossKind k) {
  return k == LossKind::SoftmaxXent ? "softmax_xent" : "mse";
}

LossKind parse_loss(const std::string& s) {
  if (s == "softmax_xent") return LossKind::SoftmaxXent;
  if (s == "mse") return LossKind::MeanSquaredError;
  throw std::invalid_argument("config: unknown loss '" + s + "'");
}

// Rejects keys in `obj` that are not in `allowed` (fail-fast on typos).
void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  j["dataset"] = {{"source", dataset.source},
                  {"dir", dataset.dir},
                  {"num_images", dataset.num_images},
                  {"noise_std", dataset.noise_std}};
  j["resolution"] = resolution;
  json fmts = json::array();
  for (InputFormat f : formats) fmts.push_back(format_name(f));
  j["formats"] = fmts;
  j["quantizer"] = {{"q3_thresholds", q3_thresholds}, {"q5_thresholds", q5_thresholds}};
  j["gamma"] = gamma;
  j["arch"] = {{"c1_list", arch.c1_list}, {"c2", arch.c2}, {"kernel", arch.kernel},
               {"pool", arch.pool}};
  j["train"] = {{"epochs", train.epochs},     {"batch_size", train.batch_size},
                {"lr", train.lr},             {"lr_decay", train.lr_decay},
                {"beta1", train.adam.beta1},  {"beta2", train.adam.beta2},
                {"eps", train.adam.eps},      {"loss", loss_name(train.loss)}};
  j["recon"] = {{"kernel", recon.kernel},
                {"hidden_channels", recon.hidden_channels},
                {"epochs", recon.epochs},
                {"batch_size", recon.batch_size},
                {"lr", recon.lr}};
  j["brightness"] = brightness;
  j["split"] = {{"train", split.train_pct}, {"val", split.val_pct}, {"test", split.test_pct}};
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  return j.dump();  // nlohmann sorts object keys
}

std::string ExperimentConfig::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json())));
  return buf;
}

void ExperimentConfig::merge_json(const std::string& text) {
  json j = json::parse(text);
  check_keys(j, {"dataset", "resolution", "formats", "quantizer", "gamma", "arch", "train",
                 "recon", "brightness", "split", "seed", "out_dir"},
             "top level");
  if (j.contains("dataset")) {
    const json& d = j["dataset"];
    check_keys(d, {"source", "dir", "num_images", "noise_std"}, "dataset");
    if (d.contains("source")) dataset.source = d["source"];
    if (d.contains("dir")) dataset.dir = d["dir"];
    if (d.contains("num_images")) dataset.num_images = d["num_images"];
    if (d.contains("noise_std")) dataset.noise_std = d["noise_std"];
    if (dataset.source != "synthetic" && dataset.source != "directory")
      throw std::invalid_argument("config: dataset.source must be synthetic or directory");
  }
  if (j.contains("resolution")) resolution = j["resolution"];
  if (j.contains("formats")) {
    formats.clear();
    for (const json& f : j["formats"]) formats.push_back(parse_input_format(f));
  }
  if (j.contains("quantizer")) {
    const json& q = j["quantizer"];
    check_keys(q, {"q3_thresholds", "q5_thresholds"}, "quantizer");
    if (q.contains("q3_thresholds")) q3_thresholds = q["q3_thresholds"].get<std::vector<double>>();
    if (q.contains("q5_thresholds")) q5_thresholds = q["q5_thresholds"].get<std::vector<double>>();
  }
  if (j.contains("gamma")) gamma = j["gamma"];
  if (j.contains("arch")) {
    const json& a = j["arch"];
    check_keys(a, {"c1_list", "c2", "kernel", "pool"}, "arch");
    if (a.contains("c1_list")) arch.c1_list = a["c1_list"].get<std::vector<int>>();
    if (a.contains("c2")) arch.c2 = a["c2"];
    if (a.contains("kernel")) arch.kernel = a["kernel"];
    if (a.contains("pool")) arch.pool = a["pool"];
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    check_keys(t, {"epochs", "batch_size", "lr", "lr_decay", "beta1", "beta2", "eps", "loss"},
               "train");
    if (t.contains("epochs")) train.epochs = t["epochs"];
    if (t.contains("batch_size")) train.batch_size = t["batch_size"];
    if (t.contains("lr")) train.lr = t["lr"];
    if (t.contains("lr_decay")) train.lr_decay = t["lr_decay"];
    if (t.contains("beta1")) train.adam.beta1 = t["beta1"];
    if (t.contains("beta2")) train.adam.beta2 = t["beta2"];
    if (t.contains("eps")) train.adam.eps = t["eps"];
    if (t.contains("loss")) train.loss = parse_loss(t["loss"]);
  }
  if (j.contains("recon")) {
    const json& r = j["recon"];
    check_keys(r, {"kernel", "hidden_channels", "epochs", "batch_size", "lr"}, "recon");
    if (r.contains("kernel")) recon.kernel = r["kernel"];
    if (r.contains("hidden_channels")) recon.hidden_channels = r["hidden_channels"];
    if (r.contains("epochs")) recon.epochs = r["epochs"];
    if (r.contains("batch_size")) recon.batch_size = r["batch_size"];
    if (r.contains("lr")) recon.lr = r["lr"];
  }
  if (j.contains("brightness")) brightness = j["brightness"].get<std::vector<double>>();
  if (j.contains("split")) {
    const json& s = j["split"];
    check_keys(s, {"train", "val", "test"}, "split");
    if (s.contains("train")) split.train_pct = s["train"];
    if (s.contains("val")) split.val_pct = s["val"];
    if (s.contains("test")) split.test_pct = s["test"];
  }
  if (j.contains("seed")) seed = j["seed"];
  if (j.contains("out_dir")) out_dir = j["out_dir"];
}

ExperimentConfig ExperimentConfig::profile(const std::string& name) {
  ExperimentConfig cfg;  // struct defaults are the desk profile
  if (name == "desk") return cfg;
  if (name == "paper") {
    cfg.resolution = 224;
    cfg.dataset.source = "directory";
    cfg.train.epochs = 40;
    cfg.train.batch_size = 64;
    cfg.recon.epochs = 150;
    cfg.recon.batch_size = 128;
    return cfg;
  }
  throw std::invalid_argument("unknown profile '" + name + "'");
}

uint64_t ExperimentConfig::run_seed(const std::string& experiment_id, InputFormat fmt, int c1,
                                    double b) const {
  std::string tag = experiment_id + "/" + format_name(fmt) + "/c1=" + std::to_string(c1) +
                    "/b=" + fmt_double(b);
  return mix_seed(seed, tag);
}

void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << "exp,fmt,c1,c2,b,split,metric,value,seed,config_hash\n";
    for (const ResultRow& r : rows) {
      out << r.exp << "," << r.fmt << "," << r.c1 << "," << r.c2 << "," << fmt_double(r.b) << ","
          << r.split << "," << r.metric << "," << fmt_double(r.value) << "," << r.seed << ","
          << r.config_hash << "\n";
    }
  }
  fs::rename(tmp, path);
}

PreparedData prepare_dataset(const ExperimentConfig& cfg) {
  PreparedData data;
  if (cfg.dataset.source == "synthetic") {
    SynthParams p;
    p.resolution = cfg.resolution;
    p.noise_std = cfg.dataset.noise_std;
    data.full = synth_dataset(cfg.dataset.num_images, p, mix_seed(cfg.seed, "dataset"));
  } else {
    data.full = load_pascal_raw(cfg.dataset.dir, cfg.resolution);
  }
  SplitSpec split = cfg.split;
  split.seed = mix_seed(cfg.seed, "split");
  data.split = split_dataset(data.full, split);
  return data;
}

namespace {

SampleSet to_samples(const LabeledDataset& ds, const ExperimentConfig& cfg, InputFormat fmt) {
  QuantizerSpec q3 = cfg.q3(), q5 = cfg.q5();
  GammaSpec gamma(cfg.gamma);
  SampleSet out;
  out.reserve(ds.items.size());
  for (const LabeledItem& item : ds.items)
    out.push_back({prepare_input(item.image, fmt, q3, q5, gamma), item.label, {}});
  return out;
}

}  // namespace

FormatSamples make_samples(const PreparedData& data, const ExperimentConfig& cfg,
                           InputFormat fmt) {
  return {to_samples(data.split.train, cfg, fmt), to_samples(data.split.val, cfg, fmt),
          to_samples(data.split.test, cfg, fmt)};
}

RunOutcome train_classifier(const PreparedData& data, const ExperimentConfig& cfg,
                            InputFormat fmt, int c1, const std::string& experiment_id,
                            std::optional<int> c2_override) {
  int c2 = c2_override.value_or(cfg.arch.c2);
  RunOutcome run;
  run.spec = ModelSpec::classifier_2conv1fc(c1, c2, cfg.arch.kernel, cfg.arch.pool,
                                            cfg.resolution);
  run.seed = cfg.run_seed(experiment_id, fmt, c1);

  TrainConfig tc = cfg.train;
  tc.seed = run.seed;
  ModelParams init = init_params(run.spec, mix_seed(run.seed, "init"));
  FormatSamples samples = make_samples(data, cfg, fmt);
  TrainResult res = train(run.spec, std::move(init), samples.train, samples.val, samples.test, tc);
  run.params = std::move(res.params);
  run.history = std::move(res.history);
  return run;
}

double eval_at_brightness(const RunOutcome& run, const PreparedData& data,
                          const ExperimentConfig& cfg, InputFormat fmt, double b) {
  QuantizerSpec q3 = cfg.q3(), q5 = cfg.q5();
  GammaSpec gamma(cfg.gamma);
  BrightnessFactor factor(b);
  size_t correct = 0;
  for (const LabeledItem& item : data.split.test.items) {
    GrayImage perturbed = scale_brightness(item.image, factor);
    Tensor in = prepare_input(perturbed, fmt, q3, q5, gamma);
    Tensor logits = forward(run.spec, run.params, in);
    int best = 0;
    for (size_t i = 1; i < logits.size(); ++i)
      if (logits.data[i] > logits.data[best]) best = static_cast<int>(i);
    if (best == item.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.split.test.items.size());
}

std::string checkpoint_name(const std::string& exp, InputFormat fmt, int c1, int c2) {
  return exp + "_" + format_name(fmt) + "_c1" + std::to_string(c1) + "_c2" + std::to_string(c2) +
         ".ckpt";
}

namespace {

ResultRow make_row(const ExperimentConfig& cfg, const std::string& exp, InputFormat fmt, int c1,
                   int c2, double b, const std::string& split, const std::string& metric,
                   double value, uint64_t seed) {
  return {exp, format_name(fmt), c1, c2, b, split, metric, value, seed, cfg.config_hash()};
}

void append_results(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
  // one results.csv per out_dir; whole-file rewrite keeps the write atomic
  fs::create_directories(cfg.out_dir);
  fs::path path = fs::path(cfg.out_dir) / "results.csv";
  std::vector<ResultRow> all;
  if (fs::exists(path)) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ResultRow r;
      std::istringstream ls(line);
      std::string tok;
      std::getline(ls, r.exp, ',');
      std::getline(ls, r.fmt, ',');
      std::getline(ls, tok, ','); r.c1 = std::stoi(tok);
      std::getline(ls, tok, ','); r.c2 = std::stoi(tok);
      std::getline(ls, tok, ','); r.b = std::stod(tok);
      std::getline(ls, r.split, ',');
      std::getline(ls, r.metric, ',');
      std::getline(ls, tok, ','); r.value = std::stod(tok);
      std::getline(ls, tok, ','); r.seed = std::stoull(tok);
      std::getline(ls, r.config_hash, ',');
      all.push_back(std::move(r));
    }
  }
  all.insert(all.end(), rows.begin(), rows.end());
  write_results_csv(all, path.string());
}

GrayImage tensor_to_gray_preview(const Tensor& t) {
  GrayImage img(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]));
  double lo = 1e300, hi = -1e300;
  for (double v : t.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (size_t i = 0; i < t.data.size(); ++i) {
    double g = hi > lo ? (t.data[i] - lo) / (hi - lo) : 0.5;
    img.pixels[i] = static_cast<uint16_t>(std::lround(g * 65535.0));
  }
  return img;
}

}  // namespace

std::vector<ResultRow> cmd_prepare(const ExperimentConfig& cfg) {
  PreparedData data = prepare_dataset(cfg);
  fs::path root(cfg.out_dir);
  fs::path img_dir = root / "dataset";

  // write images per class, then manifests listing the split membership
  std::vector<std::string> paths(data.full.items.size());
  std::vector<size_t> counter(3, 0);
  for (size_t i = 0; i < data.full.items.size(); ++i) {
    const LabeledItem& item = data.full.items[i];
    fs::path cls = img_dir / data.full.class_names[item.label];
    fs::create_directories(cls);
    char name[32];
    std::snprintf(name, sizeof name, "img_%05zu.pgm", counter[item.label]++);
    paths[i] = (cls / name).string();
    save_pgm(item.image, paths[i], 16);
  }

  // manifests reference the written files by re-splitting the same order
  SplitSpec split = cfg.split;
  split.seed = mix_seed(cfg.seed, "split");
  auto [n_train, n_val, n_test] = split_sizes(data.full.items.size(), split);
  std::vector<size_t> order(data.full.items.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(split.seed, "split"));
  for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);

  auto write_manifest = [&](const std::string& name, size_t begin, size_t count) {
    json j;
    j["seed"] = split.seed;
    json files = json::array();
    for (size_t i = begin; i < begin + count; ++i) files.push_back(paths[order[i]]);
    j["files"] = files;
    std::ofstream out(root / (name + "_manifest.json"));
    out << j.dump(2) << "\n";
  };
  write_manifest("train", 0, n_train);
  write_manifest("val", n_train, n_val);
  write_manifest("test", n_train + n_val, n_test);

  // per-format previews of the first image
  fs::path prev = root / "previews";
  fs::create_directories(prev);
  QuantizerSpec q3 = cfg.q3(), q5 = cfg.q5();
  GammaSpec gamma(cfg.gamma);
  const GrayImage& first = data.full.items[0].image;
  for (InputFormat fmt : {InputFormat::Jpeg8, InputFormat::Raw16, InputFormat::LogGradFP,
                          InputFormat::LogGrad1p5, InputFormat::LogGrad2p25}) {
    Tensor t = prepare_input(first, fmt, q3, q5, gamma);
    save_pgm(tensor_to_gray_preview(t), (prev / (format_name(fmt) + ".pgm")).string(), 8);
  }

  std::vector<ResultRow> rows;
  rows.push_back(make_row(cfg, "prepare", InputFormat::Raw16, 0, 0, 1.0, "all", "num_images",
                          static_cast<double>(data.full.items.size()), cfg.seed));
  append_results(cfg, rows);
  return rows;
}

std::vector<ResultRow> cmd_train(const ExperimentConfig& cfg, InputFormat fmt, int c1, int c2) {
  PreparedData data = prepare_dataset(cfg);
  RunOutcome run = train_classifier(data, cfg, fmt, c1, "train", c2);

  fs::create_directories(cfg.out_dir);
  json meta;
  meta["experiment"] = json::parse(cfg.to_json());
  meta["exp"] = "train";
  meta["format"] = format_name(fmt);
  meta["c1"] = c1;
  meta["c2"] = c2;
  meta["test_accuracy"] = run.history.test_accuracy;
  Checkpoint ckpt{run.spec, run.params, run.seed, meta.dump()};
  fs::path ck = fs::path(cfg.out_dir) / checkpoint_name("train", fmt, c1, c2);
  save_checkpoint(ckpt, ck.string());
  write_history_csv(run.history,
                    (fs::path(cfg.out_dir) / (checkpoint_name("train", fmt, c1, c2) + ".history.csv"))
                        .string());

  std::vector<ResultRow> rows{make_row(cfg, "train", fmt, c1, c2, 1.0, "test", "accuracy",
                                       run.history.test_accuracy, run.seed)};
  append_results(cfg, rows);
  return rows;
}

std::vector<ResultRow> cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint) {
  if (!fs::exists(checkpoint)) throw std::runtime_error("eval: missing checkpoint " + checkpoint);
  Checkpoint ckpt = load_checkpoint(checkpoint);
  json meta = json::parse(ckpt.config_json);

  ExperimentConfig run_cfg;
  run_cfg.merge_json(meta.at("experiment").dump());
  InputFormat fmt = parse_input_format(meta.at("format"));
  PreparedData data = prepare_dataset(run_cfg);
  FormatSamples samples = make_samples(data, run_cfg, fmt);
  double acc = evaluate(ckpt.spec, ckpt.params, samples.test, LossKind::SoftmaxXent);

  std::vector<ResultRow> rows{make_row(cfg, "eval", fmt, meta.at("c1"), meta.at("c2"), 1.0,
                                       "test", "accuracy", acc, ckpt.seed)};
  append_results(cfg, rows);
  return rows;
}

std::vector<ResultRow> cmd_sweep_channels(const ExperimentConfig& cfg) {
  PreparedData data = prepare_dataset(cfg);
  std::vector<ResultRow> rows;
  for (InputFormat fmt : cfg.formats) {
    for (int c1 : cfg.arch.c1_list) {
      RunOutcome run = train_classifier(data, cfg, fmt, c1, "sweep_channels");
      rows.push_back(make_row(cfg, "sweep_channels", fmt, c1, cfg.arch.c2, 1.0, "test",
                              "accuracy", run.history.test_accuracy, run.seed));
    }
  }
  append_results(cfg, rows);
  return rows;
}

std::vector<ResultRow> cmd_sweep_brightness(const ExperimentConfig& cfg) {
  PreparedData data = prepare_dataset(cfg);
  int c1 = cfg.arch.c1_list.empty() ? 32 : cfg.arch.c1_list.back();
  std::vector<ResultRow> rows;
  for (InputFormat fmt : cfg.formats) {
    RunOutcome run = train_classifier(data, cfg, fmt, c1, "sweep_brightness");
    for (double b : cfg.brightness) {
      double acc = eval_at_brightness(run, data, cfg, fmt, b);
      rows.push_back(make_row(cfg, "sweep_brightness", fmt, c1, cfg.arch.c2, b, "test",
                              "accuracy", acc, run.seed));
    }
  }
  append_results(cfg, rows);
  return rows;
}

std::vector<ResultRow> cmd_similarity(const ExperimentConfig& cfg, const std::string& checkpoint) {
  if (!fs::exists(checkpoint))
    throw std::runtime_error("similarity: missing checkpoint " + checkpoint);
  Checkpoint ckpt = load_checkpoint(checkpoint);
  json meta = ckpt.config_json.empty() ? json(nullptr) : json::parse(ckpt.config_json);
  std::string fmt_name =
      meta.is_object() && meta.contains("format") ? std::string(meta["format"]) : "raw16";

  std::vector<ResultRow> rows;
  int conv_index = 0;
  for (size_t li = 0; li < ckpt.params.layers.size(); ++li) {
    if (ckpt.params.layers[li].w.shape.size() != 4) continue;  // conv layers only
    SimilarityReport rep = similarity_report(ckpt.spec, ckpt.params, static_cast<int>(li));
    fs::create_directories(cfg.out_dir);
    fs::path base = fs::path(cfg.out_dir) /
                    (fs::path(checkpoint).stem().string() + "_L" + std::to_string(li));
    std::ofstream(base.string() + "_similarity.json") << report_to_json(rep) << "\n";
    export_filter_gallery(ckpt.spec, ckpt.params, static_cast<int>(li), rep.pairs,
                          base.string() + "_gallery");

    ResultRow r{"similarity", fmt_name, 0, 0, 1.0, "all",
                "similar_pairs_L" + std::to_string(li),
                static_cast<double>(rep.pairs.size()), ckpt.seed, cfg.config_hash()};
    rows.push_back(r);
    ++conv_index;
  }
  if (conv_index == 0) throw std::runtime_error("similarity: checkpoint has no conv layers");
  append_results(cfg, rows);
  return rows;
}

std::vector<ResultRow> cmd_reconstruct(const ExperimentConfig& cfg) {
  PreparedData data = prepare_dataset(cfg);
  QuantizerSpec q3 = cfg.q3(), q5 = cfg.q5();
  GammaSpec gamma(cfg.gamma);

  std::vector<ResultRow> rows;
  for (InputFormat fmt : {InputFormat::LogGradFP, InputFormat::LogGrad1p5}) {
    auto build = [&](const LabeledDataset& ds) {
      SampleSet out;
      for (const LabeledItem& item : ds.items) {
        Sample s;
        s.input = prepare_input(item.image, fmt, q3, q5, gamma);
        s.target = prepare_input(item.image, InputFormat::Raw16, q3, q5, gamma);
        out.push_back(std::move(s));
      }
      return out;
    };
    SampleSet train_s = build(data.split.train), val_s = build(data.split.val),
              test_s = build(data.split.test);

    ModelSpec spec = ModelSpec::reconstructor_2conv(cfg.recon.kernel, cfg.recon.hidden_channels,
                                                    cfg.resolution);
    uint64_t seed = cfg.run_seed("reconstruct", fmt, cfg.recon.hidden_channels);
    ModelParams init = init_params(spec, mix_seed(seed, "init"));
    double initial_mse = evaluate(spec, init, train_s, LossKind::MeanSquaredError);

    TrainConfig tc;
    tc.epochs = cfg.recon.epochs;
    tc.batch_size = cfg.recon.batch_size;
    tc.lr = cfg.recon.lr;
    tc.lr_decay = 1.0;
    tc.seed = seed;
    tc.loss = LossKind::MeanSquaredError;
    TrainResult res = train(spec, std::move(init), train_s, val_s, test_s, tc);
    double final_mse = evaluate(spec, res.params, train_s, LossKind::MeanSquaredError);

    // 3-column grid per sample: input gradients, reconstruction, ground truth
    fs::path grid_dir = fs::path(cfg.out_dir) / ("recon_" + format_name(fmt));
    fs::create_directories(grid_dir);
    int n_preview = std::min<size_t>(4, test_s.size());
    for (int i = 0; i < n_preview; ++i) {
      const Sample& s = test_s[i];
      Tensor pred = forward(spec, res.params, s.input);
      int h = cfg.resolution, w = cfg.resolution;
      GrayImage grid(h, 3 * w);
      GrayImage in_v = tensor_to_gray_preview(s.input);
      GrayImage pr_v = tensor_to_gray_preview(pred);
      GrayImage gt_v = tensor_to_gray_preview(s.target);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          grid.at(y, x) = in_v.at(y, x);
          grid.at(y, w + x) = pr_v.at(y, x);
          grid.at(y, 2 * w + x) = gt_v.at(y, x);
        }
      save_pgm(grid, (grid_dir / ("grid_" + std::to_string(i) + ".pgm")).string(), 16);
    }

    fs::create_directories(cfg.out_dir);
    Checkpoint ckpt{spec, res.params, seed, "{\"exp\":\"reconstruct\",\"format\":\"" +
                                                format_name(fmt) + "\"}"};
    save_checkpoint(ckpt, (fs::path(cfg.out_dir) /
                           checkpoint_name("reconstruct", fmt, cfg.recon.hidden_channels, 1))
                              .string());

    rows.push_back(make_row(cfg, "reconstruct", fmt, cfg.recon.hidden_channels, 1, 1.0, "train",
                            "mse_initial", initial_mse, seed));
    rows.push_back(make_row(cfg, "reconstruct", fmt, cfg.recon.hidden_channels, 1, 1.0, "train",
                            "mse_final", final_mse, seed));
    rows.push_back(make_row(cfg, "reconstruct", fmt, cfg.recon.hidden_channels, 1, 1.0, "test",
                            "mse", res.history.test_accuracy, seed));
  }
  append_results(cfg, rows);
  return rows;
}

}  // namespace loggrad
