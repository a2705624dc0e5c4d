#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "loggrad/experiment.hpp"

using namespace loggrad;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string profile = "desk";
  uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment config (partial overrides ok)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "master seed")->each([&](const std::string&) {
    opts.seed_set = true;
  });
  cmd->add_option("--profile", opts.profile, "config profile")
      ->check(CLI::IsMember({"desk", "paper"}));
}

ExperimentConfig build_config(const CommonOpts& opts) {
  ExperimentConfig cfg = ExperimentConfig::profile(opts.profile);
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg.merge_json(ss.str());
  }
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (opts.seed_set) cfg.seed = opts.seed;
  return cfg;
}

void print_rows(const std::vector<ResultRow>& rows) {
  for (const ResultRow& r : rows)
    std::printf("%s %s c1=%d c2=%d b=%g %s %s = %.6f\n", r.exp.c_str(), r.fmt.c_str(), r.c1,
                r.c2, r.b, r.split.c_str(), r.metric.c_str(), r.value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-gradient vision pipeline experiments"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string checkpoint;
  std::string train_fmt = "loggrad_1p5";
  int train_c1 = 32, train_c2 = 8;

  CLI::App* prepare = app.add_subcommand("prepare", "generate dataset, manifests and previews");
  add_common(prepare, opts);

  CLI::App* train_cmd = app.add_subcommand("train", "train one classifier");
  add_common(train_cmd, opts);
  train_cmd->add_option("--format", train_fmt, "input format");
  train_cmd->add_option("--c1", train_c1, "first conv channels");
  train_cmd->add_option("--c2", train_c2, "second conv channels");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on its test split");
  add_common(eval_cmd, opts);
  eval_cmd->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

  CLI::App* sweep_c = app.add_subcommand("sweep-channels", "accuracy vs c1 per input format");
  add_common(sweep_c, opts);

  CLI::App* sweep_b = app.add_subcommand("sweep-brightness", "accuracy vs test brightness");
  add_common(sweep_b, opts);

  CLI::App* sim = app.add_subcommand("similarity", "filter-similarity report for a checkpoint");
  add_common(sim, opts);
  sim->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

  CLI::App* recon = app.add_subcommand("reconstruct", "train the 2conv reconstruction network");
  add_common(recon, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = build_config(opts);
    std::vector<ResultRow> rows;
    if (prepare->parsed()) rows = cmd_prepare(cfg);
    else if (train_cmd->parsed())
      rows = cmd_train(cfg, parse_input_format(train_fmt), train_c1, train_c2);
    else if (eval_cmd->parsed()) rows = cmd_eval(cfg, checkpoint);
    else if (sweep_c->parsed()) rows = cmd_sweep_channels(cfg);
    else if (sweep_b->parsed()) rows = cmd_sweep_brightness(cfg);
    else if (sim->parsed()) rows = cmd_similarity(cfg, checkpoint);
    else if (recon->parsed()) rows = cmd_reconstruct(cfg);
    print_rows(rows);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
