#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loggrad/analysis.hpp"
#include "loggrad/dataset.hpp"
#include "loggrad/preproc.hpp"
#include "loggrad/train.hpp"

namespace loggrad {

struct DatasetConfig {
  std::string source = "synthetic";  // or "directory"
  std::string dir;                   // directory source only
  size_t num_images = 600;
  double noise_std = 8.0;
};

struct ArchConfig {
  std::vector<int> c1_list{2, 4, 8, 16, 32};
  int c2 = 8;
  int kernel = 5;
  int pool = 4;
};

struct ReconConfig {
  int kernel = 16;
  int hidden_channels = 10;
  int epochs = 10;
  int batch_size = 16;
  double lr = 0.0002;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  int resolution = 96;
  std::vector<InputFormat> formats{InputFormat::Jpeg8, InputFormat::Raw16,
                                   InputFormat::LogGradFP, InputFormat::LogGrad1p5,
                                   InputFormat::LogGrad2p25};
  std::vector<double> q3_thresholds{-0.10, 0.10};
  std::vector<double> q5_thresholds{-0.35, -0.10, 0.10, 0.35};
  double gamma = 2.2;
  ArchConfig arch;
  TrainConfig train;
  ReconConfig recon;
  std::vector<double> brightness;  // defaults to 2^-6 .. 2^8
  SplitSpec split;
  uint64_t seed = 12345;
  std::string out_dir = "out";

  ExperimentConfig();

  QuantizerSpec q3() const;
  QuantizerSpec q5() const;

  // Canonical JSON (sorted keys); the config hash is FNV-1a over it.
  std::string to_json() const;
  std::string config_hash() const;

  // Strict parse: unknown keys anywhere are an error. Missing keys keep
  // the current values, so a file may override only part of a profile.
  void merge_json(const std::string& json_text);

  static ExperimentConfig profile(const std::string& name);  // "desk" or "paper"

  // Per-run seed, independent but reproducible across runs.
  uint64_t run_seed(const std::string& experiment_id, InputFormat fmt, int c1,
                    double b = 1.0) const;
};

struct ResultRow {
  std::string exp;
  std::string fmt;
  int c1 = 0;
  int c2 = 0;
  double b = 1.0;
  std::string split;
  std::string metric;
  double value = 0.0;
  uint64_t seed = 0;
  std::string config_hash;
};

// Header: exp,fmt,c1,c2,b,split,metric,value,seed,config_hash.
// Written atomically (temp file + rename).
void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path);

struct PreparedData {
  LabeledDataset full;
  SplitResult split;
};

PreparedData prepare_dataset(const ExperimentConfig& cfg);

// Split images converted to network inputs for one format.
struct FormatSamples {
  SampleSet train, val, test;
};

FormatSamples make_samples(const PreparedData& data, const ExperimentConfig& cfg,
                           InputFormat fmt);

struct RunOutcome {
  ModelSpec spec;
  ModelParams params;
  TrainHistory history;
  uint64_t seed = 0;
};

// Trains one 2conv1fc classifier for (fmt, c1); c2/kernel/pool from config.
RunOutcome train_classifier(const PreparedData& data, const ExperimentConfig& cfg,
                            InputFormat fmt, int c1, const std::string& experiment_id,
                            std::optional<int> c2_override = std::nullopt);

// Test accuracy of a trained classifier on brightness-perturbed test images
// (perturbation applied in the linear domain before preprocessing; the
// stored dataset is never mutated).
double eval_at_brightness(const RunOutcome& run, const PreparedData& data,
                          const ExperimentConfig& cfg, InputFormat fmt, double b);

// Subcommand bodies; each returns the rows it appended to results.csv.
std::vector<ResultRow> cmd_prepare(const ExperimentConfig& cfg);
std::vector<ResultRow> cmd_sweep_channels(const ExperimentConfig& cfg);
std::vector<ResultRow> cmd_sweep_brightness(const ExperimentConfig& cfg);
std::vector<ResultRow> cmd_train(const ExperimentConfig& cfg, InputFormat fmt, int c1, int c2);
std::vector<ResultRow> cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint);
std::vector<ResultRow> cmd_similarity(const ExperimentConfig& cfg,
                                      const std::string& checkpoint);
std::vector<ResultRow> cmd_reconstruct(const ExperimentConfig& cfg);

std::string checkpoint_name(const std::string& exp, InputFormat fmt, int c1, int c2);

}  // namespace loggrad
