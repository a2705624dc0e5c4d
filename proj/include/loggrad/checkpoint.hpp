#pragma once

#include <cstdint>
#include <string>

#include "loggrad/net.hpp"

namespace loggrad {

// Checkpoint file layout: u32 little-endian header length, JSON header
// {spec, shapes, seed, config}, then raw little-endian float64 payloads
// per tensor in declared order (for each layer: weights, then biases).
struct Checkpoint {
  ModelSpec spec;
  ModelParams params;
  uint64_t seed = 0;
  std::string config_json;  // free-form run metadata
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace loggrad
