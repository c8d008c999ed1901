#pragma once

#include <string>

#include <json.hpp>

#include "easp/pipeline.h"
#include "easp/toy.h"
#include "easp/trainer.h"

namespace easp {

// Single JSON document driving the CLI. Every field has a default; unknown
// keys are rejected so typos fail loudly instead of silently using a
// default.
struct RunConfig {
  uint64_t seed = 42;

  ToyTask task;            // vocab_size, seq_len, n_classes
  ToyModelConfig model;    // n_blocks + emoe dims
  TrainConfig train;
  int train_samples = 4096;
  int eval_samples = 2000;

  PipelineParams pipeline;
  nlohmann::json primary_engine = {{"type", "synthetic"}};
  nlohmann::json copilot_engine = {{"type", "synthetic"}};
  std::string phonemizer_path;  // empty: identity mapping
  std::string vocab_path;       // empty: built-in default vocabulary

  static RunConfig defaults();
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load_file(const std::string& path);
  nlohmann::json to_json() const;
};

}  // namespace easp
