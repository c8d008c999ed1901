#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "easp/checkpoint.h"
#include "easp/toy.h"

namespace easp {

struct TrainConfig {
  int steps = 2000;
  int batch_size = 16;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  uint64_t seed = 0;
  bool dynamic_groups = true;  // false: train a single fixed group
  int fixed_group = 1;
  std::vector<double> sampling_probs;  // optional schedule override
  int eval_every = 0;                  // 0: record metrics only at the end
};

struct MetricsRecord {
  int step = 0;
  int group_index = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

using MetricsLog = std::vector<MetricsRecord>;

void write_metrics_ndjson(std::ostream& out, const MetricsLog& log);

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Read-only forward pass over the dataset at one group.
EvalResult evaluate(const ToyModel& model, std::span<const Sample> data, int group);

// One group is sampled per batch in dynamic mode. The trajectory is a pure
// function of (model init, data, config.seed).
MetricsLog train(ToyModel& model, std::span<const Sample> train_data,
                 std::span<const Sample> eval_data, const TrainConfig& cfg);

// Checkpoint glue: model config + schedule + parameters, plus an arbitrary
// run-config snapshot under meta["run_config"].
Checkpoint model_to_checkpoint(ToyModel& model, const nlohmann::json& run_config);
ToyModel model_from_checkpoint(const Checkpoint& ck);
nlohmann::json checkpoint_run_config(const Checkpoint& ck);

}  // namespace easp
