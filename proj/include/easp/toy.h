#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "easp/emoe.h"
#include "easp/matrix.h"
#include "easp/parameter.h"
#include "easp/rng.h"

namespace easp {

// Sequence-classification stand-in task: label is the most frequent token
// id (ties to the lowest id) modulo n_classes. Perfectly learnable, so any
// accuracy gap is attributable to the model, not the data.
struct ToyTask {
  int vocab_size = 8;
  int seq_len = 8;
  int n_classes = 4;
};

struct Sample {
  std::vector<int> tokens;
  int label = 0;
};

int majority_label(std::span<const int> tokens, int n_classes);

// Sample i is a pure function of (seed, i): reordering or regenerating any
// subset reproduces the same sequences.
std::vector<Sample> generate_dataset(const ToyTask& task, uint64_t seed, int n);

struct ToyModelConfig {
  int vocab_size = 8;
  int n_classes = 4;
  int n_blocks = 2;
  EMoEConfig emoe;  // emoe.d_model is the model width

  void validate() const;
};

// Minimal host network for the elastic MoE blocks:
// embed -> n_blocks x (x + emoe(x)) -> mean pool -> affine head.
struct ToyModel {
  ToyModelConfig config;
  Parameter embedding;  // vocab_size x d_model
  std::vector<EMoELayer> blocks;
  Parameter head_w;  // d_model x n_classes
  Parameter head_b;  // 1 x n_classes

  struct Cache {
    int batch = 0;
    int seq_len = 0;
    std::vector<int> tokens;        // batch * seq_len, row order
    std::vector<Matrix> block_in;   // input to each block
    std::vector<EMoECache> block_caches;
    Matrix pooled;
  };

  std::vector<Parameter*> params();
  int d_model() const { return config.emoe.d_model; }

  // Logits for a batch of equal-length sequences; cache is optional and
  // only needed when backward will follow.
  Matrix logits(std::span<const Sample> batch, int group, Cache* cache) const;
  // Backward from dL/dlogits; accumulates into all reachable parameter grads.
  void backward(const Matrix& dlogits, const Cache& cache);

  // Mean-pooled encoder features (1 x d_model) for one sequence.
  Matrix features(std::span<const int> tokens, int group) const;

  static ToyModel make(const ToyModelConfig& cfg,
                       std::span<const double> sampling_probs = {});  // zero params
  static ToyModel build(const ToyModelConfig& cfg, Rng& rng,
                        std::span<const double> sampling_probs = {});
};

// Prunes every block to `group`; the result evaluates standalone at group 1.
ToyModel prune_model(const ToyModel& model, int group);

}  // namespace easp
