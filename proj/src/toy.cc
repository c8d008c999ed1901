#include "easp/toy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "easp/ops.h"

namespace easp {

int majority_label(std::span<const int> tokens, int n_classes) {
  if (tokens.empty()) throw std::invalid_argument("majority_label: empty sequence");
  int best_id = -1;
  int best_count = 0;
  std::vector<int> counts;
  for (int t : tokens) {
    if (t >= static_cast<int>(counts.size())) counts.resize(t + 1, 0);
    ++counts[t];
  }
  for (int id = 0; id < static_cast<int>(counts.size()); ++id) {
    if (counts[id] > best_count) {
      best_count = counts[id];
      best_id = id;
    }
  }
  return best_id % n_classes;
}

std::vector<Sample> generate_dataset(const ToyTask& task, uint64_t seed, int n) {
  if (n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
  std::vector<Sample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
    Sample s;
    s.tokens.reserve(task.seq_len);
    for (int j = 0; j < task.seq_len; ++j) {
      s.tokens.push_back(static_cast<int>(rng.next_u64() % task.vocab_size));
    }
    s.label = majority_label(s.tokens, task.n_classes);
    out.push_back(std::move(s));
  }
  return out;
}

void ToyModelConfig::validate() const {
  emoe.validate();
  if (vocab_size < 1) throw std::invalid_argument("toy model: vocab_size must be >= 1");
  if (n_classes < 2) throw std::invalid_argument("toy model: n_classes must be >= 2");
  if (n_blocks < 1) throw std::invalid_argument("toy model: n_blocks must be >= 1");
}

std::vector<Parameter*> ToyModel::params() {
  std::vector<Parameter*> out;
  out.push_back(&embedding);
  for (EMoELayer& b : blocks) {
    for (Parameter* p : b.params()) out.push_back(p);
  }
  out.push_back(&head_w);
  out.push_back(&head_b);
  return out;
}

ToyModel ToyModel::make(const ToyModelConfig& cfg, std::span<const double> sampling_probs) {
  cfg.validate();
  ToyModel m;
  m.config = cfg;
  m.embedding = Parameter("embedding", cfg.vocab_size, cfg.emoe.d_model);
  for (int b = 0; b < cfg.n_blocks; ++b) {
    m.blocks.push_back(
        make_layer(cfg.emoe, "blocks." + std::to_string(b) + ".", sampling_probs));
  }
  m.head_w = Parameter("head.w", cfg.emoe.d_model, cfg.n_classes);
  m.head_b = Parameter("head.b", 1, cfg.n_classes);
  return m;
}

ToyModel ToyModel::build(const ToyModelConfig& cfg, Rng& rng,
                         std::span<const double> sampling_probs) {
  ToyModel m = make(cfg, sampling_probs);
  const double a = std::sqrt(1.0 / cfg.emoe.d_model);
  for (Parameter* p : m.params()) {
    for (double& v : p->value.data) v = rng.uniform(-a, a);
  }
  return m;
}

Matrix ToyModel::logits(std::span<const Sample> batch, int group, Cache* cache) const {
  if (batch.empty()) throw std::invalid_argument("toy model: empty batch");
  const int seq_len = static_cast<int>(batch[0].tokens.size());
  const int b_n = static_cast<int>(batch.size());
  const int dm = d_model();

  Matrix x(b_n * seq_len, dm);
  std::vector<int> tokens;
  tokens.reserve(static_cast<size_t>(b_n) * seq_len);
  for (int b = 0; b < b_n; ++b) {
    if (static_cast<int>(batch[b].tokens.size()) != seq_len) {
      throw std::invalid_argument("toy model: ragged batch");
    }
    for (int j = 0; j < seq_len; ++j) {
      const int t = batch[b].tokens[j];
      if (t < 0 || t >= config.vocab_size) {
        throw std::invalid_argument("toy model: token id " + std::to_string(t) +
                                    " out of range");
      }
      tokens.push_back(t);
      std::copy_n(embedding.value.row(t), dm, x.row(b * seq_len + j));
    }
  }

  if (cache) {
    *cache = Cache{};
    cache->batch = b_n;
    cache->seq_len = seq_len;
    cache->tokens = tokens;
    cache->block_caches.resize(blocks.size());
  }

  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    if (cache) cache->block_in.push_back(x);
    EMoECache scratch;
    EMoECache& bc = cache ? cache->block_caches[bi] : scratch;
    Matrix y = blocks[bi].forward(x, group, bc);
    for (size_t i = 0; i < x.data.size(); ++i) x.data[i] += y.data[i];
  }

  Matrix pooled(b_n, dm);
  const double inv_len = 1.0 / seq_len;
  for (int b = 0; b < b_n; ++b) {
    double* prow = pooled.row(b);
    for (int j = 0; j < seq_len; ++j) {
      const double* xrow = x.row(b * seq_len + j);
      for (int c = 0; c < dm; ++c) prow[c] += xrow[c] * inv_len;
    }
  }
  if (cache) cache->pooled = pooled;
  return affine_forward(pooled, head_w, head_b);
}

void ToyModel::backward(const Matrix& dlogits, const Cache& cache) {
  if (cache.batch == 0) throw std::logic_error("toy model backward: no cached forward");
  const int dm = d_model();
  Matrix dpooled = affine_backward(cache.pooled, head_w, head_b, dlogits);

  Matrix dx(cache.batch * cache.seq_len, dm);
  const double inv_len = 1.0 / cache.seq_len;
  for (int b = 0; b < cache.batch; ++b) {
    const double* prow = dpooled.row(b);
    for (int j = 0; j < cache.seq_len; ++j) {
      double* xrow = dx.row(b * cache.seq_len + j);
      for (int c = 0; c < dm; ++c) xrow[c] = prow[c] * inv_len;
    }
  }

  for (int bi = static_cast<int>(blocks.size()) - 1; bi >= 0; --bi) {
    // Residual block: dx flows both around and through the layer.
    Matrix dthrough = blocks[bi].backward(cache.block_in[bi], dx, cache.block_caches[bi]);
    for (size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dthrough.data[i];
  }

  for (int r = 0; r < dx.rows; ++r) {
    double* grow = embedding.grad.row(cache.tokens[r]);
    const double* drow = dx.row(r);
    for (int c = 0; c < dm; ++c) grow[c] += drow[c];
  }
}

Matrix ToyModel::features(std::span<const int> tokens, int group) const {
  if (tokens.empty()) throw std::invalid_argument("toy model features: empty sequence");
  const int dm = d_model();
  Matrix x(static_cast<int>(tokens.size()), dm);
  for (size_t j = 0; j < tokens.size(); ++j) {
    std::copy_n(embedding.value.row(tokens[j]), dm, x.row(static_cast<int>(j)));
  }
  for (const EMoELayer& block : blocks) {
    Matrix y = block.forward(x, group);
    for (size_t i = 0; i < x.data.size(); ++i) x.data[i] += y.data[i];
  }
  Matrix pooled(1, dm);
  const double inv_len = 1.0 / static_cast<double>(tokens.size());
  for (int r = 0; r < x.rows; ++r) {
    const double* xrow = x.row(r);
    for (int c = 0; c < dm; ++c) pooled.at(0, c) += xrow[c] * inv_len;
  }
  return pooled;
}

ToyModel prune_model(const ToyModel& model, int group) {
  ToyModel out;
  out.config = model.config;
  out.config.emoe.base_group_size = model.config.emoe.total_size(group);
  out.config.emoe.num_groups = 1;
  out.config.emoe.group_sizes.clear();
  out.embedding = model.embedding;
  out.head_w = model.head_w;
  out.head_b = model.head_b;
  for (const EMoELayer& block : model.blocks) out.blocks.push_back(prune(block, group));
  for (Parameter* p : out.params()) p->grad.fill(0.0);
  return out;
}

}  // namespace easp
