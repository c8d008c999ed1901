#include "easp/trainer.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "easp/adam.h"
#include "easp/ops.h"

namespace easp {

void write_metrics_ndjson(std::ostream& out, const MetricsLog& log) {
  for (const MetricsRecord& r : log) {
    nlohmann::json j{{"step", r.step},
                     {"group_index", r.group_index},
                     {"loss", r.loss},
                     {"accuracy", r.accuracy}};
    out << j.dump() << "\n";
  }
}

EvalResult evaluate(const ToyModel& model, std::span<const Sample> data, int group) {
  if (data.empty()) throw std::invalid_argument("evaluate: empty dataset");
  constexpr int kChunk = 256;
  EvalResult r;
  int correct = 0;
  double loss_sum = 0.0;
  for (size_t start = 0; start < data.size(); start += kChunk) {
    const size_t n = std::min<size_t>(kChunk, data.size() - start);
    std::span<const Sample> chunk = data.subspan(start, n);
    Matrix logits = model.logits(chunk, group, nullptr);
    Matrix probs = softmax_rows(logits);
    for (size_t i = 0; i < n; ++i) {
      const int label = chunk[i].label;
      loss_sum += -std::log(probs.at(static_cast<int>(i), label));
      int argmax = 0;
      for (int c = 1; c < probs.cols; ++c) {
        if (probs.at(static_cast<int>(i), c) > probs.at(static_cast<int>(i), argmax)) argmax = c;
      }
      if (argmax == label) ++correct;
    }
  }
  r.loss = loss_sum / static_cast<double>(data.size());
  r.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return r;
}

MetricsLog train(ToyModel& model, std::span<const Sample> train_data,
                 std::span<const Sample> eval_data, const TrainConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("train: steps must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (train_data.empty()) throw std::invalid_argument("train: empty dataset");
  const int n_groups = model.config.emoe.num_groups;
  if (!cfg.dynamic_groups && (cfg.fixed_group < 1 || cfg.fixed_group > n_groups)) {
    throw std::invalid_argument("train: fixed_group " + std::to_string(cfg.fixed_group) +
                                " out of range 1.." + std::to_string(n_groups));
  }

  const GroupSchedule schedule =
      GroupSchedule::build(model.config.emoe, cfg.sampling_probs);
  Rng rng = Rng::substream(cfg.seed, 0x7261696eULL);  // training stream
  std::vector<Parameter*> params = model.params();
  AdamState adam;
  const AdamConfig adam_cfg{cfg.lr, cfg.beta1, cfg.beta2, cfg.eps};

  MetricsLog log;
  auto record_evals = [&](int step) {
    for (int g = 1; g <= n_groups; ++g) {
      EvalResult ev = evaluate(model, eval_data, g);
      log.push_back({step, g, ev.loss, ev.accuracy});
    }
  };

  std::vector<Sample> batch(cfg.batch_size);
  std::vector<int> targets(cfg.batch_size);
  for (int step = 1; step <= cfg.steps; ++step) {
    for (int b = 0; b < cfg.batch_size; ++b) {
      const size_t idx =
          std::min(train_data.size() - 1,
                   static_cast<size_t>(rng.next_double() * train_data.size()));
      batch[b] = train_data[idx];
      targets[b] = train_data[idx].label;
    }
    const int group = cfg.dynamic_groups ? sample_group(schedule, rng) : cfg.fixed_group;

    zero_grads(params);
    ToyModel::Cache cache;
    Matrix logits = model.logits(batch, group, &cache);
    Matrix probs = softmax_rows(logits);
    XentResult xent = cross_entropy(probs, targets);
    Matrix dlogits = softmax_rows_backward(probs, xent.dprobs);
    model.backward(dlogits, cache);
    adam_step(params, adam, adam_cfg, step);

    if (cfg.eval_every > 0 && step % cfg.eval_every == 0 && step != cfg.steps) {
      record_evals(step);
    }
  }
  record_evals(cfg.steps);
  return log;
}

namespace {

nlohmann::json emoe_config_json(const EMoEConfig& cfg) {
  nlohmann::json j{{"d_model", cfg.d_model},
                   {"d_ff", cfg.d_ff},
                   {"shared_experts", cfg.shared_experts},
                   {"base_group_size", cfg.base_group_size},
                   {"num_groups", cfg.num_groups},
                   {"top_k", cfg.top_k}};
  if (!cfg.group_sizes.empty()) j["group_sizes"] = cfg.group_sizes;
  return j;
}

EMoEConfig emoe_config_from_json(const nlohmann::json& j) {
  EMoEConfig cfg;
  cfg.d_model = j.at("d_model").get<int>();
  cfg.d_ff = j.at("d_ff").get<int>();
  cfg.shared_experts = j.at("shared_experts").get<int>();
  cfg.base_group_size = j.at("base_group_size").get<int>();
  cfg.num_groups = j.at("num_groups").get<int>();
  cfg.top_k = j.at("top_k").get<int>();
  if (j.contains("group_sizes")) cfg.group_sizes = j.at("group_sizes").get<std::vector<int>>();
  return cfg;
}

}  // namespace

Checkpoint model_to_checkpoint(ToyModel& model, const nlohmann::json& run_config) {
  Checkpoint ck;
  ck.meta["format"] = "easp-toy-model";
  ck.meta["model"] = {{"vocab_size", model.config.vocab_size},
                      {"n_classes", model.config.n_classes},
                      {"n_blocks", model.config.n_blocks},
                      {"emoe", emoe_config_json(model.config.emoe)}};
  ck.meta["sampling_probs"] = model.blocks[0].schedule.sampling_probs;
  ck.meta["run_config"] = run_config;
  for (Parameter* p : model.params()) ck.tensors.emplace_back(p->name, p->value);
  return ck;
}

ToyModel model_from_checkpoint(const Checkpoint& ck) {
  if (ck.meta.value("format", "") != "easp-toy-model") {
    throw CheckpointError("bad checkpoint: unexpected format '" +
                          ck.meta.value("format", "") + "'");
  }
  const nlohmann::json& mj = ck.meta.at("model");
  ToyModelConfig cfg;
  cfg.vocab_size = mj.at("vocab_size").get<int>();
  cfg.n_classes = mj.at("n_classes").get<int>();
  cfg.n_blocks = mj.at("n_blocks").get<int>();
  cfg.emoe = emoe_config_from_json(mj.at("emoe"));
  const std::vector<double> probs =
      ck.meta.at("sampling_probs").get<std::vector<double>>();
  ToyModel model = ToyModel::make(cfg, probs);
  for (Parameter* p : model.params()) {
    const Matrix* t = ck.find(p->name);
    if (!t) throw CheckpointError("bad checkpoint: missing tensor '" + p->name + "'");
    if (!t->same_shape(p->value)) {
      throw CheckpointError("bad checkpoint: tensor '" + p->name + "' is " + t->shape_str() +
                            ", expected " + p->value.shape_str());
    }
    p->value = *t;
  }
  return model;
}

nlohmann::json checkpoint_run_config(const Checkpoint& ck) {
  return ck.meta.value("run_config", nlohmann::json::object());
}

}  // namespace easp
