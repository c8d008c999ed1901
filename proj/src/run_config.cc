#include "easp/run_config.h"

#include <fstream>

#include "easp/checkpoint.h"  // IoError

namespace easp {

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " + context);
    }
  }
}

void parse_group_mode(const std::string& mode, TrainConfig& cfg) {
  if (mode == "dynamic") {
    cfg.dynamic_groups = true;
    return;
  }
  if (mode.rfind("fixed:", 0) == 0) {
    cfg.dynamic_groups = false;
    cfg.fixed_group = std::stoi(mode.substr(6));
    return;
  }
  throw std::invalid_argument("config: group_mode must be \"dynamic\" or \"fixed:<group>\", got \"" +
                              mode + "\"");
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.model.vocab_size = c.task.vocab_size;
  c.model.n_classes = c.task.n_classes;
  c.model.n_blocks = 2;
  c.model.emoe.d_model = 32;
  c.model.emoe.d_ff = 64;
  c.model.emoe.shared_experts = 1;
  c.model.emoe.base_group_size = 4;
  c.model.emoe.num_groups = 3;
  c.model.emoe.top_k = 3;
  c.train.steps = 1200;
  c.train.batch_size = 16;
  c.train.lr = 3e-3;
  c.train.eval_every = 0;
  return c;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c = defaults();
  check_keys(j, {"seed", "model", "train", "pipeline", "vocab"}, "top level");
  c.seed = j.value("seed", c.seed);
  c.train.seed = c.seed;

  if (j.contains("model")) {
    const nlohmann::json& m = j.at("model");
    check_keys(m, {"vocab_size", "seq_len", "n_classes", "d_model", "d_ff", "n_blocks", "emoe"},
               "model");
    c.task.vocab_size = m.value("vocab_size", c.task.vocab_size);
    c.task.seq_len = m.value("seq_len", c.task.seq_len);
    c.task.n_classes = m.value("n_classes", c.task.n_classes);
    c.model.vocab_size = c.task.vocab_size;
    c.model.n_classes = c.task.n_classes;
    c.model.n_blocks = m.value("n_blocks", c.model.n_blocks);
    c.model.emoe.d_model = m.value("d_model", c.model.emoe.d_model);
    c.model.emoe.d_ff = m.value("d_ff", c.model.emoe.d_ff);
    if (m.contains("emoe")) {
      const nlohmann::json& e = m.at("emoe");
      check_keys(e, {"shared_experts", "base_group_size", "num_groups", "top_k", "group_sizes"},
                 "model.emoe");
      c.model.emoe.shared_experts = e.value("shared_experts", c.model.emoe.shared_experts);
      c.model.emoe.base_group_size = e.value("base_group_size", c.model.emoe.base_group_size);
      c.model.emoe.num_groups = e.value("num_groups", c.model.emoe.num_groups);
      c.model.emoe.top_k = e.value("top_k", c.model.emoe.top_k);
      if (e.contains("group_sizes")) {
        c.model.emoe.group_sizes = e.at("group_sizes").get<std::vector<int>>();
      }
    }
  }

  if (j.contains("train")) {
    const nlohmann::json& t = j.at("train");
    check_keys(t,
               {"steps", "batch_size", "lr", "beta1", "beta2", "eps", "group_mode",
                "sampling_probs", "eval_every", "train_samples", "eval_samples"},
               "train");
    c.train.steps = t.value("steps", c.train.steps);
    c.train.batch_size = t.value("batch_size", c.train.batch_size);
    c.train.lr = t.value("lr", c.train.lr);
    c.train.beta1 = t.value("beta1", c.train.beta1);
    c.train.beta2 = t.value("beta2", c.train.beta2);
    c.train.eps = t.value("eps", c.train.eps);
    c.train.eval_every = t.value("eval_every", c.train.eval_every);
    c.train_samples = t.value("train_samples", c.train_samples);
    c.eval_samples = t.value("eval_samples", c.eval_samples);
    if (t.contains("group_mode")) parse_group_mode(t.at("group_mode").get<std::string>(), c.train);
    if (t.contains("sampling_probs")) {
      c.train.sampling_probs = t.at("sampling_probs").get<std::vector<double>>();
    }
  }

  if (j.contains("pipeline")) {
    const nlohmann::json& p = j.at("pipeline");
    check_keys(p, {"vad", "wer_max", "per_max", "phonemizer", "primary", "copilot"}, "pipeline");
    if (p.contains("vad")) {
      const nlohmann::json& v = p.at("vad");
      check_keys(v, {"frame_ms", "energy_threshold", "min_segment_s", "max_segment_s",
                     "merge_gap_s"},
                 "pipeline.vad");
      c.pipeline.vad.frame_ms = v.value("frame_ms", c.pipeline.vad.frame_ms);
      c.pipeline.vad.energy_threshold =
          v.value("energy_threshold", c.pipeline.vad.energy_threshold);
      c.pipeline.vad.min_segment_s = v.value("min_segment_s", c.pipeline.vad.min_segment_s);
      c.pipeline.vad.max_segment_s = v.value("max_segment_s", c.pipeline.vad.max_segment_s);
      c.pipeline.vad.merge_gap_s = v.value("merge_gap_s", c.pipeline.vad.merge_gap_s);
    }
    c.pipeline.wer_max = p.value("wer_max", c.pipeline.wer_max);
    c.pipeline.per_max = p.value("per_max", c.pipeline.per_max);
    c.phonemizer_path = p.value("phonemizer", c.phonemizer_path);
    if (p.contains("primary")) c.primary_engine = p.at("primary");
    if (p.contains("copilot")) c.copilot_engine = p.at("copilot");
  }

  c.vocab_path = j.value("vocab", c.vocab_path);
  c.model.validate();
  return c;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path + ": invalid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json emoe{{"shared_experts", model.emoe.shared_experts},
                      {"base_group_size", model.emoe.base_group_size},
                      {"num_groups", model.emoe.num_groups},
                      {"top_k", model.emoe.top_k}};
  if (!model.emoe.group_sizes.empty()) emoe["group_sizes"] = model.emoe.group_sizes;
  nlohmann::json train_j{{"steps", train.steps},
                         {"batch_size", train.batch_size},
                         {"lr", train.lr},
                         {"beta1", train.beta1},
                         {"beta2", train.beta2},
                         {"eps", train.eps},
                         {"group_mode", train.dynamic_groups
                                            ? std::string("dynamic")
                                            : "fixed:" + std::to_string(train.fixed_group)},
                         {"eval_every", train.eval_every},
                         {"train_samples", train_samples},
                         {"eval_samples", eval_samples}};
  if (!train.sampling_probs.empty()) train_j["sampling_probs"] = train.sampling_probs;
  return nlohmann::json{
      {"seed", seed},
      {"model",
       {{"vocab_size", task.vocab_size},
        {"seq_len", task.seq_len},
        {"n_classes", task.n_classes},
        {"d_model", model.emoe.d_model},
        {"d_ff", model.emoe.d_ff},
        {"n_blocks", model.n_blocks},
        {"emoe", emoe}}},
      {"train", train_j},
      {"pipeline",
       {{"vad",
         {{"frame_ms", pipeline.vad.frame_ms},
          {"energy_threshold", pipeline.vad.energy_threshold},
          {"min_segment_s", pipeline.vad.min_segment_s},
          {"max_segment_s", pipeline.vad.max_segment_s},
          {"merge_gap_s", pipeline.vad.merge_gap_s}}},
        {"wer_max", pipeline.wer_max},
        {"per_max", pipeline.per_max},
        {"phonemizer", phonemizer_path},
        {"primary", primary_engine},
        {"copilot", copilot_engine}}},
      {"vocab", vocab_path}};
}

}  // namespace easp
