// easp: train, prune and evaluate elastic-MoE toy models, run the
// weak-supervision data pipeline, score transcripts, and encode/decode
// multi-task tag sequences.
//
// Machine-readable results go to stdout as JSON; human logs go to stderr.
// Exit codes: 0 success, 2 invalid input (flags, config, checkpoint,
// vocabulary), 3 I/O failure while reading data or writing outputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "easp/checkpoint.h"
#include "easp/codec.h"
#include "easp/ctc.h"
#include "easp/edit_distance.h"
#include "easp/pipeline.h"
#include "easp/run_config.h"
#include "easp/text.h"
#include "easp/trainer.h"
#include "easp/vocab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct CliError {
  int code;
  std::string message;
};

easp::Phonemizer load_phonemizer(const std::string& path) {
  if (path.empty()) return easp::Phonemizer{};
  return easp::Phonemizer::from_file(path);
}

easp::TagVocabulary load_vocab(const std::string& path) {
  if (path.empty()) return easp::TagVocabulary::defaults();
  return easp::TagVocabulary::load_file(path);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw easp::IoError("cannot open for writing: " + path);
  out << contents;
  if (!out) throw easp::IoError("write failed: " + path);
}

std::vector<easp::Sample> eval_dataset_for(const easp::RunConfig& cfg) {
  // Held-out stream: never overlaps the training stream of the same seed.
  return easp::generate_dataset(cfg.task, cfg.seed + 0x65766181ULL, cfg.eval_samples);
}

int cmd_train(const std::string& config_path, const std::string& out_dir) {
  const easp::RunConfig cfg = easp::RunConfig::load_file(config_path);
  std::filesystem::create_directories(out_dir);

  easp::Rng init_rng(cfg.seed);
  easp::ToyModel model = easp::ToyModel::build(cfg.model, init_rng, cfg.train.sampling_probs);
  const std::vector<easp::Sample> train_data =
      easp::generate_dataset(cfg.task, cfg.seed, cfg.train_samples);
  const std::vector<easp::Sample> eval_data = eval_dataset_for(cfg);

  std::cerr << "training " << cfg.train.steps << " steps, batch " << cfg.train.batch_size
            << ", groups "
            << (cfg.train.dynamic_groups ? std::string("dynamic")
                                         : "fixed:" + std::to_string(cfg.train.fixed_group))
            << "\n";
  easp::MetricsLog log = easp::train(model, train_data, eval_data, cfg.train);

  const std::string ckpt_path = out_dir + "/model.emoe";
  const std::string metrics_path = out_dir + "/metrics.ndjson";
  easp::model_to_checkpoint(model, cfg.to_json()).save(ckpt_path);
  std::ostringstream metrics;
  easp::write_metrics_ndjson(metrics, log);
  write_text_file(metrics_path, metrics.str());

  nlohmann::json final_evals = nlohmann::json::array();
  std::cerr << "final per-group eval:\n";
  for (int g = 1; g <= model.config.emoe.num_groups; ++g) {
    const easp::EvalResult ev = easp::evaluate(model, eval_data, g);
    std::cerr << "  group " << g << ": accuracy " << ev.accuracy << ", loss " << ev.loss << "\n";
    final_evals.push_back({{"group", g}, {"loss", ev.loss}, {"accuracy", ev.accuracy}});
  }
  std::cout << nlohmann::json{{"checkpoint", ckpt_path},
                              {"metrics", metrics_path},
                              {"final_eval", final_evals}}
                   .dump()
            << "\n";
  return kExitOk;
}

easp::ToyModel load_model_checked(const std::string& ckpt_path, easp::RunConfig* run_cfg) {
  const easp::Checkpoint ck = easp::Checkpoint::load(ckpt_path);
  if (run_cfg) *run_cfg = easp::RunConfig::from_json(easp::checkpoint_run_config(ck));
  return easp::model_from_checkpoint(ck);
}

int cmd_eval(const std::string& ckpt_path, int group) {
  easp::RunConfig cfg;
  easp::ToyModel model = load_model_checked(ckpt_path, &cfg);
  if (group < 1 || group > model.config.emoe.num_groups) {
    throw CliError{kExitInvalid, "group " + std::to_string(group) +
                                     " out of range: groups are 1-indexed, 1.." +
                                     std::to_string(model.config.emoe.num_groups)};
  }
  const std::vector<easp::Sample> eval_data = eval_dataset_for(cfg);
  const easp::EvalResult ev = easp::evaluate(model, eval_data, group);
  std::cout << nlohmann::json{{"group", group}, {"loss", ev.loss}, {"accuracy", ev.accuracy}}
                   .dump()
            << "\n";
  return kExitOk;
}

int cmd_prune(const std::string& ckpt_path, int group, const std::string& out_path) {
  easp::RunConfig cfg;
  easp::ToyModel model = load_model_checked(ckpt_path, &cfg);
  if (group < 1 || group > model.config.emoe.num_groups) {
    throw CliError{kExitInvalid, "group " + std::to_string(group) +
                                     " out of range: groups are 1-indexed, 1.." +
                                     std::to_string(model.config.emoe.num_groups)};
  }
  const easp::ParamCounts before =
      easp::count_params(model.blocks[0], model.config.emoe.num_groups);
  const easp::ParamCounts after = easp::count_params(model.blocks[0], group);
  const double ratio = static_cast<double>(model.config.emoe.total_size(group)) /
                       static_cast<double>(model.config.emoe.total_experts());

  easp::ToyModel pruned = easp::prune_model(model, group);
  easp::model_to_checkpoint(pruned, cfg.to_json()).save(out_path);

  std::cerr << "pruned to group " << group << ": expert params " << before.expert_params
            << " -> " << after.expert_params << " (ratio " << ratio << ")\n";
  std::cout << nlohmann::json{
                   {"group", group},
                   {"out", out_path},
                   {"before",
                    {{"expert_params", before.expert_params},
                     {"router_params", before.router_params},
                     {"total", before.total}}},
                   {"after",
                    {{"expert_params", after.expert_params},
                     {"router_params", after.router_params},
                     {"total", after.total}}},
                   {"expert_param_ratio", ratio}}
                   .dump()
            << "\n";
  return kExitOk;
}

int cmd_pipeline(const std::string& manifest_path, const std::string& config_path,
                 const std::string& out_dir) {
  const easp::RunConfig cfg = easp::RunConfig::load_file(config_path);
  std::filesystem::create_directories(out_dir);
  const std::vector<easp::ClipRef> clips = easp::read_clip_manifest_file(manifest_path);
  const auto primary = easp::make_transcriber(cfg.primary_engine);
  const auto copilot = easp::make_transcriber(cfg.copilot_engine);
  const easp::Phonemizer phonemizer = load_phonemizer(cfg.phonemizer_path);

  const easp::PipelineResult result =
      easp::run_pipeline(clips, *primary, *copilot, cfg.pipeline, phonemizer);

  std::ostringstream accepted;
  easp::write_accepted_ndjson(accepted, result.accepted);
  write_text_file(out_dir + "/accepted.ndjson", accepted.str());
  const nlohmann::json stats = easp::stats_to_json(result.stats);
  write_text_file(out_dir + "/stats.json", stats.dump(2) + "\n");

  for (const std::string& err : result.clip_errors) std::cerr << "skipped clip: " << err << "\n";
  std::cerr << "retention: " << stats.at("retention_ratio").dump() << " ("
            << result.stats.kept_hours << "h of " << result.stats.raw_hours << "h)\n";
  std::cout << stats.dump() << "\n";
  return kExitOk;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitInvalid, "cannot open: " + path};
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

int cmd_score(const std::string& ref_path, const std::string& hyp_path,
              const std::string& phonemizer_path) {
  const std::vector<std::string> ref_lines = read_lines(ref_path);
  const std::vector<std::string> hyp_lines = read_lines(hyp_path);
  if (ref_lines.size() != hyp_lines.size()) {
    throw CliError{kExitInvalid, "line count mismatch: " + ref_path + " has " +
                                     std::to_string(ref_lines.size()) + ", " + hyp_path +
                                     " has " + std::to_string(hyp_lines.size())};
  }
  const easp::Phonemizer phonemizer = load_phonemizer(phonemizer_path);

  long long word_edits = 0, word_refs = 0, phone_edits = 0, phone_refs = 0;
  for (size_t i = 0; i < ref_lines.size(); ++i) {
    const std::vector<std::string> ref = easp::tokenize(ref_lines[i]);
    const std::vector<std::string> hyp = easp::tokenize(hyp_lines[i]);
    if (ref.empty()) {
      throw CliError{kExitInvalid,
                     "empty reference on line " + std::to_string(i + 1) + " of " + ref_path};
    }
    word_edits += easp::edit_distance(ref, hyp).total();
    word_refs += static_cast<long long>(ref.size());
    const std::vector<std::string> pref = phonemizer.apply(ref);
    const std::vector<std::string> phyp = phonemizer.apply(hyp);
    phone_edits += easp::edit_distance(pref, phyp).total();
    phone_refs += static_cast<long long>(pref.size());
  }
  std::cout << nlohmann::json{{"wer", 100.0 * word_edits / word_refs},
                              {"per", 100.0 * phone_edits / phone_refs},
                              {"lines", ref_lines.size()}}
                   .dump()
            << "\n";
  return kExitOk;
}

nlohmann::json annotation_to_json(const easp::Annotation& a) {
  nlohmann::json j = nlohmann::json::object();
  if (!a.tasks.empty()) j["tasks"] = a.tasks;
  if (a.language) j["language"] = *a.language;
  if (a.age) j["age"] = *a.age;
  if (a.gender) j["gender"] = *a.gender;
  if (a.emotion) j["emotion"] = *a.emotion;
  if (!a.events.empty()) j["events"] = a.events;
  if (!a.transcript.empty()) j["transcript"] = a.transcript;
  return j;
}

easp::Annotation annotation_from_json(const nlohmann::json& j) {
  easp::Annotation a;
  for (const auto& [key, value] : j.items()) {
    if (key == "tasks") {
      a.tasks = value.get<std::vector<std::string>>();
    } else if (key == "language") {
      if (!value.is_null()) a.language = value.get<std::string>();
    } else if (key == "age") {
      if (!value.is_null()) a.age = value.get<std::string>();
    } else if (key == "gender") {
      if (!value.is_null()) a.gender = value.get<std::string>();
    } else if (key == "emotion") {
      if (!value.is_null()) a.emotion = value.get<std::string>();
    } else if (key == "events") {
      a.events = value.get<std::vector<std::string>>();
    } else if (key == "transcript") {
      a.transcript = value.get<std::vector<std::string>>();
    } else {
      throw std::invalid_argument("annotation: unknown key '" + key + "'");
    }
  }
  return a;
}

int cmd_tags(const std::string& direction, const std::string& vocab_path) {
  const easp::TagVocabulary vocab = load_vocab(vocab_path);
  nlohmann::json input;
  try {
    std::cin >> input;
  } catch (const nlohmann::json::exception& e) {
    throw CliError{kExitInvalid, std::string("stdin is not valid JSON: ") + e.what()};
  }
  if (direction == "encode") {
    const easp::Annotation a = annotation_from_json(input);
    std::cout << nlohmann::json(easp::encode_targets(a, vocab)).dump() << "\n";
  } else {
    const std::vector<int> tokens = input.get<std::vector<int>>();
    const easp::Annotation a = easp::decode_tokens(tokens, vocab);
    std::cout << annotation_to_json(a).dump() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elastic speech perception toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", ckpt_path, out_path;
  std::string manifest_path, ref_path, hyp_path, phonemizer_path, vocab_path;
  int group = 1;

  CLI::App* train = app.add_subcommand("train", "train a model and write checkpoint + metrics");
  train->add_option("--config", config_path, "run config JSON")->required();
  train->add_option("--out", out_dir, "output directory");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint at one group");
  eval->add_option("--ckpt", ckpt_path, "checkpoint path")->required();
  eval->add_option("--group", group, "1-indexed group")->required();

  CLI::App* prune = app.add_subcommand("prune", "export a single-group checkpoint");
  prune->add_option("--ckpt", ckpt_path, "checkpoint path")->required();
  prune->add_option("--group", group, "1-indexed group to keep")->required();
  prune->add_option("--out", out_path, "output checkpoint path")->required();

  CLI::App* pipeline = app.add_subcommand("pipeline", "run VAD + dual ASR + rover filtering");
  pipeline->add_option("--manifest", manifest_path, "input clip manifest (NDJSON)")->required();
  pipeline->add_option("--config", config_path, "run config JSON")->required();
  pipeline->add_option("--out", out_dir, "output directory");

  CLI::App* score = app.add_subcommand("score", "corpus WER/PER of line-aligned files");
  score->add_option("--ref", ref_path, "reference text, one utterance per line")->required();
  score->add_option("--hyp", hyp_path, "hypothesis text, line-aligned")->required();
  score->add_option("--phonemizer", phonemizer_path, "lexicon file for PER");

  CLI::App* tags = app.add_subcommand("tags", "encode/decode tag token sequences on stdin");
  std::string direction;
  tags->add_option("direction", direction, "encode or decode")
      ->required()
      ->check(CLI::IsMember({"encode", "decode"}));
  tags->add_option("--vocab", vocab_path, "vocabulary JSON (default: built-in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, out_dir);
    if (eval->parsed()) return cmd_eval(ckpt_path, group);
    if (prune->parsed()) return cmd_prune(ckpt_path, group, out_path);
    if (pipeline->parsed()) return cmd_pipeline(manifest_path, config_path, out_dir);
    if (score->parsed()) return cmd_score(ref_path, hyp_path, phonemizer_path);
    if (tags->parsed()) return cmd_tags(direction, vocab_path);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const easp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
