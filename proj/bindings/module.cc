#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "easp/codec.h"
#include "easp/ctc.h"
#include "easp/edit_distance.h"
#include "easp/emoe.h"
#include "easp/rescore.h"
#include "easp/rng.h"
#include "easp/toy.h"
#include "easp/trainer.h"
#include "easp/vad.h"
#include "easp/vocab.h"

namespace py = pybind11;

namespace {

easp::Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  easp::Matrix m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy_n(a.data(), m.data.size(), m.data.begin());
  return m;
}

py::array_t<double> matrix_to_numpy(const easp::Matrix& m) {
  py::array_t<double> a({m.rows, m.cols});
  std::copy_n(m.data.data(), m.data.size(), a.mutable_data());
  return a;
}

std::vector<std::string> to_tokens(const py::iterable& it) {
  std::vector<std::string> out;
  for (py::handle h : it) out.push_back(py::cast<std::string>(h));
  return out;
}

easp::TagVocabulary vocab_for(const std::string& path) {
  return path.empty() ? easp::TagVocabulary::defaults() : easp::TagVocabulary::load_file(path);
}

py::dict annotation_to_dict(const easp::Annotation& a) {
  py::dict d;
  if (!a.tasks.empty()) d["tasks"] = a.tasks;
  if (a.language) d["language"] = *a.language;
  if (a.age) d["age"] = *a.age;
  if (a.gender) d["gender"] = *a.gender;
  if (a.emotion) d["emotion"] = *a.emotion;
  if (!a.events.empty()) d["events"] = a.events;
  if (!a.transcript.empty()) d["transcript"] = a.transcript;
  return d;
}

easp::Annotation annotation_from_dict(const py::dict& d) {
  easp::Annotation a;
  for (auto item : d) {
    const std::string key = py::cast<std::string>(item.first);
    if (key == "tasks") {
      a.tasks = py::cast<std::vector<std::string>>(item.second);
    } else if (key == "language") {
      a.language = py::cast<std::string>(item.second);
    } else if (key == "age") {
      a.age = py::cast<std::string>(item.second);
    } else if (key == "gender") {
      a.gender = py::cast<std::string>(item.second);
    } else if (key == "emotion") {
      a.emotion = py::cast<std::string>(item.second);
    } else if (key == "events") {
      a.events = py::cast<std::vector<std::string>>(item.second);
    } else if (key == "transcript") {
      a.transcript = py::cast<std::vector<std::string>>(item.second);
    } else {
      throw std::invalid_argument("annotation: unknown key '" + key + "'");
    }
  }
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elastic mixture-of-experts layers, weak-supervision filtering and "
            "multi-task tag sequence tools.";

  py::class_<easp::EMoEConfig>(m, "EMoEConfig")
      .def(py::init([](int d_model, int d_ff, int shared_experts, int base_group_size,
                       int num_groups, int top_k, std::vector<int> group_sizes) {
             easp::EMoEConfig cfg;
             cfg.d_model = d_model;
             cfg.d_ff = d_ff;
             cfg.shared_experts = shared_experts;
             cfg.base_group_size = base_group_size;
             cfg.num_groups = num_groups;
             cfg.top_k = top_k;
             cfg.group_sizes = std::move(group_sizes);
             cfg.validate();
             return cfg;
           }),
           py::arg("d_model"), py::arg("d_ff"), py::arg("shared_experts"),
           py::arg("base_group_size"), py::arg("num_groups"), py::arg("top_k"),
           py::arg("group_sizes") = std::vector<int>{})
      .def_readonly("d_model", &easp::EMoEConfig::d_model)
      .def_readonly("d_ff", &easp::EMoEConfig::d_ff)
      .def_readonly("shared_experts", &easp::EMoEConfig::shared_experts)
      .def_readonly("num_groups", &easp::EMoEConfig::num_groups)
      .def_readonly("top_k", &easp::EMoEConfig::top_k)
      .def("total_size", &easp::EMoEConfig::total_size, py::arg("group"))
      .def("routed_count", &easp::EMoEConfig::routed_count, py::arg("group"))
      .def("total_experts", &easp::EMoEConfig::total_experts)
      .def("routed_experts", &easp::EMoEConfig::routed_experts);

  py::class_<easp::EMoELayer>(m, "EMoELayer")
      .def("forward",
           [](const easp::EMoELayer& layer, const py::array_t<double>& x, int group) {
             return matrix_to_numpy(layer.forward(matrix_from_numpy(x), group));
           },
           py::arg("x"), py::arg("group"))
      .def("route",
           [](const easp::EMoELayer& layer, const std::vector<double>& x_row, int group) {
             const easp::RouteResult r = layer.route(x_row, group);
             return py::make_tuple(r.indices, r.weights);
           },
           py::arg("x_row"), py::arg("group"))
      .def("prune", [](const easp::EMoELayer& layer, int group) { return easp::prune(layer, group); },
           py::arg("group"))
      .def("count_params",
           [](const easp::EMoELayer& layer, int group) {
             const easp::ParamCounts c = easp::count_params(layer, group);
             py::dict d;
             d["expert_params"] = c.expert_params;
             d["router_params"] = c.router_params;
             d["total"] = c.total;
             return d;
           },
           py::arg("group"))
      .def_property_readonly("sampling_probs",
                             [](const easp::EMoELayer& layer) { return layer.schedule.sampling_probs; })
      .def_property_readonly("num_groups",
                             [](const easp::EMoELayer& layer) { return layer.config.num_groups; });

  m.def("build_layer",
        [](const easp::EMoEConfig& cfg, uint64_t seed) {
          easp::Rng rng(seed);
          return easp::build_layer(cfg, rng);
        },
        py::arg("config"), py::arg("seed") = 0);

  m.def("sample_group",
        [](const easp::EMoELayer& layer, uint64_t seed, int draws) {
          easp::Rng rng(seed);
          std::vector<int> out;
          out.reserve(draws);
          for (int i = 0; i < draws; ++i) out.push_back(easp::sample_group(layer.schedule, rng));
          return out;
        },
        py::arg("layer"), py::arg("seed") = 0, py::arg("draws") = 1);

  m.def("edit_distance",
        [](const py::iterable& ref, const py::iterable& hyp) {
          const easp::EditCounts c = easp::edit_distance(to_tokens(ref), to_tokens(hyp));
          py::dict d;
          d["sub"] = c.sub;
          d["del"] = c.del;
          d["ins"] = c.ins;
          d["total"] = c.total();
          return d;
        },
        py::arg("ref"), py::arg("hyp"));
  m.def("wer",
        [](const py::iterable& ref, const py::iterable& hyp) {
          return easp::wer(to_tokens(ref), to_tokens(hyp));
        },
        py::arg("ref"), py::arg("hyp"));

  m.def("vad_segment",
        [](const py::array_t<float, py::array::c_style | py::array::forcecast>& samples,
           int sample_rate, double frame_ms, double energy_threshold, double min_segment_s,
           double max_segment_s, double merge_gap_s) {
          if (samples.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
          easp::AudioClip clip;
          clip.id = "py";
          clip.sample_rate = sample_rate;
          clip.samples.assign(samples.data(), samples.data() + samples.shape(0));
          easp::VadParams params;
          params.frame_ms = frame_ms;
          params.energy_threshold = energy_threshold;
          params.min_segment_s = min_segment_s;
          params.max_segment_s = max_segment_s;
          params.merge_gap_s = merge_gap_s;
          std::vector<std::pair<double, double>> out;
          for (const easp::Segment& s : easp::vad_segment(clip, params)) {
            out.emplace_back(s.start_s, s.end_s);
          }
          return out;
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("frame_ms") = 25.0,
        py::arg("energy_threshold") = 0.01, py::arg("min_segment_s") = 2.0,
        py::arg("max_segment_s") = 30.0, py::arg("merge_gap_s") = 0.3);

  m.def("ctc_loss",
        [](const py::array_t<double>& log_probs, const std::vector<int>& target) {
          const easp::CtcResult r = easp::ctc_loss(matrix_from_numpy(log_probs), target);
          return py::make_tuple(r.loss, matrix_to_numpy(r.grad));
        },
        py::arg("log_probs"), py::arg("target"));
  m.def("ctc_greedy_decode",
        [](const py::array_t<double>& log_probs) {
          return easp::ctc_greedy_decode(matrix_from_numpy(log_probs));
        },
        py::arg("log_probs"));

  m.def("rescore",
        [](const std::vector<std::pair<std::vector<int>, double>>& candidates,
           const std::function<double(std::vector<int>)>& decoder, double lambda_) {
          std::vector<easp::Candidate> cs;
          cs.reserve(candidates.size());
          for (const auto& [tokens, score] : candidates) cs.push_back({tokens, score});
          const easp::RescoreConfig cfg{lambda_};
          return easp::rescore(cs,
                               [&](std::span<const int> seq) {
                                 return decoder(std::vector<int>(seq.begin(), seq.end()));
                               },
                               cfg);
        },
        py::arg("candidates"), py::arg("decoder"), py::arg("lambda_") = 0.5);

  m.def("encode_tags",
        [](const py::dict& annotation, const std::string& vocab_path) {
          return easp::encode_targets(annotation_from_dict(annotation), vocab_for(vocab_path));
        },
        py::arg("annotation"), py::arg("vocab_path") = "");
  m.def("decode_tags",
        [](const std::vector<int>& tokens, const std::string& vocab_path) {
          return annotation_to_dict(easp::decode_tokens(tokens, vocab_for(vocab_path)));
        },
        py::arg("tokens"), py::arg("vocab_path") = "");
  m.def("vocab_info", [](const std::string& vocab_path) {
    const easp::TagVocabulary v = vocab_for(vocab_path);
    py::dict d;
    d["size"] = v.size();
    d["tasks"] = v.task_tags();
    d["languages"] = v.language_tags();
    d["ages"] = v.age_tags();
    d["genders"] = v.gender_tags();
    d["emotions"] = v.emotion_tags();
    d["events"] = v.event_tags();
    return d;
  }, py::arg("vocab_path") = "");
}
