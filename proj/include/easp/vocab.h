#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace easp {

// Multi-task tag vocabulary with deterministic id assignment:
// blank=0, bos, eos, then task, language, age, gender, emotion, event and
// text tokens in file order. Tag ids are disjoint from text-token ids by
// construction.
class TagVocabulary {
 public:
  enum class Kind { blank, bos, eos, task, language, age, gender, emotion, event, text };

  static TagVocabulary defaults();
  static TagVocabulary from_json(const nlohmann::json& j);
  static TagVocabulary load_file(const std::string& path);

  int size() const { return static_cast<int>(names_.size()); }
  int blank_id() const { return 0; }
  int bos_id() const { return 1; }
  int eos_id() const { return 2; }

  Kind kind(int id) const;
  const std::string& name(int id) const;

  // -1 when absent.
  int find(Kind kind, const std::string& name) const;
  int id_or_throw(Kind kind, const std::string& name) const;  // names allowed set on failure

  const std::vector<std::string>& tags(Kind kind) const;
  int first_id(Kind kind) const;

  const std::vector<std::string>& task_tags() const { return task_; }
  const std::vector<std::string>& language_tags() const { return language_; }
  const std::vector<std::string>& age_tags() const { return age_; }
  const std::vector<std::string>& gender_tags() const { return gender_; }
  const std::vector<std::string>& emotion_tags() const { return emotion_; }
  const std::vector<std::string>& event_tags() const { return event_; }
  const std::vector<std::string>& text_tokens() const { return text_; }

 private:
  void assign_ids();  // builds names_/kinds_ and validates cardinalities

  std::vector<std::string> task_;
  std::vector<std::string> language_;
  std::vector<std::string> age_;
  std::vector<std::string> gender_;
  std::vector<std::string> emotion_;
  std::vector<std::string> event_;
  std::vector<std::string> text_;

  std::vector<std::string> names_;
  std::vector<Kind> kinds_;
  std::vector<int> first_ids_;
};

}  // namespace easp
