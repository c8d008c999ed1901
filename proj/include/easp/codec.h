#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "easp/vocab.h"

namespace easp {

// A perception target. Valid annotations list tasks and events in
// vocabulary order without duplicates; every value must exist in the
// vocabulary.
struct Annotation {
  std::vector<std::string> tasks;  // requested task set
  std::optional<std::string> language;
  std::optional<std::string> age;
  std::optional<std::string> gender;
  std::optional<std::string> emotion;
  std::vector<std::string> events;
  std::vector<std::string> transcript;

  bool operator==(const Annotation&) const = default;
};

struct ParseError : std::runtime_error {
  size_t position;  // index into the token sequence
  ParseError(size_t pos, const std::string& msg)
      : std::runtime_error("token " + std::to_string(pos) + ": " + msg), position(pos) {}
};

// Canonical sequence: bos, task tags, language, age, gender, emotion,
// events, transcript, eos; each slot present iff populated.
// decode_tokens(encode_targets(a)) == a for every valid annotation.
std::vector<int> encode_targets(const Annotation& a, const TagVocabulary& vocab);
Annotation decode_tokens(std::span<const int> tokens, const TagVocabulary& vocab);

}  // namespace easp
