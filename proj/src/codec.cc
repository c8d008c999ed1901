#include "easp/codec.h"

namespace easp {

namespace {

using Kind = TagVocabulary::Kind;

void validate_ordered_unique(const std::vector<std::string>& items, Kind kind,
                             const TagVocabulary& vocab, const std::string& what) {
  int prev = -1;
  for (const std::string& item : items) {
    const int id = vocab.id_or_throw(kind, item);
    if (id <= prev) {
      throw std::invalid_argument("annotation: " + what +
                                  " must be unique and in vocabulary order near '" + item + "'");
    }
    prev = id;
  }
}

}  // namespace

std::vector<int> encode_targets(const Annotation& a, const TagVocabulary& vocab) {
  validate_ordered_unique(a.tasks, Kind::task, vocab, "tasks");
  validate_ordered_unique(a.events, Kind::event, vocab, "events");

  std::vector<int> out;
  out.push_back(vocab.bos_id());
  for (const std::string& t : a.tasks) out.push_back(vocab.id_or_throw(Kind::task, t));
  if (a.language) out.push_back(vocab.id_or_throw(Kind::language, *a.language));
  if (a.age) out.push_back(vocab.id_or_throw(Kind::age, *a.age));
  if (a.gender) out.push_back(vocab.id_or_throw(Kind::gender, *a.gender));
  if (a.emotion) out.push_back(vocab.id_or_throw(Kind::emotion, *a.emotion));
  for (const std::string& e : a.events) out.push_back(vocab.id_or_throw(Kind::event, e));
  for (const std::string& w : a.transcript) out.push_back(vocab.id_or_throw(Kind::text, w));
  out.push_back(vocab.eos_id());
  return out;
}

Annotation decode_tokens(std::span<const int> tokens, const TagVocabulary& vocab) {
  if (tokens.empty()) throw ParseError(0, "empty sequence, expected <bos>");
  if (tokens.front() != vocab.bos_id()) {
    throw ParseError(0, "expected <bos>, got id " + std::to_string(tokens.front()));
  }

  Annotation a;
  // Slot order mirrors the canonical encoding; a token of an earlier slot
  // after a later one is a parse error at that position.
  enum Slot { kTask = 0, kLanguage, kAge, kGender, kEmotion, kEvent, kText, kDone };
  int slot = kTask;
  int prev_task = -1;
  int prev_event = -1;

  size_t pos = 1;
  for (; pos < tokens.size(); ++pos) {
    const int id = tokens[pos];
    if (id < 0 || id >= vocab.size()) {
      throw ParseError(pos, "unknown token id " + std::to_string(id));
    }
    if (id == vocab.eos_id()) {
      if (pos + 1 != tokens.size()) throw ParseError(pos + 1, "tokens after <eos>");
      return a;
    }
    const Kind kind = vocab.kind(id);
    switch (kind) {
      case Kind::blank:
      case Kind::bos:
        throw ParseError(pos, "unexpected " + vocab.name(id) + " inside sequence");
      case Kind::task:
        if (slot > kTask) throw ParseError(pos, "task tag after later slots");
        if (id <= prev_task) throw ParseError(pos, "task tags out of vocabulary order");
        prev_task = id;
        a.tasks.push_back(vocab.name(id));
        break;
      case Kind::language:
        if (slot > kLanguage) throw ParseError(pos, "language tag after later slots");
        if (a.language) throw ParseError(pos, "duplicate language tag");
        a.language = vocab.name(id);
        slot = kLanguage;
        break;
      case Kind::age:
        if (slot > kAge) throw ParseError(pos, "age tag after later slots");
        if (a.age) throw ParseError(pos, "duplicate age tag");
        a.age = vocab.name(id);
        slot = kAge;
        break;
      case Kind::gender:
        if (slot > kGender) throw ParseError(pos, "gender tag after later slots");
        if (a.gender) throw ParseError(pos, "duplicate gender tag");
        a.gender = vocab.name(id);
        slot = kGender;
        break;
      case Kind::emotion:
        if (slot > kEmotion) throw ParseError(pos, "emotion tag after later slots");
        if (a.emotion) throw ParseError(pos, "duplicate emotion tag");
        a.emotion = vocab.name(id);
        slot = kEmotion;
        break;
      case Kind::event:
        if (slot > kEvent) throw ParseError(pos, "event tag after transcript");
        if (slot == kEvent && id <= prev_event) {
          throw ParseError(pos, "event tags out of vocabulary order");
        }
        prev_event = id;
        a.events.push_back(vocab.name(id));
        slot = kEvent;
        break;
      case Kind::text:
        a.transcript.push_back(vocab.name(id));
        slot = kText;
        break;
      case Kind::eos:
        break;  // handled above
    }
  }
  throw ParseError(pos, "missing <eos>");
}

}  // namespace easp
