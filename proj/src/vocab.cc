#include "easp/vocab.h"

#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "easp/checkpoint.h"  // IoError

namespace easp {

namespace {

const std::vector<std::string> kTaskTags = {"transcribe", "lid", "age", "gender", "emotion"};

const std::vector<std::string> kDefaultLanguages = {"zh", "en", "yue", "sichuan", "minnan"};
const std::vector<std::string> kDefaultAges = {"child", "adult", "elderly"};
const std::vector<std::string> kDefaultGenders = {"male", "female"};
const std::vector<std::string> kDefaultEmotions = {"neutral",  "anger", "sadness", "happiness",
                                                   "surprise", "fear",  "disgust"};

// 72 common interaction-scene sound events.
const std::vector<std::string> kDefaultEvents = {
    "cat_meow",        "dog_bark",       "phone_ring",     "cough",
    "sneeze",          "breathing",      "crying",         "keyboard_click",
    "humming",         "laughter",       "applause",       "door_knock",
    "door_slam",       "footsteps",      "whistling",      "snoring",
    "yawning",         "throat_clear",   "sniffing",       "clapping",
    "finger_snap",     "glass_clink",    "glass_break",    "water_pour",
    "water_drip",      "toilet_flush",   "vacuum_cleaner", "washing_machine",
    "microwave_beep",  "kettle_whistle", "alarm_clock",    "doorbell",
    "car_horn",        "car_engine",     "siren",          "train_horn",
    "airplane",        "helicopter",     "motorcycle",     "bicycle_bell",
    "bird_chirp",      "rooster_crow",   "cow_moo",        "sheep_bleat",
    "horse_neigh",     "pig_oink",       "frog_croak",     "cricket_chirp",
    "rain",            "thunder",        "wind",           "ocean_waves",
    "fire_crackle",    "gunshot",        "fireworks",      "drum",
    "guitar",          "piano",          "violin",         "trumpet",
    "bell_toll",       "chainsaw",       "drill",          "hammering",
    "sawing",          "typing",         "mouse_click",    "camera_shutter",
    "page_turn",       "zipper",         "scissors_snip",  "brushing_teeth"};

// Small word list so transcripts can be exercised without a real tokenizer.
const std::vector<std::string> kDefaultTextTokens = {
    "a",    "an",   "and",  "are",  "at",    "be",   "but",  "by",   "can",  "day",
    "do",   "for",  "from", "go",   "good",  "have", "he",   "hello", "her",  "his",
    "how",  "i",    "in",   "is",   "it",    "like", "me",   "my",   "no",   "not",
    "now",  "of",   "on",   "one",  "or",    "she",  "so",   "that", "the",  "they",
    "this", "time", "to",   "two",  "up",    "was",  "we",   "what", "when", "where",
    "which", "who", "will", "with", "world", "yes",  "you",  "your"};

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& key,
                                     const std::vector<std::string>& fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<std::vector<std::string>>();
}

void require_size(const std::vector<std::string>& v, size_t n, const std::string& what) {
  if (v.size() != n) {
    throw std::invalid_argument("vocabulary: expected exactly " + std::to_string(n) + " " +
                                what + " tags, got " + std::to_string(v.size()));
  }
}

}  // namespace

TagVocabulary TagVocabulary::defaults() {
  TagVocabulary v;
  v.task_ = kTaskTags;
  v.language_ = kDefaultLanguages;
  v.age_ = kDefaultAges;
  v.gender_ = kDefaultGenders;
  v.emotion_ = kDefaultEmotions;
  v.event_ = kDefaultEvents;
  v.text_ = kDefaultTextTokens;
  v.assign_ids();
  return v;
}

TagVocabulary TagVocabulary::from_json(const nlohmann::json& j) {
  TagVocabulary v;
  v.task_ = string_list(j, "tasks", kTaskTags);
  v.language_ = string_list(j, "languages", kDefaultLanguages);
  v.age_ = string_list(j, "ages", kDefaultAges);
  v.gender_ = string_list(j, "genders", kDefaultGenders);
  v.emotion_ = string_list(j, "emotions", kDefaultEmotions);
  v.event_ = string_list(j, "events", kDefaultEvents);
  v.text_ = string_list(j, "text_tokens", kDefaultTextTokens);
  v.assign_ids();
  return v;
}

TagVocabulary TagVocabulary::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("vocabulary " + path + ": invalid JSON: " + e.what());
  }
  return from_json(j);
}

void TagVocabulary::assign_ids() {
  require_size(task_, 5, "task");
  require_size(language_, 5, "language");
  require_size(age_, 3, "age");
  require_size(gender_, 2, "gender");
  require_size(emotion_, 7, "emotion");
  if (event_.empty()) throw std::invalid_argument("vocabulary: event list must not be empty");

  names_ = {"<blank>", "<bos>", "<eos>"};
  kinds_ = {Kind::blank, Kind::bos, Kind::eos};
  first_ids_.assign(10, -1);
  first_ids_[static_cast<int>(Kind::blank)] = 0;
  first_ids_[static_cast<int>(Kind::bos)] = 1;
  first_ids_[static_cast<int>(Kind::eos)] = 2;

  auto append = [&](Kind kind, const std::vector<std::string>& tags) {
    first_ids_[static_cast<int>(kind)] = static_cast<int>(names_.size());
    for (const std::string& t : tags) {
      names_.push_back(t);
      kinds_.push_back(kind);
    }
  };
  append(Kind::task, task_);
  append(Kind::language, language_);
  append(Kind::age, age_);
  append(Kind::gender, gender_);
  append(Kind::emotion, emotion_);
  append(Kind::event, event_);
  append(Kind::text, text_);

  std::unordered_set<std::string> seen;
  for (const std::string& n : names_) {
    if (!seen.insert(n).second) {
      throw std::invalid_argument("vocabulary: duplicate token '" + n + "'");
    }
  }
}

TagVocabulary::Kind TagVocabulary::kind(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("vocabulary: id " + std::to_string(id) + " out of range");
  }
  return kinds_[id];
}

const std::string& TagVocabulary::name(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range("vocabulary: id " + std::to_string(id) + " out of range");
  }
  return names_[id];
}

const std::vector<std::string>& TagVocabulary::tags(Kind kind) const {
  switch (kind) {
    case Kind::task: return task_;
    case Kind::language: return language_;
    case Kind::age: return age_;
    case Kind::gender: return gender_;
    case Kind::emotion: return emotion_;
    case Kind::event: return event_;
    case Kind::text: return text_;
    default: throw std::invalid_argument("vocabulary: kind has no tag list");
  }
}

int TagVocabulary::first_id(Kind kind) const { return first_ids_[static_cast<int>(kind)]; }

int TagVocabulary::find(Kind kind, const std::string& name) const {
  const std::vector<std::string>& list = tags(kind);
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i] == name) return first_id(kind) + static_cast<int>(i);
  }
  return -1;
}

int TagVocabulary::id_or_throw(Kind kind, const std::string& name) const {
  const int id = find(kind, name);
  if (id >= 0) return id;
  std::string allowed;
  for (const std::string& t : tags(kind)) {
    if (!allowed.empty()) allowed += ", ";
    allowed += t;
  }
  throw std::invalid_argument("unknown tag '" + name + "'; allowed: " + allowed);
}

}  // namespace easp
