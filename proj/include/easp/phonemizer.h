#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace easp {

// Lexicon-backed token-to-phones mapping. Unknown tokens map to themselves,
// so the identity phonemizer is just an empty lexicon.
class Phonemizer {
 public:
  Phonemizer() = default;

  // File format: one entry per line, "token phone [phone ...]".
  // '#' starts a comment, blank lines are skipped.
  static Phonemizer from_file(const std::string& path);

  void add(const std::string& token, std::vector<std::string> phones);
  std::vector<std::string> apply(std::span<const std::string> tokens) const;
  size_t lexicon_size() const { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> lexicon_;
};

}  // namespace easp
