#include "easp/phonemizer.h"

#include <fstream>
#include <sstream>

#include "easp/checkpoint.h"  // IoError

namespace easp {

Phonemizer Phonemizer::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open phonemizer lexicon: " + path);
  Phonemizer p;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    std::vector<std::string> phones;
    std::string phone;
    while (ss >> phone) phones.push_back(phone);
    if (!phones.empty()) p.add(token, std::move(phones));
  }
  return p;
}

void Phonemizer::add(const std::string& token, std::vector<std::string> phones) {
  lexicon_[token] = std::move(phones);
}

std::vector<std::string> Phonemizer::apply(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) {
    auto it = lexicon_.find(t);
    if (it == lexicon_.end()) {
      out.push_back(t);
    } else {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

}  // namespace easp
