#include "easp/text.h"

#include <cctype>

namespace easp {

bool is_cjk_codepoint(uint32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) ||    // CJK unified
         (cp >= 0x3400 && cp <= 0x4DBF) ||    // extension A
         (cp >= 0xF900 && cp <= 0xFAFF) ||    // compatibility ideographs
         (cp >= 0x20000 && cp <= 0x2A6DF);    // extension B
}

namespace {

// Decodes one UTF-8 codepoint at `i`, advancing it. Malformed bytes are
// treated as single Latin-1 characters rather than rejected.
uint32_t next_codepoint(const std::string& s, size_t& i, size_t& byte_len) {
  const unsigned char c = static_cast<unsigned char>(s[i]);
  int extra = 0;
  uint32_t cp = c;
  if (c >= 0xF0) {
    extra = 3;
    cp = c & 0x07;
  } else if (c >= 0xE0) {
    extra = 2;
    cp = c & 0x0F;
  } else if (c >= 0xC0) {
    extra = 1;
    cp = c & 0x1F;
  }
  if (i + extra >= s.size()) extra = 0;
  for (int k = 1; k <= extra; ++k) {
    const unsigned char cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) {
      extra = k - 1;
      cp = c;
      break;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  byte_len = static_cast<size_t>(extra) + 1;
  i += byte_len;
  return cp;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  size_t i = 0;
  while (i < text.size()) {
    const size_t start = i;
    size_t len = 0;
    const uint32_t cp = next_codepoint(text, i, len);
    if (cp < 0x80 && std::isspace(static_cast<int>(cp))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else if (is_cjk_codepoint(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      tokens.push_back(text.substr(start, len));
    } else {
      current.append(text, start, len);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace easp
