#pragma once

#include <string>
#include <vector>

namespace easp {

// Fixed tokenization rule so error rates are reproducible: split on ASCII
// whitespace; every CJK codepoint is its own token; consecutive non-CJK
// characters between boundaries form one token.
std::vector<std::string> tokenize(const std::string& text);

bool is_cjk_codepoint(uint32_t cp);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace easp
