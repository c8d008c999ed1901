#pragma once

#include <span>
#include <string>

#include "easp/phonemizer.h"

namespace easp {

struct EditCounts {
  int sub = 0;
  int del = 0;
  int ins = 0;

  int total() const { return sub + del + ins; }
};

// Levenshtein with unit costs. Ties resolve toward substitution over
// deletion over insertion (globally: minimal cost, then fewest
// insertions+deletions), which pins a unique (sub, del, ins) breakdown.
EditCounts edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp);

// 100 * (sub + del + ins) / len(ref). Throws std::invalid_argument on an
// empty reference (the rate is undefined).
double wer(std::span<const std::string> ref, std::span<const std::string> hyp);

// wer over the phonemized token streams.
double per(std::span<const std::string> ref, std::span<const std::string> hyp,
           const Phonemizer& phonemizer);

}  // namespace easp
