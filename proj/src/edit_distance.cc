#include "easp/edit_distance.h"

#include <stdexcept>
#include <vector>

namespace easp {

EditCounts edit_distance(std::span<const std::string> ref, std::span<const std::string> hyp) {
  const size_t r = ref.size();
  const size_t h = hyp.size();
  // Secondary objective: among minimal-cost paths, minimize del+ins (i.e.
  // maximize substitutions). del-ins is pinned by the length difference, so
  // that decomposition is unique and the counts are canonical and symmetric.
  struct Cell {
    int cost = 0;
    int indel = 0;
    EditCounts counts;
  };
  auto better = [](int cost, int indel, const Cell& incumbent) {
    return cost < incumbent.cost || (cost == incumbent.cost && indel < incumbent.indel);
  };
  std::vector<Cell> prev(h + 1), cur(h + 1);
  for (size_t j = 1; j <= h; ++j) {
    prev[j].cost = static_cast<int>(j);
    prev[j].indel = static_cast<int>(j);
    prev[j].counts.ins = static_cast<int>(j);
  }
  for (size_t i = 1; i <= r; ++i) {
    cur[0].cost = static_cast<int>(i);
    cur[0].indel = static_cast<int>(i);
    cur[0].counts = EditCounts{0, static_cast<int>(i), 0};
    for (size_t j = 1; j <= h; ++j) {
      const bool match = ref[i - 1] == hyp[j - 1];
      // Substitution/match first, then deletion, then insertion.
      cur[j] = prev[j - 1];
      cur[j].cost += match ? 0 : 1;
      if (!match) ++cur[j].counts.sub;
      if (better(prev[j].cost + 1, prev[j].indel + 1, cur[j])) {
        cur[j] = prev[j];
        cur[j].cost += 1;
        cur[j].indel += 1;
        ++cur[j].counts.del;
      }
      if (better(cur[j - 1].cost + 1, cur[j - 1].indel + 1, cur[j])) {
        cur[j] = cur[j - 1];
        cur[j].cost += 1;
        cur[j].indel += 1;
        ++cur[j].counts.ins;
      }
    }
    std::swap(prev, cur);
  }
  return prev[h].counts;
}

double wer(std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.empty()) throw std::invalid_argument("wer: empty reference, rate undefined");
  return 100.0 * edit_distance(ref, hyp).total() / static_cast<double>(ref.size());
}

double per(std::span<const std::string> ref, std::span<const std::string> hyp,
           const Phonemizer& phonemizer) {
  const std::vector<std::string> pr = phonemizer.apply(ref);
  const std::vector<std::string> ph = phonemizer.apply(hyp);
  if (pr.empty()) throw std::invalid_argument("per: empty phonemized reference, rate undefined");
  return 100.0 * edit_distance(pr, ph).total() / static_cast<double>(pr.size());
}

}  // namespace easp
