#include "easp/rover.h"

#include <limits>

#include "easp/edit_distance.h"

namespace easp {

RoverVerdict rover(const TranscriptPair& pair, const Phonemizer& phonemizer, double wer_max,
                   double per_max) {
  RoverVerdict v;
  if (pair.primary_text.empty()) {
    v.wer_percent = std::numeric_limits<double>::infinity();
    v.per_percent = std::numeric_limits<double>::infinity();
    v.accepted = false;
    v.reject_reason = "empty_reference";
    return v;
  }
  v.wer_percent = wer(pair.primary_text, pair.copilot_text);
  v.per_percent = per(pair.primary_text, pair.copilot_text, phonemizer);
  v.accepted = v.wer_percent <= wer_max && v.per_percent <= per_max;
  if (!v.accepted) {
    v.reject_reason = v.wer_percent > wer_max ? "wer_above_threshold" : "per_above_threshold";
  }
  return v;
}

}  // namespace easp
