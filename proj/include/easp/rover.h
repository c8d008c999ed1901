#pragma once

#include <string>
#include <vector>

#include "easp/phonemizer.h"
#include "easp/vad.h"

namespace easp {

struct TranscriptPair {
  Segment segment;
  std::vector<std::string> primary_text;  // reference; becomes the label when accepted
  std::vector<std::string> copilot_text;  // hypothesis
};

struct RoverVerdict {
  double wer_percent = 0.0;
  double per_percent = 0.0;
  bool accepted = false;
  std::string reject_reason;  // empty when accepted
};

// Consistency filter: accept iff wer <= wer_max and per <= per_max, with the
// primary transcript as reference. An empty primary is a rejection (rates
// are undefined and reported as +inf), not an error.
RoverVerdict rover(const TranscriptPair& pair, const Phonemizer& phonemizer,
                   double wer_max = 10.0, double per_max = 5.0);

}  // namespace easp
