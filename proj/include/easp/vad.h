#pragma once

#include <string>
#include <vector>

#include "easp/audio.h"

namespace easp {

struct VadParams {
  double frame_ms = 25.0;
  double energy_threshold = 0.01;  // RMS above this is voiced
  double min_segment_s = 2.0;
  double max_segment_s = 30.0;
  double merge_gap_s = 0.3;  // unvoiced gaps shorter than this are bridged

  void validate() const;  // requires max_segment_s >= 2 * min_segment_s
};

struct Segment {
  std::string clip_id;
  double start_s = 0.0;
  double end_s = 0.0;

  double duration_s() const { return end_s - start_s; }
};

// Energy VAD: frames with RMS above the threshold are voiced, contiguous
// voiced runs merge across short gaps, runs under min_segment_s drop, runs
// over max_segment_s split greedily at max_segment_s. When the greedy tail
// would fall under min_segment_s the final boundary shifts back so the last
// piece is exactly min_segment_s; every emitted segment therefore satisfies
// min_segment_s <= duration <= max_segment_s.
std::vector<Segment> vad_segment(const AudioClip& clip, const VadParams& params);

}  // namespace easp
