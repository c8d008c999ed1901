#include "easp/vad.h"

#include <cmath>
#include <stdexcept>

namespace easp {

void VadParams::validate() const {
  if (frame_ms <= 0) throw std::invalid_argument("vad: frame_ms must be > 0");
  if (min_segment_s <= 0 || max_segment_s < 2 * min_segment_s) {
    throw std::invalid_argument(
        "vad: need max_segment_s >= 2 * min_segment_s so split tails stay in range");
  }
  if (merge_gap_s < 0) throw std::invalid_argument("vad: merge_gap_s must be >= 0");
}

std::vector<Segment> vad_segment(const AudioClip& clip, const VadParams& params) {
  params.validate();
  std::vector<Segment> out;
  if (clip.samples.empty() || clip.sample_rate <= 0) return out;

  const size_t frame_len =
      std::max<size_t>(1, static_cast<size_t>(clip.sample_rate * params.frame_ms / 1000.0));
  const double frame_s = static_cast<double>(frame_len) / clip.sample_rate;
  const size_t n_frames = (clip.samples.size() + frame_len - 1) / frame_len;

  std::vector<bool> voiced(n_frames);
  for (size_t f = 0; f < n_frames; ++f) {
    const size_t begin = f * frame_len;
    const size_t end = std::min(begin + frame_len, clip.samples.size());
    double energy = 0.0;
    for (size_t i = begin; i < end; ++i) {
      energy += static_cast<double>(clip.samples[i]) * clip.samples[i];
    }
    const double rms = std::sqrt(energy / static_cast<double>(end - begin));
    voiced[f] = rms > params.energy_threshold;
  }

  // Voiced runs in frame units, merged across gaps shorter than merge_gap_s.
  struct Run {
    size_t begin, end;  // [begin, end) frames
  };
  std::vector<Run> runs;
  size_t f = 0;
  while (f < n_frames) {
    if (!voiced[f]) {
      ++f;
      continue;
    }
    size_t end = f + 1;
    while (end < n_frames && voiced[end]) ++end;
    if (!runs.empty() && static_cast<double>(f - runs.back().end) * frame_s < params.merge_gap_s) {
      runs.back().end = end;
    } else {
      runs.push_back({f, end});
    }
    f = end;
  }

  // Duration checks and splits use exact sample spans: a run's final frame
  // may be partial, so frame counts overstate its length.
  const size_t min_samples = static_cast<size_t>(
      std::ceil(params.min_segment_s * clip.sample_rate - 1e-6));
  const size_t max_samples = std::max<size_t>(
      1, static_cast<size_t>(params.max_segment_s * clip.sample_rate + 1e-6));

  auto emit = [&](size_t begin, size_t end) {
    Segment s;
    s.clip_id = clip.id;
    s.start_s = static_cast<double>(begin) / clip.sample_rate;
    s.end_s = static_cast<double>(end) / clip.sample_rate;
    out.push_back(std::move(s));
  };

  for (const Run& run : runs) {
    const size_t begin = run.begin * frame_len;
    const size_t end = std::min(run.end * frame_len, clip.samples.size());
    size_t len = end - begin;
    if (len < min_samples) continue;
    size_t cursor = begin;
    while (len > max_samples) {
      size_t piece = max_samples;
      // Keep the eventual tail at least min_samples long.
      if (len - piece < min_samples) piece = len - min_samples;
      emit(cursor, cursor + piece);
      cursor += piece;
      len -= piece;
    }
    emit(cursor, cursor + len);
  }
  return out;
}

}  // namespace easp
