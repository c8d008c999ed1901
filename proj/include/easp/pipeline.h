#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "easp/phonemizer.h"
#include "easp/transcriber.h"
#include "easp/vad.h"

namespace easp {

struct ClipRef {
  std::string id;
  std::string path;
  int sample_rate = 16000;
};

// Input manifest: newline-delimited JSON, {"id", "path", "sample_rate"}.
std::vector<ClipRef> read_clip_manifest(std::istream& in);
std::vector<ClipRef> read_clip_manifest_file(const std::string& path);

struct AcceptedSegment {
  std::string id;  // clip id
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<std::string> text;  // primary transcript, the final label
  double wer = 0.0;
  double per = 0.0;
};

struct PipelineStats {
  double raw_hours = 0.0;
  double kept_hours = 0.0;
  // kept_hours / raw_hours; NaN (serialized as null) when raw_hours is 0.
  double retention_ratio() const;
  long long clips_in = 0;
  long long clips_failed = 0;
  long long segments_vad = 0;
  long long segments_accepted = 0;
  long long segments_rejected = 0;
};

nlohmann::json stats_to_json(const PipelineStats& stats);

struct PipelineParams {
  VadParams vad;
  double wer_max = 10.0;
  double per_max = 5.0;
};

struct PipelineResult {
  std::vector<AcceptedSegment> accepted;  // input manifest order
  PipelineStats stats;
  std::vector<std::string> clip_errors;  // per-clip failures, run continues
};

// VAD -> primary + copilot transcription -> rover filter. Per-clip read
// failures are recorded and skipped, never fatal.
PipelineResult run_pipeline(std::span<const ClipRef> clips, const Transcriber& primary,
                            const Transcriber& copilot, const PipelineParams& params,
                            const Phonemizer& phonemizer);

// Output manifest: one JSON object per accepted segment,
// {"id", "start_s", "end_s", "text", "wer", "per"}.
void write_accepted_ndjson(std::ostream& out, std::span<const AcceptedSegment> accepted);

}  // namespace easp
