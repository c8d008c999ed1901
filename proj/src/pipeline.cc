#include "easp/pipeline.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "easp/checkpoint.h"  // IoError
#include "easp/rover.h"
#include "easp/text.h"

namespace easp {

std::vector<ClipRef> read_clip_manifest(std::istream& in) {
  std::vector<ClipRef> clips;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                  ": invalid JSON: " + e.what());
    }
    ClipRef c;
    c.id = j.at("id").get<std::string>();
    c.path = j.at("path").get<std::string>();
    c.sample_rate = j.value("sample_rate", 16000);
    clips.push_back(std::move(c));
  }
  return clips;
}

std::vector<ClipRef> read_clip_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  return read_clip_manifest(in);
}

double PipelineStats::retention_ratio() const {
  if (raw_hours <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return kept_hours / raw_hours;
}

nlohmann::json stats_to_json(const PipelineStats& stats) {
  const double ratio = stats.retention_ratio();
  return nlohmann::json{
      {"raw_hours", stats.raw_hours},
      {"kept_hours", stats.kept_hours},
      {"retention_ratio",
       std::isnan(ratio) ? nlohmann::json(nullptr) : nlohmann::json(ratio)},
      {"clips_in", stats.clips_in},
      {"clips_failed", stats.clips_failed},
      {"segments_vad", stats.segments_vad},
      {"segments_accepted", stats.segments_accepted},
      {"segments_rejected", stats.segments_rejected}};
}

PipelineResult run_pipeline(std::span<const ClipRef> clips, const Transcriber& primary,
                            const Transcriber& copilot, const PipelineParams& params,
                            const Phonemizer& phonemizer) {
  params.vad.validate();
  PipelineResult result;
  result.stats.clips_in = static_cast<long long>(clips.size());
  for (const ClipRef& ref : clips) {
    AudioClip clip;
    try {
      clip = read_audio_file(ref.path, ref.id, ref.sample_rate);
    } catch (const std::exception& e) {
      ++result.stats.clips_failed;
      result.clip_errors.push_back(ref.id + ": " + e.what());
      continue;
    }
    result.stats.raw_hours += clip.duration_s() / 3600.0;
    const std::vector<Segment> segments = vad_segment(clip, params.vad);
    result.stats.segments_vad += static_cast<long long>(segments.size());
    for (const Segment& seg : segments) {
      TranscriptPair pair;
      pair.segment = seg;
      pair.primary_text = primary.transcribe(clip, seg);
      pair.copilot_text = copilot.transcribe(clip, seg);
      const RoverVerdict verdict = rover(pair, phonemizer, params.wer_max, params.per_max);
      if (verdict.accepted) {
        ++result.stats.segments_accepted;
        result.stats.kept_hours += seg.duration_s() / 3600.0;
        result.accepted.push_back({seg.clip_id, seg.start_s, seg.end_s,
                                   std::move(pair.primary_text), verdict.wer_percent,
                                   verdict.per_percent});
      } else {
        ++result.stats.segments_rejected;
      }
    }
  }
  return result;
}

void write_accepted_ndjson(std::ostream& out, std::span<const AcceptedSegment> accepted) {
  for (const AcceptedSegment& seg : accepted) {
    nlohmann::json j{{"id", seg.id},       {"start_s", seg.start_s}, {"end_s", seg.end_s},
                     {"text", join_tokens(seg.text)}, {"wer", seg.wer}, {"per", seg.per}};
    out << j.dump() << "\n";
  }
}

}  // namespace easp
