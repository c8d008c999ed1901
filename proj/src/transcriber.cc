#include "easp/transcriber.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace easp {

namespace {

uint64_t fnv1a(const void* data, size_t len, uint64_t seed = 0xCBF29CE484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

uint64_t hash_samples(const AudioClip& clip, size_t begin, size_t end) {
  // Quantize so the hash is stable across f32 encodings of the same signal.
  uint64_t h = 0xCBF29CE484222325ULL;
  for (size_t i = begin; i < end && i < clip.samples.size(); ++i) {
    const int16_t q = static_cast<int16_t>(std::lround(
        std::clamp(clip.samples[i], -1.0f, 1.0f) * 16384.0f));
    h = fnv1a(&q, sizeof(q), h);
  }
  return h;
}

}  // namespace

SyntheticTranscriber::SyntheticTranscriber(double words_per_second, int vocab_words)
    : words_per_second_(words_per_second), vocab_words_(vocab_words) {
  if (words_per_second <= 0 || vocab_words < 1) {
    throw std::invalid_argument("synthetic transcriber: invalid parameters");
  }
}

std::vector<std::string> SyntheticTranscriber::transcribe(const AudioClip& clip,
                                                          const Segment& segment) const {
  const int n_words =
      std::max(1, static_cast<int>(std::floor(segment.duration_s() * words_per_second_)));
  const size_t begin = static_cast<size_t>(segment.start_s * clip.sample_rate);
  const size_t end = std::min(clip.samples.size(),
                              static_cast<size_t>(segment.end_s * clip.sample_rate));
  const size_t window = std::max<size_t>(1, (end - begin) / static_cast<size_t>(n_words));
  std::vector<std::string> tokens;
  tokens.reserve(n_words);
  for (int w = 0; w < n_words; ++w) {
    const size_t wb = begin + static_cast<size_t>(w) * window;
    const size_t we = w + 1 == n_words ? end : wb + window;
    const uint64_t h = fnv1a(&w, sizeof(w), hash_samples(clip, wb, we));
    tokens.push_back("w" + std::to_string(h % static_cast<uint64_t>(vocab_words_)));
  }
  return tokens;
}

CorruptingTranscriber::CorruptingTranscriber(std::unique_ptr<Transcriber> base,
                                             double segment_fraction, double token_fraction)
    : base_(std::move(base)),
      segment_fraction_(segment_fraction),
      token_fraction_(token_fraction) {
  if (!base_) throw std::invalid_argument("corrupting transcriber: missing base engine");
  if (segment_fraction_ < 0 || segment_fraction_ > 1 || token_fraction_ <= 0 ||
      token_fraction_ > 1) {
    throw std::invalid_argument("corrupting transcriber: fractions out of range");
  }
}

std::vector<std::string> CorruptingTranscriber::transcribe(const AudioClip& clip,
                                                           const Segment& segment) const {
  std::vector<std::string> tokens = base_->transcribe(clip, segment);
  uint64_t h = fnv1a(clip.id.data(), clip.id.size());
  const int64_t start_ms = static_cast<int64_t>(segment.start_s * 1000.0);
  h = fnv1a(&start_ms, sizeof(start_ms), h);
  const bool corrupt =
      static_cast<double>(h % 1000000ULL) / 1000000.0 < segment_fraction_;
  if (!corrupt) return tokens;
  const int stride = std::max(1, static_cast<int>(std::lround(1.0 / token_fraction_)));
  for (size_t i = 0; i < tokens.size(); i += static_cast<size_t>(stride)) {
    tokens[i] = "x" + tokens[i];  // guaranteed substitution, never a match
  }
  return tokens;
}

std::unique_ptr<Transcriber> make_transcriber(const nlohmann::json& spec) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "synthetic") {
    return std::make_unique<SyntheticTranscriber>(spec.value("words_per_second", 2.0),
                                                  spec.value("vocab_words", 100));
  }
  if (type == "corrupting") {
    return std::make_unique<CorruptingTranscriber>(make_transcriber(spec.at("base")),
                                                   spec.value("segment_fraction", 0.5),
                                                   spec.value("token_fraction", 0.2));
  }
  throw std::invalid_argument("unknown transcriber type: " + type);
}

}  // namespace easp
