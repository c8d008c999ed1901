#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "easp/audio.h"
#include "easp/vad.h"

namespace easp {

// Pluggable engine slot for the pipeline. Real ASR engines are out of
// scope; implementations here are deterministic pure functions of the
// segment audio so fixtures reproduce exactly.
class Transcriber {
 public:
  virtual ~Transcriber() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::string> transcribe(const AudioClip& clip,
                                              const Segment& segment) const = 0;
};

// Emits words_per_second tokens per segment second; each token is picked
// from a fixed word list by hashing its window of samples. Two instances
// always agree on the same audio.
class SyntheticTranscriber : public Transcriber {
 public:
  explicit SyntheticTranscriber(double words_per_second = 2.0, int vocab_words = 100);

  std::string name() const override { return "synthetic"; }
  std::vector<std::string> transcribe(const AudioClip& clip,
                                      const Segment& segment) const override;

 private:
  double words_per_second_;
  int vocab_words_;
};

// Wraps a base transcriber; deterministically corrupts a fraction of
// segments (chosen by hashing clip id and segment start) by substituting
// every round(1/token_fraction)-th token.
class CorruptingTranscriber : public Transcriber {
 public:
  CorruptingTranscriber(std::unique_ptr<Transcriber> base, double segment_fraction,
                        double token_fraction);

  std::string name() const override { return "corrupting(" + base_->name() + ")"; }
  std::vector<std::string> transcribe(const AudioClip& clip,
                                      const Segment& segment) const override;

 private:
  std::unique_ptr<Transcriber> base_;
  double segment_fraction_;
  double token_fraction_;
};

// Engine from a config spec:
//   {"type": "synthetic", "words_per_second": 2.0, "vocab_words": 100}
//   {"type": "corrupting", "base": {...}, "segment_fraction": 0.5,
//    "token_fraction": 0.2}
std::unique_ptr<Transcriber> make_transcriber(const nlohmann::json& spec);

}  // namespace easp
