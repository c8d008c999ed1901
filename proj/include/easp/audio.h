#pragma once

#include <string>
#include <vector>

namespace easp {

struct AudioClip {
  std::string id;
  int sample_rate = 16000;
  std::vector<float> samples;  // mono, [-1, 1]

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// ".wav" reads 16-bit PCM mono RIFF; anything else is headerless
// little-endian f32 PCM at sample_rate_hint.
AudioClip read_audio_file(const std::string& path, const std::string& id, int sample_rate_hint);

void write_raw_f32(const std::string& path, const std::vector<float>& samples);
void write_wav_pcm16(const std::string& path, const std::vector<float>& samples, int sample_rate);

}  // namespace easp
