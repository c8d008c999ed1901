#include "easp/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "easp/checkpoint.h"  // IoError

namespace easp {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

std::vector<unsigned char> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open: " + path);
  const std::streamsize n = in.tellg();
  in.seekg(0);
  std::vector<unsigned char> bytes(static_cast<size_t>(n));
  in.read(reinterpret_cast<char*>(bytes.data()), n);
  if (!in) throw IoError("read failed: " + path);
  return bytes;
}

AudioClip read_wav_pcm16(const std::string& path, const std::string& id) {
  const std::vector<unsigned char> b = read_all(path);
  if (b.size() < 44 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path);
  }
  AudioClip clip;
  clip.id = id;
  size_t pos = 12;
  bool have_fmt = false;
  int channels = 0;
  while (pos + 8 <= b.size()) {
    const uint32_t chunk_size = read_u32(b.data() + pos + 4);
    if (std::memcmp(b.data() + pos, "fmt ", 4) == 0) {
      if (pos + 8 + 16 > b.size()) throw IoError("truncated fmt chunk: " + path);
      const uint16_t format = read_u16(b.data() + pos + 8);
      channels = read_u16(b.data() + pos + 10);
      clip.sample_rate = static_cast<int>(read_u32(b.data() + pos + 12));
      const uint16_t bits = read_u16(b.data() + pos + 22);
      if (format != 1 || bits != 16) {
        throw IoError("unsupported WAV encoding (need 16-bit PCM): " + path);
      }
      if (channels != 1) throw IoError("unsupported WAV channel count (need mono): " + path);
      have_fmt = true;
    } else if (std::memcmp(b.data() + pos, "data", 4) == 0) {
      if (!have_fmt) throw IoError("WAV data chunk before fmt: " + path);
      const size_t n = std::min<size_t>(chunk_size, b.size() - pos - 8) / 2;
      clip.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t v;
        std::memcpy(&v, b.data() + pos + 8 + i * 2, 2);
        clip.samples[i] = static_cast<float>(v) / 32768.0f;
      }
      return clip;
    }
    pos += 8 + chunk_size + (chunk_size & 1);
  }
  throw IoError("WAV file has no data chunk: " + path);
}

}  // namespace

AudioClip read_audio_file(const std::string& path, const std::string& id, int sample_rate_hint) {
  if (has_suffix(path, ".wav")) return read_wav_pcm16(path, id);
  const std::vector<unsigned char> b = read_all(path);
  if (b.size() % 4 != 0) throw IoError("raw f32 file size not a multiple of 4: " + path);
  AudioClip clip;
  clip.id = id;
  clip.sample_rate = sample_rate_hint;
  clip.samples.resize(b.size() / 4);
  std::memcpy(clip.samples.data(), b.data(), b.size());
  return clip;
}

void write_raw_f32(const std::string& path, const std::vector<float>& samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(samples.data()),
            static_cast<std::streamsize>(samples.size() * 4));
  if (!out) throw IoError("write failed: " + path);
}

void write_wav_pcm16(const std::string& path, const std::vector<float>& samples, int sample_rate) {
  std::vector<unsigned char> out;
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  auto u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  };
  auto u16 = [&](uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
  };
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  u32(36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  u32(16);
  u16(1);  // PCM
  u16(1);  // mono
  u32(static_cast<uint32_t>(sample_rate));
  u32(static_cast<uint32_t>(sample_rate) * 2);
  u16(2);
  u16(16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  u32(data_bytes);
  for (float s : samples) {
    const float clamped = std::clamp(s, -1.0f, 1.0f);
    const int16_t v = static_cast<int16_t>(std::lround(clamped * 32767.0f));
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace easp
