#include "easp/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>

namespace easp {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'O', 'E'};
constexpr unsigned char kVersion = 0x01;

void append_u64_le(std::vector<unsigned char>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

uint64_t read_u64_le(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

void append_f64_le(std::vector<unsigned char>& out, const std::vector<double>& values) {
  const size_t start = out.size();
  out.resize(start + values.size() * 8);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data() + start, values.data(), values.size() * 8);
  } else {
    for (size_t i = 0; i < values.size(); ++i) {
      uint64_t bits;
      std::memcpy(&bits, &values[i], 8);
      for (int b = 0; b < 8; ++b) {
        out[start + i * 8 + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xFF);
      }
    }
  }
}

void read_f64_le(const unsigned char* p, std::vector<double>& values) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(values.data(), p, values.size() * 8);
  } else {
    for (size_t i = 0; i < values.size(); ++i) {
      uint64_t bits = read_u64_le(p + i * 8);
      std::memcpy(&values[i], &bits, 8);
    }
  }
}

}  // namespace

const Matrix* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return &m;
  }
  return nullptr;
}

std::vector<unsigned char> Checkpoint::serialize() const {
  nlohmann::json header;
  header["meta"] = meta;
  nlohmann::json index = nlohmann::json::array();
  uint64_t offset = 0;
  for (const auto& [name, m] : tensors) {
    index.push_back({{"name", name}, {"rows", m.rows}, {"cols", m.cols}, {"offset", offset}});
    offset += m.data.size() * 8;
  }
  header["tensors"] = index;
  const std::string header_str = header.dump();

  std::vector<unsigned char> out;
  out.reserve(13 + header_str.size() + offset);
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  append_u64_le(out, header_str.size());
  out.insert(out.end(), header_str.begin(), header_str.end());
  for (const auto& [name, m] : tensors) append_f64_le(out, m.data);
  return out;
}

Checkpoint Checkpoint::deserialize(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 13 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CheckpointError("bad checkpoint: missing EMOE magic");
  }
  if (bytes[4] != kVersion) {
    throw CheckpointError("bad checkpoint: unsupported version " + std::to_string(bytes[4]));
  }
  const uint64_t header_len = read_u64_le(bytes.data() + 5);
  if (13 + header_len > bytes.size()) {
    throw CheckpointError("bad checkpoint: truncated header");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 13, bytes.begin() + 13 + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("bad checkpoint: header is not valid JSON: ") + e.what());
  }
  Checkpoint ck;
  ck.meta = header.value("meta", nlohmann::json::object());
  const size_t payload_start = 13 + header_len;
  for (const auto& entry : header.at("tensors")) {
    const std::string name = entry.at("name").get<std::string>();
    Matrix m(entry.at("rows").get<int>(), entry.at("cols").get<int>());
    const uint64_t off = entry.at("offset").get<uint64_t>();
    if (payload_start + off + m.data.size() * 8 > bytes.size()) {
      throw CheckpointError("bad checkpoint: tensor '" + name + "' exceeds payload");
    }
    read_f64_le(bytes.data() + payload_start + off, m.data);
    ck.tensors.emplace_back(name, std::move(m));
  }
  return ck;
}

void Checkpoint::save(const std::string& path) const {
  const std::vector<unsigned char> bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open: " + path);
  const std::streamsize n = in.tellg();
  in.seekg(0);
  std::vector<unsigned char> bytes(static_cast<size_t>(n));
  in.read(reinterpret_cast<char*>(bytes.data()), n);
  if (!in) throw IoError("read failed: " + path);
  return deserialize(bytes);
}

}  // namespace easp
