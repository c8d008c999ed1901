#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "easp/matrix.h"

namespace easp {

// Unreadable/unwritable files and other OS-level failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally invalid container contents (bad magic, version, index).
struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bit-exact serialized model container.
//
// Layout: magic "EMOE", version byte 0x01, u64 LE header length, UTF-8 JSON
// header, then the tensor payloads as little-endian f64 runs concatenated in
// index order. The header carries caller metadata under "meta" and the
// tensor index under "tensors": [{name, rows, cols, offset}], offsets being
// byte positions inside the payload section.
struct Checkpoint {
  nlohmann::json meta;
  std::vector<std::pair<std::string, Matrix>> tensors;

  const Matrix* find(const std::string& name) const;

  void save(const std::string& path) const;
  std::vector<unsigned char> serialize() const;

  static Checkpoint load(const std::string& path);
  static Checkpoint deserialize(const std::vector<unsigned char>& bytes);
};

}  // namespace easp
