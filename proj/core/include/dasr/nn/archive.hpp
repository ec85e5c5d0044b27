#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dasr/nn/tensor.hpp"

namespace dasr::nn {

// Versioned binary tensor container.
//
//   "DASRCKPT"  magic, 8 bytes
//   u32         format version
//   u32         phase tag
//   u64         iteration
//   u32 + bytes metadata (UTF-8 JSON)
//   u32         tensor count
//   per tensor: u16 name length, name, u8 dtype (1 = f64), u8 rank (4),
//               4 x u32 dims, u64 payload offset
//   u64 + bytes payload, little-endian f64
//   u32         CRC-32 of every preceding byte
struct TensorArchive {
  static constexpr std::uint32_t kVersion = 1;

  std::uint32_t phase = 0;
  std::uint64_t iteration = 0;
  std::string metadata;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* find(const std::string& name) const;
  const Tensor& get(const std::string& name) const;
};

std::vector<unsigned char> serialize_archive(const TensorArchive& archive);
TensorArchive deserialize_archive(const std::vector<unsigned char>& bytes);

void write_archive(const TensorArchive& archive, const std::filesystem::path& path);
TensorArchive read_archive(const std::filesystem::path& path);

}  // namespace dasr::nn
