#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "oilcast/nn/lstm.hpp"

namespace oilcast::nn {

/// Checkpoint file layout:
///
///   OILCAST-CHECKPOINT 1\n
///   <one-line JSON header: config, seed, dtype, byte order, tensors[name, rows, cols, order]>\n
///   <parameter values as little-endian IEEE-754 doubles, in header order>
///
/// Tensors are stored column-major. Decoding restores parameters bitwise.
struct Checkpoint {
  LstmParams params;
  std::uint64_t seed = 0;
};

std::string encode_checkpoint(const LstmParams& params, std::uint64_t seed);
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const LstmParams& params, std::uint64_t seed);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace oilcast::nn
