#include "oilcast/nn/checkpoint.hpp"

#include <bit>
#include <cstring>

#include <json.hpp>

#include "oilcast/error.hpp"
#include "oilcast/svg.hpp"

namespace oilcast::nn {

namespace {

constexpr std::string_view kMagic = "OILCAST-CHECKPOINT 1\n";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
  return out;
}

}  // namespace

std::string encode_checkpoint(const LstmParams& params, std::uint64_t seed) {
  const auto& cfg = params.config();
  nlohmann::json header = {
      {"format", "oilcast-checkpoint"},
      {"version", 1},
      {"config",
       {{"input_dim", cfg.input_dim},
        {"hidden_dim", cfg.hidden_dim},
        {"lookback", cfg.lookback},
        {"dense_dim", cfg.dense_dim},
        {"dropout_rate", cfg.dropout_rate},
        {"output_dim", LstmConfig::output_dim}}},
      {"seed", seed},
      {"dtype", "float64"},
      {"byte_order", "little"},
      {"parameter_count", params.size()},
  };
  auto& tensors = header["tensors"] = nlohmann::json::array();
  for (const auto& s : params.layout())
    tensors.push_back({{"name", s.name}, {"rows", s.rows}, {"cols", s.cols}, {"order", "column-major"}});

  std::string out(kMagic);
  out += header.dump();
  out += '\n';
  const std::size_t start = out.size();
  out.resize(start + params.size() * sizeof(double));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(params.values()[k]));
    std::memcpy(out.data() + start + k * sizeof bits, &bits, sizeof bits);
  }
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (!bytes.starts_with(kMagic)) throw ParseError("not an oilcast checkpoint");
  bytes.remove_prefix(kMagic.size());
  const auto eol = bytes.find('\n');
  if (eol == std::string_view::npos) throw ParseError("checkpoint header is truncated");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, eol));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what());
  }
  bytes.remove_prefix(eol + 1);

  Checkpoint ckpt;
  try {
    const auto& c = header.at("config");
    LstmConfig cfg;
    cfg.input_dim = c.at("input_dim").get<std::size_t>();
    cfg.hidden_dim = c.at("hidden_dim").get<std::size_t>();
    cfg.lookback = c.at("lookback").get<std::size_t>();
    cfg.dense_dim = c.at("dense_dim").get<std::size_t>();
    cfg.dropout_rate = c.at("dropout_rate").get<double>();
    ckpt.params = LstmParams(cfg);
    ckpt.seed = header.at("seed").get<std::uint64_t>();

    const auto& tensors = header.at("tensors");
    if (tensors.size() != kBlockCount) throw ParseError("checkpoint tensor list does not match the topology");
    for (std::size_t b = 0; b < kBlockCount; ++b) {
      const auto& s = ckpt.params.layout()[b];
      if (tensors[b].at("name").get<std::string>() != s.name || tensors[b].at("rows").get<std::size_t>() != s.rows ||
          tensors[b].at("cols").get<std::size_t>() != s.cols)
        throw ParseError("checkpoint tensor " + std::to_string(b) + " has an unexpected name or shape");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what());
  }

  if (bytes.size() != ckpt.params.size() * sizeof(double))
    throw ParseError("checkpoint payload has " + std::to_string(bytes.size()) + " bytes, expected " +
                     std::to_string(ckpt.params.size() * sizeof(double)));
  for (std::size_t k = 0; k < ckpt.params.size(); ++k) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes.data() + k * sizeof bits, sizeof bits);
    ckpt.params.values()[k] = std::bit_cast<double>(to_little_endian(bits));
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const LstmParams& params, std::uint64_t seed) {
  write_file_atomic(path, encode_checkpoint(params, seed));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

}  // namespace oilcast::nn
