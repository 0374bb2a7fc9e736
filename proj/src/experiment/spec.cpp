#include "oilcast/experiment/spec.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>

#include "oilcast/error.hpp"

namespace oilcast::experiment {

nlohmann::json lstm_config_to_json(const nn::LstmConfig& c) {
  return {{"input_dim", c.input_dim},
          {"hidden_dim", c.hidden_dim},
          {"lookback", c.lookback},
          {"dense_dim", c.dense_dim},
          {"dropout_rate", c.dropout_rate}};
}

void apply_lstm_config(const nlohmann::json& j, nn::LstmConfig& c) {
  c.input_dim = j.value("input_dim", c.input_dim);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.lookback = j.value("lookback", c.lookback);
  c.dense_dim = j.value("dense_dim", c.dense_dim);
  c.dropout_rate = j.value("dropout_rate", c.dropout_rate);
}

nlohmann::json train_config_to_json(const train::TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"validation_fraction", c.validation_fraction},
          {"seed", c.seed},
          {"shuffle", c.shuffle}};
}

void apply_train_config(const nlohmann::json& j, train::TrainConfig& c) {
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
  c.seed = j.value("seed", c.seed);
  c.shuffle = j.value("shuffle", c.shuffle);
}

nlohmann::json spec_to_json(const ExperimentSpec& s) {
  return {{"target", s.target},
          {"variant", s.variant},
          {"extra_columns", s.extra_columns},
          {"augment_ohlc", s.augment_ohlc},
          {"train_last", format_date(s.train_last)},
          {"test_first", format_date(s.test_first)},
          {"test_last", format_date(s.test_last)},
          {"lstm", lstm_config_to_json(s.lstm)},
          {"train", train_config_to_json(s.train)}};
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  try {
    ExperimentSpec s;
    s.target = j.at("target").get<std::string>();
    s.variant = j.value("variant", s.variant);
    s.extra_columns = j.value("extra_columns", s.extra_columns);
    s.augment_ohlc = j.value("augment_ohlc", s.augment_ohlc);
    s.train_last = parse_date(j.at("train_last").get<std::string>());
    s.test_first = parse_date(j.at("test_first").get<std::string>());
    s.test_last = parse_date(j.at("test_last").get<std::string>());
    if (j.contains("lstm")) apply_lstm_config(j.at("lstm"), s.lstm);
    if (j.contains("train")) apply_train_config(j.at("train"), s.train);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Column whose symbol matches `asset` case-insensitively and whose field is `field`.
std::string find_column(const data::AlignedFrame& frame, std::string_view asset, std::string_view field) {
  const std::string exact = std::string(asset) + "." + std::string(field);
  if (frame.has_column(exact)) return exact;
  const std::string wanted = lower(exact);
  for (const auto& name : frame.column_names()) {
    if (lower(name) == wanted) return name;
  }
  throw DataError("missing column " + exact);
}

}  // namespace

FeatureSelection compose_features(const data::AlignedFrame& frame, const ExperimentSpec& spec) {
  FeatureSelection sel;
  for (const char* field : {"open", "high", "low", "close"}) sel.features.push_back(find_column(frame, spec.target, field));
  sel.target = sel.features.back();

  const auto append = [&](const std::string& column) {
    if (std::find(sel.features.begin(), sel.features.end(), column) == sel.features.end()) sel.features.push_back(column);
  };

  if (spec.variant == "Main") {
  } else if (spec.variant == "custom") {
    for (const auto& column : spec.extra_columns) {
      if (!frame.has_column(column)) throw DataError("missing column " + column);
      append(column);
    }
  } else if (spec.variant.size() > 1 && spec.variant.front() == '+') {
    const std::string asset = spec.variant.substr(1);
    if (spec.augment_ohlc) {
      for (const char* field : {"open", "high", "low", "close"}) append(find_column(frame, asset, field));
    } else {
      append(find_column(frame, asset, "close"));
    }
  } else {
    throw DataError("unknown variant '" + spec.variant + "' (expected Main, +<ASSET> or custom)");
  }
  return sel;
}

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string run_hash(const ExperimentSpec& spec, const data::AlignedFrame& frame) {
  const auto sel = compose_features(frame, spec);
  auto columns = sel.features;
  if (std::find(columns.begin(), columns.end(), sel.target) == columns.end()) columns.push_back(sel.target);
  auto resolved = spec;
  resolved.lstm.input_dim = sel.features.size();
  std::string content = spec_to_json(resolved).dump();
  content += '\n';
  content += data::serialize_frame_csv(frame.select(columns));
  return sha256_hex(content).substr(0, 16);
}

}  // namespace oilcast::experiment
