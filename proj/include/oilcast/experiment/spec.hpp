#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oilcast/data/frame.hpp"
#include "oilcast/date.hpp"
#include "oilcast/nn/lstm.hpp"
#include "oilcast/train/trainer.hpp"

namespace oilcast::experiment {

/// One training run: which instrument to forecast, which features to feed it,
/// the date ranges and the model/training settings. `train.seed` is the run seed.
///
/// Variants:
///   "Main"      target open/high/low/close
///   "+<ASSET>"  Main plus the asset's close (or its OHLC with augment_ohlc)
///   "custom"    Main plus `extra_columns`
struct ExperimentSpec {
  std::string target;
  std::string variant = "Main";
  std::vector<std::string> extra_columns;
  bool augment_ohlc = false;
  Date train_last{};
  Date test_first{};
  Date test_last{};
  nn::LstmConfig lstm;  // input_dim is overwritten by the composed feature width
  train::TrainConfig train;
};

nlohmann::json spec_to_json(const ExperimentSpec& spec);

/// Missing keys keep their defaults; dates are required.
ExperimentSpec spec_from_json(const nlohmann::json& j);

nlohmann::json lstm_config_to_json(const nn::LstmConfig& config);
void apply_lstm_config(const nlohmann::json& j, nn::LstmConfig& config);
nlohmann::json train_config_to_json(const train::TrainConfig& config);
void apply_train_config(const nlohmann::json& j, train::TrainConfig& config);

struct FeatureSelection {
  std::vector<std::string> features;
  std::string target;
};

/// Resolves a variant into concrete frame columns. Asset names match column
/// prefixes case-insensitively ("+Gold" finds "GOLD.close"). Throws DataError
/// naming the first missing column.
FeatureSelection compose_features(const data::AlignedFrame& frame, const ExperimentSpec& spec);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Content address of a run: the canonical spec JSON (seed included) plus the
/// bytes of the columns the run reads. First 16 hex digits of SHA-256.
std::string run_hash(const ExperimentSpec& spec, const data::AlignedFrame& frame);

}  // namespace oilcast::experiment
