#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oilcast/data/scaler.hpp"
#include "oilcast/experiment/spec.hpp"
#include "oilcast/train/metrics.hpp"
#include "oilcast/train/trainer.hpp"

namespace oilcast::experiment {

struct RunOptions {
  /// When set, artifacts go to `<runs_root>/<hash>/`.
  std::optional<std::filesystem::path> runs_root;
  train::EpochCallback on_epoch;
};

struct ExperimentResult {
  ExperimentSpec spec;  // with lstm.input_dim resolved
  FeatureSelection features;
  std::string hash;
  std::uint64_t seed = 0;

  data::ScalerParams scaler;
  nn::LstmParams params;
  train::TrainHistory history;

  train::MetricsReport metrics;
  train::MetricScale scale = train::MetricScale::Original;
  std::vector<Date> dates;         // one per test sample
  std::vector<double> truth;       // original-scale target
  std::vector<double> predicted;   // original-scale prediction

  std::chrono::duration<double> duration{};
  std::optional<std::filesystem::path> run_dir;
};

/// split -> fit scaler on train -> scale -> window -> train -> predict test -> invert -> evaluate.
///
/// Test windows take their first inputs from the rows just before `test_first`,
/// so every test date gets a prediction. Errors are rethrown as PipelineError
/// tagged with the failing stage.
ExperimentResult run_experiment(const ExperimentSpec& spec, const data::AlignedFrame& data,
                                const RunOptions& options = {});

/// Writes spec.json, scaler.json, checkpoint.bin, predictions.csv, metrics.json,
/// history.csv and plot.svg. An existing directory for the same hash must hold
/// byte-identical files, otherwise PipelineError("persist", ...).
std::filesystem::path persist_run(const ExperimentResult& result, const std::filesystem::path& runs_root);

/// `date,true,predicted` CSV.
std::string predictions_to_csv(const ExperimentResult& result);

/// The subset of a persisted run that `report` needs.
struct StoredRun {
  nlohmann::json spec;
  nlohmann::json metrics;
  train::TrainHistory history;
  std::size_t predictions = 0;
};

StoredRun load_run(const std::filesystem::path& run_dir);

}  // namespace oilcast::experiment
