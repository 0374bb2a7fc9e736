#include "oilcast/experiment/runner.hpp"

#include <algorithm>
#include <limits>

#include "oilcast/data/supervised.hpp"
#include "oilcast/error.hpp"
#include "oilcast/experiment/plot.hpp"
#include "oilcast/format.hpp"
#include "oilcast/nn/checkpoint.hpp"
#include "oilcast/svg.hpp"

namespace oilcast::experiment {

namespace {

template <class Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const data::AlignedFrame& data, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.spec = spec;
  result.seed = spec.train.seed;

  result.features = in_stage("features", [&] { return compose_features(data, spec); });
  result.spec.lstm.input_dim = result.features.features.size();
  result.hash = in_stage("features", [&] { return run_hash(spec, data); });
  const auto& sel = result.features;
  const std::size_t lookback = result.spec.lstm.lookback;

  auto columns = sel.features;
  if (std::find(columns.begin(), columns.end(), sel.target) == columns.end()) columns.push_back(sel.target);
  const auto frame = in_stage("features", [&] { return data.select(columns); });

  const auto split = in_stage("split", [&] { return data::split_by_date(frame, spec.train_last, spec.test_first, spec.test_last); });
  const auto& dates = frame.dates();
  const auto test_begin =
      static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), spec.test_first) - dates.begin());
  const std::size_t test_end = test_begin + split.test.rows();

  result.scaler = in_stage("scale", [&] { return data::fit_scaler(split.train); });
  const auto scaled_train = in_stage("scale", [&] { return data::apply_scaler(split.train, result.scaler); });

  const auto train_tensors = in_stage("window", [&] {
    return data::make_supervised_windows(scaled_train, sel.features, sel.target, lookback);
  });
  const auto test_tensors = in_stage("window", [&] {
    if (test_begin < lookback)
      throw DataError("test period starts " + std::to_string(test_begin) + " rows into the data; lookback needs " +
                      std::to_string(lookback) + " rows of context");
    const auto context = data::apply_scaler(frame.slice(test_begin - lookback, test_end), result.scaler);
    return data::make_supervised_windows(context, sel.features, sel.target, lookback);
  });

  const auto trained = in_stage("train", [&] {
    auto params = nn::init_params(result.spec.lstm, spec.train.seed);
    return train::train(std::move(params), train_tensors, spec.train, options.on_epoch);
  });
  result.params = trained.params;
  result.history = trained.history;

  in_stage("evaluate", [&] {
    const auto scaled = train::predict(result.params, test_tensors.inputs);
    result.predicted = data::invert_scaler(scaled, sel.target, result.scaler);
    const auto truth = split.test.column(sel.target);
    result.truth.assign(truth.begin(), truth.end());
    result.dates = test_tensors.sample_dates;
    result.metrics = train::evaluate(result.truth, result.predicted);
  });
  result.duration = std::chrono::steady_clock::now() - started;

  if (options.runs_root) result.run_dir = in_stage("persist", [&] { return persist_run(result, *options.runs_root); });
  return result;
}

std::string predictions_to_csv(const ExperimentResult& result) {
  std::string out = "date,true,predicted\n";
  for (std::size_t i = 0; i < result.dates.size(); ++i)
    out += format_date(result.dates[i]) + "," + format_real(result.truth[i]) + "," + format_real(result.predicted[i]) + "\n";
  return out;
}

std::filesystem::path persist_run(const ExperimentResult& result, const std::filesystem::path& runs_root) {
  namespace fs = std::filesystem;
  nlohmann::json manifest = {{"hash", result.hash},
                             {"seed", result.seed},
                             {"features", result.features.features},
                             {"target_column", result.features.target},
                             {"input_width", result.features.features.size()},
                             {"test_samples", result.dates.size()},
                             {"spec", spec_to_json(result.spec)}};
  nlohmann::json scaler = result.scaler;
  auto metrics = train::metrics_to_json(result.metrics, result.scale);
  metrics["unit"] = "target price units (inverse-scaled)";

  const std::vector<std::pair<std::string, std::string>> files{
      {"spec.json", manifest.dump(2) + "\n"},
      {"scaler.json", scaler.dump(2) + "\n"},
      {"checkpoint.bin", nn::encode_checkpoint(result.params, result.seed)},
      {"predictions.csv", predictions_to_csv(result)},
      {"metrics.json", metrics.dump(2) + "\n"},
      {"history.csv", train::history_to_csv(result.history)},
      {"plot.svg", render_prediction_svg(result)},
  };

  fs::create_directories(runs_root);
  const fs::path final_dir = runs_root / result.hash;
  if (fs::exists(final_dir)) {
    for (const auto& [name, content] : files) {
      if (!fs::exists(final_dir / name) || read_file(final_dir / name) != content)
        throw PipelineError("persist", "run directory " + final_dir.string() + " exists with different " + name);
    }
    return final_dir;
  }

  const fs::path staging = runs_root / (result.hash + ".staging");
  fs::remove_all(staging);
  fs::create_directories(staging);
  for (const auto& [name, content] : files) write_file_atomic(staging / name, content);
  fs::rename(staging, final_dir);
  return final_dir;
}

StoredRun load_run(const std::filesystem::path& run_dir) {
  StoredRun run;
  try {
    run.spec = nlohmann::json::parse(read_file(run_dir / "spec.json"));
    run.metrics = nlohmann::json::parse(read_file(run_dir / "metrics.json"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("run directory: ") + e.what());
  }
  const auto history = read_file(run_dir / "history.csv");
  bool header = true;
  for (auto line : split(history, '\n')) {
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw ParseError("history.csv: expected 3 fields");
    run.history.train_loss.push_back(parse_real(fields[1]));
    run.history.val_loss.push_back(trim(fields[2]) == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                                            : parse_real(fields[2]));
  }
  const auto predictions = read_file(run_dir / "predictions.csv");
  run.predictions = static_cast<std::size_t>(std::count(predictions.begin(), predictions.end(), '\n'));
  if (run.predictions > 0) --run.predictions;
  return run;
}

}  // namespace oilcast::experiment
