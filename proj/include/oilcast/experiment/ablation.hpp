#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "oilcast/experiment/runner.hpp"

namespace oilcast::experiment {

inline constexpr std::array<const char*, 4> kMetricNames{"MSE", "RMSE", "MAE", "MAPE"};

struct AblationRow {
  std::string variant;
  std::optional<train::MetricsReport> metrics;  // median over replicates
  std::vector<std::string> run_hashes;
  std::string error;                            // set when the variant failed
};

struct AblationTable {
  std::vector<AblationRow> rows;
  /// Row index of the smallest value for MSE, RMSE, MAE, MAPE (failed rows excluded).
  std::array<std::optional<std::size_t>, 4> best{};
  train::MetricScale scale = train::MetricScale::Original;

  bool ok() const;
};

struct AblationOptions {
  std::size_t replicates = 1;  // runs per variant; metrics are median-aggregated
  std::size_t jobs = 1;        // concurrent runs
  RunOptions run;
};

/// Seed of replicate `r` of a spec; replicate 0 keeps the spec's own seed.
std::uint64_t replicate_seed(std::uint64_t spec_seed, std::size_t replicate);

/// Runs every spec (and replicate), collecting failures per row instead of
/// aborting. Specs must agree on target, dates and training settings (seeds
/// may differ); otherwise DataError. Completed runs are appended to `results`.
AblationTable run_ablation(std::span<const ExperimentSpec> specs, const data::AlignedFrame& data,
                           const AblationOptions& options = {}, std::vector<ExperimentResult>* results = nullptr);

/// Per-metric argmin over rows that have metrics.
std::array<std::optional<std::size_t>, 4> mark_minima(std::span<const AblationRow> rows);

/// `variant,mse,rmse,mae,mape,best,status` CSV.
std::string ablation_to_csv(const AblationTable& table);

/// Aligned text table in MSE, RMSE, MAE, MAPE column order; '*' marks the per-metric minimum.
std::string ablation_to_text(const AblationTable& table, const std::string& title);

/// Settings of an ablation study as read from a JSON file (see README).
struct AblationPlan {
  std::string data;  // frame CSV, resolved relative to the plan file by the caller
  std::string target;
  std::vector<std::string> variants{"Main", "+WTI", "+USD", "+Gold"};
  ExperimentSpec base;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  std::size_t jobs = 1;
};

AblationPlan ablation_plan_from_json(const nlohmann::json& j);

/// One spec per variant; each gets its own seed derived from (plan seed, variant name).
std::vector<ExperimentSpec> make_ablation_specs(const AblationPlan& plan);

}  // namespace oilcast::experiment
