#pragma once

#include <span>
#include <string>

#include <json.hpp>

namespace oilcast::train {

enum class MetricScale { Original, Normalized };

std::string to_string(MetricScale scale);

struct MetricsReport {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double mape = 0.0;  // percent

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// MSE, RMSE, MAE and per-point MAPE (100/n sum |t - p| / |t|).
/// Throws DataError on empty/mismatched input or a zero true value (index reported).
MetricsReport evaluate(std::span<const double> truth, std::span<const double> predictions);

nlohmann::json metrics_to_json(const MetricsReport& metrics, MetricScale scale);
MetricsReport metrics_from_json(const nlohmann::json& j);

}  // namespace oilcast::train
