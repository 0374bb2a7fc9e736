#include "oilcast/train/metrics.hpp"

#include <cmath>

#include "oilcast/error.hpp"

namespace oilcast::train {

std::string to_string(MetricScale scale) { return scale == MetricScale::Original ? "original" : "normalized"; }

MetricsReport evaluate(std::span<const double> truth, std::span<const double> predictions) {
  if (truth.empty()) throw DataError("cannot evaluate an empty series");
  if (truth.size() != predictions.size())
    throw DataError("truth/prediction length mismatch: " + std::to_string(truth.size()) + " vs " +
                    std::to_string(predictions.size()));
  double sq = 0.0, abs = 0.0, pct = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0.0) throw DataError("MAPE undefined: true value is zero at index " + std::to_string(i));
    const double e = truth[i] - predictions[i];
    sq += e * e;
    abs += std::abs(e);
    pct += std::abs(e) / std::abs(truth[i]);
  }
  const double n = static_cast<double>(truth.size());
  MetricsReport m;
  m.mse = sq / n;
  m.rmse = std::sqrt(m.mse);
  m.mae = abs / n;
  m.mape = 100.0 * pct / n;
  return m;
}

nlohmann::json metrics_to_json(const MetricsReport& metrics, MetricScale scale) {
  return {{"scale", to_string(scale)},
          {"mse", metrics.mse},
          {"rmse", metrics.rmse},
          {"mae", metrics.mae},
          {"mape", metrics.mape}};
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
  return MetricsReport{j.at("mse").get<double>(), j.at("rmse").get<double>(), j.at("mae").get<double>(),
                       j.at("mape").get<double>()};
}

}  // namespace oilcast::train
