#include "oilcast/data/supervised.hpp"

#include "oilcast/error.hpp"

namespace oilcast::data {

SupervisedTensors SupervisedTensors::slice(std::size_t begin, std::size_t end) const {
  const auto b = static_cast<std::ptrdiff_t>(begin);
  const auto e = static_cast<std::ptrdiff_t>(end);
  return SupervisedTensors{inputs.slice(begin, end), std::vector<double>(targets.begin() + b, targets.begin() + e),
                           std::vector<Date>(sample_dates.begin() + b, sample_dates.begin() + e)};
}

SupervisedTensors make_supervised_windows(const AlignedFrame& frame, std::span<const std::string> feature_columns,
                                          std::string_view target_column, std::size_t lookback) {
  if (lookback == 0) throw DataError("lookback must be positive");
  if (feature_columns.empty()) throw DataError("at least one feature column is required");
  if (lookback >= frame.rows())
    throw DataError("lookback " + std::to_string(lookback) + " needs more than " + std::to_string(frame.rows()) +
                    " dates");
  const auto target = frame.column(target_column);
  std::vector<std::span<const double>> features;
  for (const auto& name : feature_columns) features.push_back(frame.column(name));

  const std::size_t n = frame.rows() - lookback;
  SupervisedTensors out{Tensor3(n, lookback, features.size()), std::vector<double>(n), std::vector<Date>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < lookback; ++j) {
      for (std::size_t k = 0; k < features.size(); ++k) out.inputs(i, j, k) = features[k][i + j];
    }
    out.targets[i] = target[i + lookback];
    out.sample_dates[i] = frame.dates()[i + lookback];
  }
  return out;
}

}  // namespace oilcast::data
