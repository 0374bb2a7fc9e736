#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oilcast/data/frame.hpp"
#include "oilcast/tensor.hpp"

namespace oilcast::data {

/// Lookback windows and their one-step-ahead targets.
///
/// inputs(i, j, k) is feature k at frame row i + j; targets[i] is the target
/// column at row i + lookback, dated sample_dates[i].
struct SupervisedTensors {
  Tensor3 inputs;
  std::vector<double> targets;
  std::vector<Date> sample_dates;

  std::size_t samples() const { return targets.size(); }
  std::size_t lookback() const { return inputs.steps(); }
  std::size_t features() const { return inputs.features(); }

  /// Samples [begin, end).
  SupervisedTensors slice(std::size_t begin, std::size_t end) const;
};

SupervisedTensors make_supervised_windows(const AlignedFrame& frame,
                                          std::span<const std::string> feature_columns,
                                          std::string_view target_column, std::size_t lookback);

}  // namespace oilcast::data
