#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oilcast/data/frame.hpp"

namespace oilcast::data {

struct ColumnRange {
  double min = 0.0;
  double max = 0.0;

  bool degenerate() const { return !(min < max); }
  friend bool operator==(const ColumnRange&, const ColumnRange&) = default;
};

/// Per-column min-max ranges fitted on a training frame.
struct ScalerParams {
  std::vector<std::pair<std::string, ColumnRange>> columns;

  const ColumnRange& at(std::string_view column) const;
  std::vector<std::string> degenerate_columns() const;

  friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

/// Fits every column of `train`. Degenerate columns are recorded, not rejected;
/// scaling them is what fails.
ScalerParams fit_scaler(const AlignedFrame& train);

/// Maps each column to (x - min) / (max - min). Values outside the fitted range
/// extrapolate linearly. Throws DegenerateError listing degenerate columns.
AlignedFrame apply_scaler(const AlignedFrame& frame, const ScalerParams& params);

std::vector<double> scale_values(std::span<const double> values, std::string_view column,
                                 const ScalerParams& params);
std::vector<double> invert_scaler(std::span<const double> values, std::string_view column,
                                  const ScalerParams& params);

void to_json(nlohmann::json& j, const ScalerParams& params);
void from_json(const nlohmann::json& j, ScalerParams& params);

}  // namespace oilcast::data
