#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "oilcast/date.hpp"
#include "oilcast/experiment/runner.hpp"

namespace oilcast::experiment {

/// Line chart of real vs predicted prices over the test dates. Deterministic bytes.
std::string render_series_svg(std::string_view title, std::span<const Date> dates, std::span<const double> real,
                              std::span<const double> predicted);

std::string render_prediction_svg(const ExperimentResult& result);

/// Throws DataError on an empty series and Error if `path` cannot be written.
void render_prediction_plot(const ExperimentResult& result, const std::filesystem::path& path);

}  // namespace oilcast::experiment
