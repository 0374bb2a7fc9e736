#pragma once

#include <filesystem>
#include <string>

#include "oilcast/corr/correlation.hpp"

namespace oilcast::corr {

/// Heatmap of the matrix: lighter cells are more positive. Each cell shows the value to
/// two decimals and carries the exact value in its <title>. Output is deterministic.
std::string render_heatmap_svg(const CorrelationMatrix& matrix);

void export_heatmap(const CorrelationMatrix& matrix, const std::filesystem::path& path);

}  // namespace oilcast::corr
