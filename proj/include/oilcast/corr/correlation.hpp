#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oilcast/data/frame.hpp"

namespace oilcast::corr {

/// Sample Pearson coefficient, clamped to [-1, 1].
///
/// Throws DataError on length mismatch or fewer than two points and
/// DegenerateError when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// As pearson(), but returns nullopt instead of throwing on constant input.
std::optional<double> try_pearson(std::span<const double> x, std::span<const double> y);

/// Symmetric matrix of pairwise Pearson coefficients with unit diagonal.
struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<double> values;  // row-major, labels.size() squared

  std::size_t size() const { return labels.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i * labels.size() + j]; }
};

CorrelationMatrix correlation_matrix(const data::AlignedFrame& frame, std::span<const std::string> columns);

/// `label,<labels...>` CSV with shortest round-trip decimals.
std::string matrix_to_csv(const CorrelationMatrix& matrix);

/// Consecutive non-overlapping chunks; a trailing partial chunk is dropped.
std::vector<std::vector<double>> discretize_windows(std::span<const double> values, std::size_t window_len);

/// Bin edges: [-1,-0.5), [-0.5,0), [0,0.5), [0.5,1]. 1.0 lands in the last bin.
struct Histogram {
  std::array<std::size_t, 4> counts{};
  std::array<double, 4> percents{};

  std::size_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

inline constexpr std::array<const char*, 4> kBinLabels{"[-1,-0.5)", "[-0.5,0)", "[0,0.5)", "[0.5,1]"};

/// Throws DataError for values outside [-1, 1] (or NaN).
Histogram bucket_histogram(std::span<const double> rs);

enum class VarianceForm { Population, Sample };

struct SummaryStats {
  double median = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double std_dev = 0.0;
};

/// Throws DataError on empty input (and on a single value in sample form).
SummaryStats summary_stats(std::span<const double> rs, VarianceForm form = VarianceForm::Population);

struct WindowedCorrelationReport {
  std::pair<std::string, std::string> pair;
  std::size_t window_len = 0;
  std::size_t total_windows = 0;
  std::vector<double> window_correlations;
  std::vector<std::size_t> window_indices;  // index of each retained window
  std::size_t skipped_windows = 0;          // windows where either chunk is constant
  Histogram histogram;
  std::optional<SummaryStats> stats;        // absent when every window was skipped
};

WindowedCorrelationReport windowed_correlations(std::span<const double> a, std::span<const double> b,
                                                std::size_t window_len,
                                                std::pair<std::string, std::string> names = {"a", "b"},
                                                VarianceForm form = VarianceForm::Population);

/// `pair,window_index,correlation` rows for every report.
std::string windows_to_csv(std::span<const WindowedCorrelationReport> reports);

/// One row per pair: Median, Mean, Variance, Standard deviation, retained, skipped.
std::string summary_to_csv(std::span<const WindowedCorrelationReport> reports);

/// Bin counts and percents per pair.
std::string histogram_to_csv(std::span<const WindowedCorrelationReport> reports);

}  // namespace oilcast::corr
