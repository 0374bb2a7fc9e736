#include "oilcast/corr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oilcast/error.hpp"
#include "oilcast/format.hpp"

namespace oilcast::corr {

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DataError("length mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.size() < 2) throw DataError("pearson needs at least two points");
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double pearson_unchecked(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

std::optional<double> try_pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (is_constant(x) || is_constant(y)) return std::nullopt;
  return pearson_unchecked(x, y);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (is_constant(x)) throw DegenerateError("pearson undefined: first input is constant");
  if (is_constant(y)) throw DegenerateError("pearson undefined: second input is constant");
  return pearson_unchecked(x, y);
}

CorrelationMatrix correlation_matrix(const data::AlignedFrame& frame, std::span<const std::string> columns) {
  if (columns.size() < 2) throw DataError("correlation matrix needs at least two columns");
  std::vector<std::span<const double>> cols;
  for (const auto& name : columns) {
    cols.push_back(frame.column(name));
    if (cols.back().size() < 2) throw DataError("column " + name + " has fewer than two values");
    if (is_constant(cols.back())) throw DegenerateError("constant column: " + name);
  }
  const std::size_t n = columns.size();
  CorrelationMatrix m{std::vector<std::string>(columns.begin(), columns.end()), std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    m.values[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = pearson_unchecked(cols[i], cols[j]);
      m.values[i * n + j] = r;
      m.values[j * n + i] = r;
    }
  }
  return m;
}

std::string matrix_to_csv(const CorrelationMatrix& matrix) {
  std::string out = "label";
  for (const auto& l : matrix.labels) out += "," + l;
  out += '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += matrix.labels[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) out += "," + format_real(matrix(i, j));
    out += '\n';
  }
  return out;
}

std::vector<std::vector<double>> discretize_windows(std::span<const double> values, std::size_t window_len) {
  if (window_len < 2) throw DataError("window length must be at least 2");
  std::vector<std::vector<double>> windows;
  for (std::size_t start = 0; start + window_len <= values.size(); start += window_len) {
    const auto chunk = values.subspan(start, window_len);
    windows.emplace_back(chunk.begin(), chunk.end());
  }
  return windows;
}

Histogram bucket_histogram(std::span<const double> rs) {
  Histogram h;
  for (double r : rs) {
    if (!(r >= -1.0 && r <= 1.0)) throw DataError("correlation outside [-1, 1]: " + format_real(r));
    const std::size_t bin = r < -0.5 ? 0 : r < 0.0 ? 1 : r < 0.5 ? 2 : 3;
    ++h.counts[bin];
  }
  if (!rs.empty()) {
    for (std::size_t b = 0; b < 4; ++b)
      h.percents[b] = 100.0 * static_cast<double>(h.counts[b]) / static_cast<double>(rs.size());
  }
  return h;
}

SummaryStats summary_stats(std::span<const double> rs, VarianceForm form) {
  if (rs.empty()) throw DataError("summary statistics of an empty vector");
  if (form == VarianceForm::Sample && rs.size() < 2) throw DataError("sample variance needs at least two values");
  std::vector<double> sorted(rs.begin(), rs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  SummaryStats s;
  s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.mean = mean(rs);
  double ss = 0.0;
  for (double r : rs) ss += (r - s.mean) * (r - s.mean);
  s.variance = ss / static_cast<double>(form == VarianceForm::Population ? n : n - 1);
  s.std_dev = std::sqrt(s.variance);
  return s;
}

WindowedCorrelationReport windowed_correlations(std::span<const double> a, std::span<const double> b,
                                                std::size_t window_len, std::pair<std::string, std::string> names,
                                                VarianceForm form) {
  if (a.size() != b.size())
    throw DataError("length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  if (window_len < 2) throw DataError("window length must be at least 2");

  WindowedCorrelationReport report;
  report.pair = std::move(names);
  report.window_len = window_len;
  report.total_windows = a.size() / window_len;
  for (std::size_t w = 0; w < report.total_windows; ++w) {
    const auto r = try_pearson(a.subspan(w * window_len, window_len), b.subspan(w * window_len, window_len));
    if (!r) {
      ++report.skipped_windows;
      continue;
    }
    report.window_correlations.push_back(*r);
    report.window_indices.push_back(w);
  }
  report.histogram = bucket_histogram(report.window_correlations);
  if (!report.window_correlations.empty()) report.stats = summary_stats(report.window_correlations, form);
  return report;
}

namespace {

std::string pair_label(const WindowedCorrelationReport& r) { return r.pair.first + "-" + r.pair.second; }

}  // namespace

std::string windows_to_csv(std::span<const WindowedCorrelationReport> reports) {
  std::string out = "pair,window_index,correlation\n";
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.window_correlations.size(); ++k)
      out += pair_label(r) + "," + std::to_string(r.window_indices[k]) + "," + format_real(r.window_correlations[k]) + "\n";
  }
  return out;
}

std::string summary_to_csv(std::span<const WindowedCorrelationReport> reports) {
  std::string out = "pair,median,mean,variance,std_dev,retained_windows,skipped_windows\n";
  for (const auto& r : reports) {
    out += pair_label(r);
    if (r.stats) {
      for (double v : {r.stats->median, r.stats->mean, r.stats->variance, r.stats->std_dev}) out += "," + format_real(v);
    } else {
      out += ",,,,";
    }
    out += "," + std::to_string(r.window_correlations.size()) + "," + std::to_string(r.skipped_windows) + "\n";
  }
  return out;
}

std::string histogram_to_csv(std::span<const WindowedCorrelationReport> reports) {
  std::string out = "pair,bin,count,percent\n";
  for (const auto& r : reports) {
    for (std::size_t b = 0; b < 4; ++b) {
      out += pair_label(r) + "," + kBinLabels[b] + "," + std::to_string(r.histogram.counts[b]) + "," +
             format_real(r.histogram.percents[b]) + "\n";
    }
  }
  return out;
}

}  // namespace oilcast::corr
