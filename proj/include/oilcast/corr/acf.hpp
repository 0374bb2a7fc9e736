#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace oilcast::corr {

/// acf[k] is the Pearson correlation of the series with its k-step-ahead shift.
struct AcfReport {
  std::string series;
  std::vector<double> acf;

  std::size_t max_lag() const { return acf.empty() ? 0 : acf.size() - 1; }
};

/// Needs values.size() > max_lag + 1. acf[0] is exactly 1.
AcfReport autocorrelation(std::span<const double> values, std::size_t max_lag, std::string name = {});

/// Largest L with acf[k] >= threshold for every 1 <= k <= L; 1 when acf[1] already fails.
std::size_t select_lookback(const AcfReport& report, double threshold);

/// `lag,acf` CSV.
std::string acf_to_csv(const AcfReport& report);

}  // namespace oilcast::corr
