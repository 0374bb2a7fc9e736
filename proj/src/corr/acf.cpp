#include "oilcast/corr/acf.hpp"

#include <algorithm>

#include "oilcast/corr/correlation.hpp"
#include "oilcast/error.hpp"
#include "oilcast/format.hpp"

namespace oilcast::corr {

AcfReport autocorrelation(std::span<const double> values, std::size_t max_lag, std::string name) {
  if (max_lag == 0) throw DataError("max_lag must be positive");
  if (values.size() <= max_lag + 1)
    throw DataError("max_lag " + std::to_string(max_lag) + " too large for a series of " +
                    std::to_string(values.size()) + " points");
  AcfReport report{std::move(name), std::vector<double>(max_lag + 1)};
  report.acf[0] = 1.0;
  const std::size_t n = values.size();
  for (std::size_t k = 1; k <= max_lag; ++k) report.acf[k] = pearson(values.first(n - k), values.subspan(k));
  return report;
}

std::size_t select_lookback(const AcfReport& report, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw DataError("threshold must lie in (0, 1)");
  std::size_t lag = 0;
  while (lag + 1 < report.acf.size() && report.acf[lag + 1] >= threshold) ++lag;
  return std::max<std::size_t>(lag, 1);
}

std::string acf_to_csv(const AcfReport& report) {
  std::string out = "lag,acf\n";
  for (std::size_t k = 0; k < report.acf.size(); ++k) out += std::to_string(k) + "," + format_real(report.acf[k]) + "\n";
  return out;
}

}  // namespace oilcast::corr
