#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "oilcast/data/frame.hpp"
#include "oilcast/data/series.hpp"
#include "oilcast/date.hpp"
#include "oilcast/random.hpp"

namespace oilcast::testing {

inline Date day(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

/// Consecutive calendar days starting at `start`.
inline std::vector<Date> calendar(Date start, std::size_t n) {
  std::vector<Date> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(add_days(start, static_cast<int>(i)));
  return out;
}

/// Directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("oilcast-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

/// Valid bars with a random-walk close on consecutive days.
inline data::OhlcvSeries random_series(Rng& rng, const std::string& symbol, std::size_t n, Date start,
                                       bool volume = true) {
  std::vector<data::OhlcvBar> bars;
  double close = rng.uniform(10, 200);
  for (std::size_t i = 0; i < n; ++i) {
    data::OhlcvBar b;
    b.date = add_days(start, static_cast<int>(i));
    b.open = close * std::exp(0.01 * rng.normal());
    close *= std::exp(0.02 * rng.normal());
    b.close = close;
    b.high = std::max(b.open, b.close) * (1 + 0.01 * rng.uniform());
    b.low = std::min(b.open, b.close) * (1 - 0.01 * rng.uniform());
    if (volume) b.volume = std::floor(rng.uniform(0, 1e6));
    bars.push_back(b);
  }
  return data::make_series(symbol, std::move(bars));
}

/// Textbook two-pass Pearson coefficient.
inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oilcast::testing

#include <fstream>
#include <sstream>

namespace oilcast::testing {

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Compares against tests/golden/<name>. With OILCAST_UPDATE_GOLDEN set the file is rewritten instead.
inline std::string golden(const std::string& name, const std::string& actual) {
  const std::filesystem::path path = std::filesystem::path(OILCAST_GOLDEN_DIR) / name;
  if (std::getenv("OILCAST_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
    return actual;
  }
  return read_text(path);
}

inline std::filesystem::path source_path(const std::string& relative) {
  return std::filesystem::path(OILCAST_SOURCE_DIR) / relative;
}

}  // namespace oilcast::testing
