#include "oilcast/data/scaler.hpp"

#include <algorithm>

#include "oilcast/error.hpp"

namespace oilcast::data {

const ColumnRange& ScalerParams::at(std::string_view column) const {
  for (const auto& [name, range] : columns) {
    if (name == column) return range;
  }
  throw DataError("scaler has no column " + std::string(column));
}

std::vector<std::string> ScalerParams::degenerate_columns() const {
  std::vector<std::string> out;
  for (const auto& [name, range] : columns) {
    if (range.degenerate()) out.push_back(name);
  }
  return out;
}

ScalerParams fit_scaler(const AlignedFrame& train) {
  if (train.empty()) throw DataError("cannot fit scaler on an empty frame");
  ScalerParams params;
  for (const auto& [name, values] : train.columns()) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    params.columns.emplace_back(name, ColumnRange{*lo, *hi});
  }
  return params;
}

namespace {

const ColumnRange& usable_range(std::string_view column, const ScalerParams& params) {
  const auto& range = params.at(column);
  if (range.degenerate()) throw DegenerateError("degenerate column (min == max): " + std::string(column));
  return range;
}

}  // namespace

std::vector<double> scale_values(std::span<const double> values, std::string_view column, const ScalerParams& params) {
  const auto& r = usable_range(column, params);
  const double span = r.max - r.min;
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [&](double x) { return (x - r.min) / span; });
  return out;
}

std::vector<double> invert_scaler(std::span<const double> values, std::string_view column, const ScalerParams& params) {
  const auto& r = usable_range(column, params);
  const double span = r.max - r.min;
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [&](double s) { return s * span + r.min; });
  return out;
}

AlignedFrame apply_scaler(const AlignedFrame& frame, const ScalerParams& params) {
  std::vector<std::string> degenerate;
  for (const auto& [name, _] : frame.columns()) {
    if (params.at(name).degenerate()) degenerate.push_back(name);
  }
  if (!degenerate.empty()) {
    std::string list;
    for (const auto& name : degenerate) list += (list.empty() ? "" : ", ") + name;
    throw DegenerateError("degenerate columns (min == max): " + list);
  }
  std::vector<AlignedFrame::Column> cols;
  for (const auto& [name, values] : frame.columns()) cols.emplace_back(name, scale_values(values, name, params));
  return AlignedFrame(frame.dates(), std::move(cols));
}

void to_json(nlohmann::json& j, const ScalerParams& params) {
  j = nlohmann::json::object();
  j["kind"] = "min-max";
  auto& cols = j["columns"] = nlohmann::json::array();
  for (const auto& [name, range] : params.columns) {
    cols.push_back({{"name", name}, {"min", range.min}, {"max", range.max}});
  }
}

void from_json(const nlohmann::json& j, ScalerParams& params) {
  params.columns.clear();
  for (const auto& c : j.at("columns")) {
    params.columns.emplace_back(c.at("name").get<std::string>(),
                                ColumnRange{c.at("min").get<double>(), c.at("max").get<double>()});
  }
}

}  // namespace oilcast::data
