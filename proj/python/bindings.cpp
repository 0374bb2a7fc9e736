#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "oilcast/corr/acf.hpp"
#include "oilcast/corr/correlation.hpp"
#include "oilcast/data/frame.hpp"
#include "oilcast/data/series.hpp"
#include "oilcast/error.hpp"
#include "oilcast/experiment/runner.hpp"
#include "oilcast/experiment/spec.hpp"
#include "oilcast/experiment/synthetic.hpp"
#include "oilcast/date.hpp"
#include "oilcast/nn/gradient_check.hpp"
#include "oilcast/nn/lstm.hpp"
#include "oilcast/train/metrics.hpp"

namespace py = pybind11;
using namespace oilcast;

namespace {

corr::VarianceForm variance_form(const std::string& name) {
  if (name == "population") return corr::VarianceForm::Population;
  if (name == "sample") return corr::VarianceForm::Sample;
  throw DataError("variance must be 'population' or 'sample'");
}

py::dict stats_dict(const corr::SummaryStats& s) {
  py::dict d;
  d["median"] = s.median;
  d["mean"] = s.mean;
  d["variance"] = s.variance;
  d["std_dev"] = s.std_dev;
  return d;
}

py::dict histogram_dict(const corr::Histogram& h) {
  py::dict d;
  d["counts"] = std::vector<std::size_t>(h.counts.begin(), h.counts.end());
  d["percents"] = std::vector<double>(h.percents.begin(), h.percents.end());
  return d;
}

py::dict metrics_dict(const train::MetricsReport& m) {
  py::dict d;
  d["mse"] = m.mse;
  d["rmse"] = m.rmse;
  d["mae"] = m.mae;
  d["mape"] = m.mape;
  return d;
}

std::vector<std::string> date_strings(const std::vector<Date>& dates) {
  std::vector<std::string> out;
  out.reserve(dates.size());
  for (const auto& d : dates) out.push_back(format_date(d));
  return out;
}

py::dict frame_dict(const data::AlignedFrame& frame) {
  py::dict columns;
  for (const auto& [name, values] : frame.columns()) columns[py::str(name)] = values;
  py::dict d;
  d["dates"] = date_strings(frame.dates());
  d["columns"] = columns;
  return d;
}

data::AlignedFrame frame_from_columns(const std::vector<std::string>& dates,
                                      const std::vector<data::AlignedFrame::Column>& columns) {
  std::vector<Date> parsed;
  parsed.reserve(dates.size());
  for (const auto& d : dates) parsed.push_back(parse_date(d));
  return data::AlignedFrame(std::move(parsed), columns);
}

}  // namespace

PYBIND11_MODULE(_oilcast, m) {
  m.doc() = "Correlation analysis and LSTM forecasting for oil-sector prices";

  auto base = py::register_exception<Error>(m, "OilcastError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
  auto provider = py::register_exception<ProviderError>(m, "ProviderError", base.ptr());
  py::register_exception<RateLimitError>(m, "RateLimitError", provider.ptr());
  py::register_exception<PipelineError>(m, "PipelineError", base.ptr());

  // ---- data
  m.def(
      "parse_csv",
      [](const std::string& text, const std::string& symbol) {
        const auto s = data::parse_csv(std::string_view(text), symbol);
        py::dict d;
        d["symbol"] = s.symbol;
        std::vector<std::string> dates;
        std::vector<double> open, high, low, close;
        for (const auto& b : s.bars) {
          dates.push_back(format_date(b.date));
          open.push_back(b.open);
          high.push_back(b.high);
          low.push_back(b.low);
          close.push_back(b.close);
        }
        d["dates"] = dates;
        d["open"] = open;
        d["high"] = high;
        d["low"] = low;
        d["close"] = close;
        return d;
      },
      py::arg("text"), py::arg("symbol"), "Parse date,open,high,low,close[,volume] CSV text.");
  m.def(
      "align_files",
      [](const std::vector<std::filesystem::path>& paths) {
        std::vector<data::OhlcvSeries> series;
        for (const auto& p : paths) series.push_back(data::read_series_file(p));
        return frame_dict(data::align(series));
      },
      py::arg("paths"), "Inner-join per-instrument CSV files on date.");
  m.def(
      "read_frame", [](const std::filesystem::path& path) { return frame_dict(data::read_frame_file(path)); },
      py::arg("path"));
  m.def(
      "synthetic_market",
      [](std::size_t days, std::uint64_t seed, double holiday_rate) {
        experiment::SyntheticMarketOptions o;
        o.days = days;
        o.seed = seed;
        o.holiday_rate = holiday_rate;
        return frame_dict(data::align(experiment::make_synthetic_market(o)));
      },
      py::arg("days") = 700, py::arg("seed") = 2023, py::arg("holiday_rate") = 0.02);

  // ---- correlation
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return corr::pearson(x, y); },
        py::arg("x"), py::arg("y"));
  m.def(
      "correlation_matrix",
      [](const std::vector<std::string>& dates, const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
        const auto frame = frame_from_columns(dates, columns);
        const auto names = frame.column_names();
        const auto matrix = corr::correlation_matrix(frame, names);
        std::vector<std::vector<double>> rows(matrix.size(), std::vector<double>(matrix.size()));
        for (std::size_t i = 0; i < matrix.size(); ++i)
          for (std::size_t j = 0; j < matrix.size(); ++j) rows[i][j] = matrix(i, j);
        return py::make_tuple(matrix.labels, rows);
      },
      py::arg("dates"), py::arg("columns"), "Returns (labels, rows) for [(name, values), ...] columns.");
  m.def(
      "windowed_correlations",
      [](const std::vector<double>& a, const std::vector<double>& b, std::size_t window_len,
         const std::string& variance) {
        const auto r = corr::windowed_correlations(a, b, window_len, {"a", "b"}, variance_form(variance));
        py::dict d;
        d["window_len"] = r.window_len;
        d["total_windows"] = r.total_windows;
        d["skipped_windows"] = r.skipped_windows;
        d["correlations"] = r.window_correlations;
        d["window_indices"] = r.window_indices;
        d["histogram"] = histogram_dict(r.histogram);
        d["stats"] = r.stats ? py::object(stats_dict(*r.stats)) : py::none();
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("window_len") = 40, py::arg("variance") = "population");
  m.def(
      "bucket_histogram", [](const std::vector<double>& rs) { return histogram_dict(corr::bucket_histogram(rs)); },
      py::arg("rs"));
  m.def(
      "summary_stats",
      [](const std::vector<double>& rs, const std::string& variance) {
        return stats_dict(corr::summary_stats(rs, variance_form(variance)));
      },
      py::arg("rs"), py::arg("variance") = "population");
  m.def(
      "autocorrelation",
      [](const std::vector<double>& values, std::size_t max_lag) { return corr::autocorrelation(values, max_lag).acf; },
      py::arg("values"), py::arg("max_lag"));
  m.def(
      "select_lookback",
      [](const std::vector<double>& acf, double threshold) { return corr::select_lookback({"", acf}, threshold); },
      py::arg("acf"), py::arg("threshold") = 0.5);

  // ---- network
  m.def(
      "param_count",
      [](std::size_t input_dim, std::size_t hidden_dim, std::size_t dense_dim) {
        return nn::param_count({input_dim, hidden_dim, 1, dense_dim, 0.0});
      },
      py::arg("input_dim") = 6, py::arg("hidden_dim") = 50, py::arg("dense_dim") = 64);
  m.def(
      "gradient_check",
      [](std::size_t input_dim, std::size_t hidden_dim, std::size_t lookback, std::size_t dense_dim,
         double dropout_rate, std::uint64_t seed) {
        const auto r = nn::gradient_check({input_dim, hidden_dim, lookback, dense_dim, dropout_rate}, seed);
        py::dict d;
        d["max_relative_error"] = r.max_relative_error;
        d["worst_block"] = r.worst_block;
        d["parameters_checked"] = r.parameters_checked;
        return d;
      },
      py::arg("input_dim") = 2, py::arg("hidden_dim") = 3, py::arg("lookback") = 4, py::arg("dense_dim") = 2,
      py::arg("dropout_rate") = 0.0, py::arg("seed") = 0);

  // ---- evaluation and experiments
  m.def(
      "evaluate",
      [](const std::vector<double>& truth, const std::vector<double>& predicted) {
        return metrics_dict(train::evaluate(truth, predicted));
      },
      py::arg("truth"), py::arg("predicted"));
  m.def(
      "run_experiment",
      [](const std::string& spec_json, const std::filesystem::path& frame_path,
         std::optional<std::filesystem::path> runs_root) {
        const auto spec = experiment::spec_from_json(nlohmann::json::parse(spec_json));
        const auto frame = data::read_frame_file(frame_path);
        experiment::RunOptions options;
        options.runs_root = std::move(runs_root);
        experiment::ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = experiment::run_experiment(spec, frame, options);
        }
        py::dict d;
        d["hash"] = r.hash;
        d["seed"] = r.seed;
        d["features"] = r.features.features;
        d["target"] = r.features.target;
        d["metrics"] = metrics_dict(r.metrics);
        d["dates"] = date_strings(r.dates);
        d["truth"] = r.truth;
        d["predicted"] = r.predicted;
        d["train_loss"] = r.history.train_loss;
        d["val_loss"] = r.history.val_loss;
        d["run_dir"] = r.run_dir ? py::object(py::str(r.run_dir->string())) : py::none();
        return d;
      },
      py::arg("spec_json"), py::arg("frame_path"), py::arg("runs_root") = py::none());
}
