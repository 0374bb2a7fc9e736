#include "oilcast/cli/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>

#include <json.hpp>

#include "oilcast/corr/acf.hpp"
#include "oilcast/corr/correlation.hpp"
#include "oilcast/corr/heatmap.hpp"
#include "oilcast/data/frame.hpp"
#include "oilcast/data/series.hpp"
#include "oilcast/error.hpp"
#include "oilcast/experiment/ablation.hpp"
#include "oilcast/experiment/plot.hpp"
#include "oilcast/experiment/runner.hpp"
#include "oilcast/experiment/synthetic.hpp"
#include "oilcast/format.hpp"
#include "oilcast/market/alpha_vantage.hpp"
#include "oilcast/svg.hpp"

namespace oilcast::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> symbol_set(const std::string& name) {
  if (name == "study") return {"FP.PA", "CNE.L", "BP.L", "SLB.PA", "WTI", "GOLD", "USD"};
  throw DataError("unknown symbol set '" + name + "' (known: study)");
}

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool verbose = false;
};

struct FetchArgs {
  std::vector<std::string> symbols;
  std::string set;
  std::string base_url = "https://www.alphavantage.co";
  std::string api_key;
  long long interval_ms = 12000;
  std::string cache_dir;
  std::string function = "TIME_SERIES_DAILY";
  std::string outputsize = "full";
  bool refresh = false;
};

struct CorrArgs {
  std::string frame;
  std::vector<std::string> columns;
  bool windowed = false;
  std::size_t window_len = 40;
  std::string target;
  std::string variance = "population";
};

struct AcfArgs {
  std::string column;
  std::string frame;
  std::size_t max_lag = 60;
  bool suggest = false;
  double threshold = 0.5;
};

struct AblateArgs {
  std::string plan;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> jobs;
  std::string title;
};

struct SynthArgs {
  std::size_t days = 700;
  double holiday_rate = 0.02;
};

std::string env_api_key() {
  for (const char* name : {"OILCAST_API_KEY", "ALPHAVANTAGE_API_KEY"}) {
    if (const char* v = std::getenv(name); v && *v) return v;
  }
  return {};
}

json read_json_file(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

fs::path resolve_near(const fs::path& anchor_file, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? p : anchor_file.parent_path() / p;
}

std::string config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/// Fills options that were not given on the command line from the config file.
void apply_config(CLI::App& app, CLI::App* sub, const json& config) {
  if (!config.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (key == "config") continue;
    const std::string flag = "--" + key;
    bool known = app.get_option_no_throw(flag) != nullptr;
    for (const auto* other : app.get_subcommands({})) known = known || other->get_option_no_throw(flag) != nullptr;
    if (!known) throw UsageError("config key '" + key + "' is not a known flag");

    CLI::Option* opt = app.get_option_no_throw(flag);
    if (!opt && sub) opt = sub->get_option_no_throw(flag);
    if (!opt || opt->count() > 0) continue;  // other subcommand's key, or overridden by a flag
    if (value.is_boolean() && !value.get<bool>()) continue;
    if (value.is_array()) {
      std::vector<std::string> items;
      for (const auto& item : value) items.push_back(config_value(item));
      opt->add_result(items);
    } else {
      opt->add_result(config_value(value));
    }
    opt->run_callback();
  }
}

std::mutex log_mutex;

train::EpochCallback progress(std::ostream& err, bool verbose, std::string label) {
  if (!verbose) return {};
  return [&err, label = std::move(label)](std::size_t epoch, double train_loss, double val_loss) {
    std::lock_guard lock(log_mutex);
    err << label << " epoch " << epoch << " train " << format_real(train_loss) << " val " << format_real(val_loss)
        << "\n";
  };
}

std::vector<std::string> default_corr_columns(const data::AlignedFrame& frame) {
  std::vector<std::string> closes;
  for (const auto& name : frame.column_names()) {
    if (name.size() > 6 && name.ends_with(".close")) closes.push_back(name);
  }
  return closes.empty() ? frame.column_names() : closes;
}

int cmd_fetch(const Globals& g, FetchArgs a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> symbols = a.symbols;
  if (!a.set.empty()) {
    for (auto& s : symbol_set(a.set)) symbols.push_back(std::move(s));
  }
  if (symbols.empty()) throw UsageError("fetch needs at least one symbol (or --set)");
  if (a.api_key.empty()) a.api_key = env_api_key();

  const fs::path out_dir(g.out_dir);
  market::ProviderConfig cfg;
  cfg.base_url = a.base_url;
  cfg.api_key = a.api_key;
  cfg.request_interval = std::chrono::milliseconds(a.interval_ms);
  cfg.cache_dir = a.cache_dir.empty() ? out_dir / "cache" : fs::path(a.cache_dir);
  cfg.function = a.function;
  cfg.outputsize = a.outputsize;
  market::AlphaVantageClient client(cfg);

  std::vector<data::OhlcvSeries> all;
  for (const auto& symbol : symbols) {
    auto series = client.fetch_daily(symbol, a.refresh ? market::CachePolicy::Refresh : market::CachePolicy::PreferCache);
    const fs::path path = out_dir / (market::sanitize_symbol(symbol) + ".csv");
    data::write_series_file(path, series);
    out << symbol << ": " << series.size() << " bars";
    if (!series.empty())
      out << " (" << format_date(series.bars.front().date) << " .. " << format_date(series.bars.back().date) << ")";
    out << " -> " << path.string() << "\n";
    all.push_back(std::move(series));
  }
  const auto frame = data::align(all);
  data::write_frame_file(out_dir / "frame.csv", frame);
  out << "aligned " << frame.rows() << " rows x " << frame.column_names().size() << " columns -> "
      << (out_dir / "frame.csv").string() << "\n";
  (void)err;
  return kExitOk;
}

int cmd_corr(const Globals& g, const CorrArgs& a, std::ostream& out) {
  const auto frame = data::read_frame_file(a.frame);
  const auto columns = a.columns.empty() ? default_corr_columns(frame) : a.columns;
  const fs::path out_dir(g.out_dir);

  const auto matrix = corr::correlation_matrix(frame, columns);
  write_file_atomic(out_dir / "correlation_matrix.csv", corr::matrix_to_csv(matrix));
  corr::export_heatmap(matrix, out_dir / "heatmap.svg");
  out << "correlation matrix (" << columns.size() << " columns) -> " << (out_dir / "correlation_matrix.csv").string()
      << ", " << (out_dir / "heatmap.svg").string() << "\n";

  if (!a.windowed) return kExitOk;
  if (a.window_len < 2) throw UsageError("--window-len must be at least 2");
  corr::VarianceForm form;
  if (a.variance == "population") form = corr::VarianceForm::Population;
  else if (a.variance == "sample") form = corr::VarianceForm::Sample;
  else throw UsageError("--variance must be 'population' or 'sample'");

  const std::string target = a.target.empty() ? columns.front() : a.target;
  std::vector<corr::WindowedCorrelationReport> reports;
  for (const auto& other : columns) {
    if (other == target) continue;
    reports.push_back(corr::windowed_correlations(frame.column(target), frame.column(other), a.window_len,
                                                  {target, other}, form));
  }
  if (reports.empty()) throw UsageError("windowed mode needs at least one column besides " + target);
  write_file_atomic(out_dir / "windowed_correlations.csv", corr::windows_to_csv(reports));
  write_file_atomic(out_dir / "windowed_summary.csv", corr::summary_to_csv(reports));
  write_file_atomic(out_dir / "windowed_histogram.csv", corr::histogram_to_csv(reports));
  for (const auto& r : reports) {
    out << r.pair.first << " ~ " << r.pair.second << ": " << r.total_windows << " windows of " << r.window_len
        << ", skipped " << r.skipped_windows;
    if (r.stats)
      out << ", mean " << format_fixed(r.stats->mean, 4) << ", median " << format_fixed(r.stats->median, 4);
    out << "\n";
  }
  return kExitOk;
}

int cmd_acf(const Globals& g, const AcfArgs& a, std::ostream& out) {
  if (a.frame.empty()) throw UsageError("acf needs --frame");
  const auto frame = data::read_frame_file(a.frame);
  const auto report = corr::autocorrelation(frame.column(a.column), a.max_lag, a.column);
  const fs::path out_dir(g.out_dir);
  write_file_atomic(out_dir / "acf.csv", corr::acf_to_csv(report));
  out << "acf of " << a.column << " up to lag " << a.max_lag << " -> " << (out_dir / "acf.csv").string() << "\n";
  if (!a.suggest) return kExitOk;
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) throw UsageError("--threshold must lie in (0, 1)");
  const std::size_t lookback = corr::select_lookback(report, a.threshold);
  const json doc{{"series", report.series},
                 {"max_lag", report.max_lag()},
                 {"threshold", a.threshold},
                 {"suggested_lookback", lookback},
                 {"acf", report.acf}};
  write_file_atomic(out_dir / "acf_report.json", doc.dump(2) + "\n");
  out << "suggested lookback: " << lookback << " (acf >= " << format_real(a.threshold) << " through lag " << lookback
      << ")\n";
  return kExitOk;
}

struct LoadedSpec {
  experiment::ExperimentSpec spec;
  data::AlignedFrame frame;
};

LoadedSpec load_spec(const fs::path& path, const Globals& g) {
  const json doc = read_json_file(path);
  if (!doc.contains("data") || !doc["data"].is_string()) throw ParseError(path.string() + ": missing \"data\"");
  LoadedSpec loaded{experiment::spec_from_json(doc),
                    data::read_frame_file(resolve_near(path, doc["data"].get<std::string>()))};
  if (g.seed) loaded.spec.train.seed = *g.seed;
  return loaded;
}

void print_metrics(std::ostream& out, const train::MetricsReport& m, train::MetricScale scale) {
  out << "MSE " << format_fixed(m.mse, 5) << "  RMSE " << format_fixed(m.rmse, 5) << "  MAE " << format_fixed(m.mae, 5)
      << "  MAPE " << format_fixed(m.mape, 5) << "  (" << train::to_string(scale) << " scale)\n";
}

int cmd_train(const Globals& g, const std::string& spec_path, std::ostream& out, std::ostream& err) {
  auto [spec, frame] = load_spec(spec_path, g);
  experiment::RunOptions options;
  options.runs_root = fs::path(g.out_dir) / "runs";
  options.on_epoch = progress(err, g.verbose, spec.variant);
  const auto result = experiment::run_experiment(spec, frame, options);
  out << "run " << result.hash << " -> " << result.run_dir->string() << "\n";
  print_metrics(out, result.metrics, result.scale);
  return kExitOk;
}

std::string file_safe(std::string_view name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  if (!name.empty() && name.front() == '+') out = "plus_" + out.substr(1);
  return out;
}

int cmd_ablate(const Globals& g, const AblateArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path plan_path(a.plan);
  auto plan = experiment::ablation_plan_from_json(read_json_file(plan_path));
  if (g.seed) plan.seed = *g.seed;
  if (a.replicates) plan.replicates = *a.replicates;
  if (a.jobs) plan.jobs = *a.jobs;
  const auto frame = data::read_frame_file(resolve_near(plan_path, plan.data));
  const auto specs = experiment::make_ablation_specs(plan);

  const fs::path out_dir(g.out_dir);
  experiment::AblationOptions options;
  options.replicates = plan.replicates;
  options.jobs = plan.jobs;
  options.run.runs_root = out_dir / "runs";
  options.run.on_epoch = progress(err, g.verbose, plan.target);
  std::vector<experiment::ExperimentResult> results;
  const auto table = experiment::run_ablation(specs, frame, options, &results);

  const std::string title = a.title.empty() ? "Experiment Result For " + plan.target + " Shares" : a.title;
  const std::string text = experiment::ablation_to_text(table, title);
  write_file_atomic(out_dir / "ablation.csv", experiment::ablation_to_csv(table));
  write_file_atomic(out_dir / "ablation.txt", text);
  for (const auto& spec : specs) {
    for (const auto& r : results) {
      if (r.spec.variant == spec.variant && r.seed == spec.train.seed)
        experiment::render_prediction_plot(r, out_dir / "plots" / (file_safe(spec.variant) + ".svg"));
    }
  }
  out << text;
  if (!table.ok()) {
    err << "error: " << std::count_if(table.rows.begin(), table.rows.end(), [](const auto& r) { return !r.metrics; })
        << " variant(s) failed\n";
    return kExitPipeline;
  }
  return kExitOk;
}

int cmd_report(const std::string& run_dir, std::ostream& out) {
  const auto run = experiment::load_run(run_dir);
  const auto& spec = run.spec.at("spec");
  out << "run " << run.spec.value("hash", "?") << " (" << run_dir << ")\n";
  out << "target " << spec.at("target").get<std::string>() << ", variant " << spec.at("variant").get<std::string>()
      << ", seed " << run.spec.value("seed", std::uint64_t{0}) << "\n";
  std::string features;
  for (const auto& f : run.spec.at("features")) features += (features.empty() ? "" : ", ") + f.get<std::string>();
  out << "features " << features << "\n";
  out << "test window " << spec.at("test_first").get<std::string>() << " .. " << spec.at("test_last").get<std::string>()
      << ", " << run.predictions << " predictions\n";
  if (!run.history.train_loss.empty()) {
    out << "epochs " << run.history.train_loss.size() << ", final train loss "
        << format_real(run.history.train_loss.back()) << ", final val loss "
        << format_real(run.history.val_loss.back()) << "\n";
  }
  const auto metrics = train::metrics_from_json(run.metrics);
  print_metrics(out, metrics,
                run.metrics.value("scale", "original") == "normalized" ? train::MetricScale::Normalized
                                                                      : train::MetricScale::Original);
  return kExitOk;
}

int cmd_synth(const Globals& g, const SynthArgs& a, std::ostream& out) {
  experiment::SyntheticMarketOptions options;
  options.days = a.days;
  options.holiday_rate = a.holiday_rate;
  if (g.seed) options.seed = *g.seed;
  const auto market = experiment::make_synthetic_market(options);
  const fs::path out_dir(g.out_dir);
  for (const auto& s : market) data::write_series_file(out_dir / (s.symbol + ".csv"), s);
  const auto frame = data::align(market);
  data::write_frame_file(out_dir / "frame.csv", frame);
  out << "wrote " << market.size() << " series and an aligned frame of " << frame.rows() << " rows to "
      << out_dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correlation analysis and LSTM feature ablation for oil-company stocks", "oilcast"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed_value = 0;
  app.add_option("--config", g.config, "JSON file whose keys are flag names");
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the run/plan/generator seed");
  app.add_option("--out-dir", g.out_dir, "Directory for outputs")->capture_default_str();
  app.add_flag("-v,--verbose", g.verbose, "Print per-epoch losses to stderr");

  FetchArgs fetch;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download daily bars (cache first) and align them");
  fetch_cmd->add_option("symbols", fetch.symbols, "Tickers");
  fetch_cmd->add_option("--set", fetch.set, "Named symbol set (study)");
  fetch_cmd->add_option("--base-url", fetch.base_url, "Provider origin, optionally with a path prefix")->capture_default_str();
  fetch_cmd->add_option("--api-key", fetch.api_key, "Provider key (else OILCAST_API_KEY or ALPHAVANTAGE_API_KEY)");
  fetch_cmd->add_option("--interval-ms", fetch.interval_ms, "Minimum milliseconds between requests")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fetch_cmd->add_option("--cache-dir", fetch.cache_dir, "Cache directory (default <out-dir>/cache)");
  fetch_cmd->add_option("--function", fetch.function, "Provider function")->capture_default_str();
  fetch_cmd->add_option("--outputsize", fetch.outputsize, "compact or full")->capture_default_str();
  fetch_cmd->add_flag("--refresh", fetch.refresh, "Download even when cached");

  CorrArgs corr_args;
  auto* corr_cmd = app.add_subcommand("corr", "Correlation matrix, heatmap and windowed correlations");
  corr_cmd->add_option("frame", corr_args.frame, "Aligned frame CSV")->required();
  corr_cmd->add_option("--columns", corr_args.columns, "Columns to correlate (default: every *.close)")->delimiter(',');
  corr_cmd->add_flag("--windowed", corr_args.windowed, "Also compute per-window correlations");
  corr_cmd->add_option("--window-len", corr_args.window_len, "Window length in rows")->capture_default_str();
  corr_cmd->add_option("--target", corr_args.target, "Column paired with every other column (default: first)");
  corr_cmd->add_option("--variance", corr_args.variance, "population or sample")->capture_default_str();

  AcfArgs acf;
  auto* acf_cmd = app.add_subcommand("acf", "Autocorrelation and lookback suggestion");
  acf_cmd->add_option("column", acf.column, "Frame column")->required();
  acf_cmd->add_option("--frame", acf.frame, "Aligned frame CSV");
  acf_cmd->add_option("--max-lag", acf.max_lag, "Largest lag")->check(CLI::PositiveNumber)->capture_default_str();
  acf_cmd->add_flag("--suggest", acf.suggest, "Suggest a lookback from the ACF");
  acf_cmd->add_option("--threshold", acf.threshold, "ACF threshold for --suggest")->capture_default_str();

  std::string spec_path;
  auto* train_cmd = app.add_subcommand("train", "Train and evaluate one experiment spec");
  train_cmd->add_option("spec", spec_path, "Experiment spec JSON")->required();

  AblateArgs ablate;
  auto* ablate_cmd = app.add_subcommand("ablate", "Run a feature ablation study");
  ablate_cmd->add_option("plan", ablate.plan, "Ablation plan JSON")->required();
  ablate_cmd->add_option("--replicates", ablate.replicates, "Seeds per variant (median-aggregated)");
  ablate_cmd->add_option("--jobs", ablate.jobs, "Concurrent runs");
  ablate_cmd->add_option("--title", ablate.title, "Table title");

  std::string run_dir;
  auto* report_cmd = app.add_subcommand("report", "Summarize a persisted run");
  report_cmd->add_option("run", run_dir, "Run directory")->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write the deterministic synthetic market");
  synth_cmd->add_option("--days", synth.days, "Weekdays to generate")->check(CLI::PositiveNumber)->capture_default_str();
  synth_cmd->add_option("--holiday-rate", synth.holiday_rate, "Fraction of days each series skips")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    if (!g.config.empty()) apply_config(app, sub, read_json_file(g.config));
    if (seed_opt->count() > 0) g.seed = seed_value;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPipeline;
  }

  try {
    std::error_code ec;
    fs::create_directories(g.out_dir, ec);
    if (ec) throw Error("cannot create " + g.out_dir + ": " + ec.message());
    if (fetch_cmd->parsed()) return cmd_fetch(g, fetch, out, err);
    if (corr_cmd->parsed()) return cmd_corr(g, corr_args, out);
    if (acf_cmd->parsed()) return cmd_acf(g, acf, out);
    if (train_cmd->parsed()) return cmd_train(g, spec_path, out, err);
    if (ablate_cmd->parsed()) return cmd_ablate(g, ablate, out, err);
    if (report_cmd->parsed()) return cmd_report(run_dir, out);
    if (synth_cmd->parsed()) return cmd_synth(g, synth, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    const std::string key = fetch_cmd->parsed() ? (fetch.api_key.empty() ? env_api_key() : fetch.api_key) : "";
    err << "error: " << market::redact(e.what(), key) << "\n";
    return kExitPipeline;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace oilcast::cli
