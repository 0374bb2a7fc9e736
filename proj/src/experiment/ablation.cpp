#include "oilcast/experiment/ablation.hpp"

#include <algorithm>
#include <future>

#include "oilcast/error.hpp"
#include "oilcast/format.hpp"
#include "oilcast/random.hpp"

namespace oilcast::experiment {

bool AblationTable::ok() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const AblationRow& r) { return r.metrics.has_value(); });
}

std::uint64_t replicate_seed(std::uint64_t spec_seed, std::size_t replicate) {
  return replicate == 0 ? spec_seed : derive_seed(spec_seed, "replicate", replicate);
}

namespace {

void check_comparable(std::span<const ExperimentSpec> specs) {
  if (specs.empty()) throw DataError("ablation needs at least one spec");
  const auto& a = specs.front();
  for (const auto& b : specs.subspan(1)) {
    const bool same = a.target == b.target && a.train_last == b.train_last && a.test_first == b.test_first &&
                      a.test_last == b.test_last && a.train.learning_rate == b.train.learning_rate &&
                      a.train.epochs == b.train.epochs && a.train.batch_size == b.train.batch_size &&
                      a.train.validation_fraction == b.train.validation_fraction && a.train.shuffle == b.train.shuffle &&
                      a.lstm.hidden_dim == b.lstm.hidden_dim && a.lstm.dense_dim == b.lstm.dense_dim &&
                      a.lstm.lookback == b.lstm.lookback && a.lstm.dropout_rate == b.lstm.dropout_rate;
    if (!same) throw DataError("ablation specs must differ only in variant (found a mismatch in " + b.variant + ")");
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Job {
  std::size_t row;
  ExperimentSpec spec;
};

struct JobOutcome {
  std::optional<ExperimentResult> result;
  std::string error;
};

JobOutcome run_job(const Job& job, const data::AlignedFrame& data, const RunOptions& options) {
  try {
    return {run_experiment(job.spec, data, options), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

}  // namespace

AblationTable run_ablation(std::span<const ExperimentSpec> specs, const data::AlignedFrame& data,
                           const AblationOptions& options, std::vector<ExperimentResult>* results) {
  check_comparable(specs);
  const std::size_t replicates = std::max<std::size_t>(options.replicates, 1);

  std::vector<Job> jobs;
  for (std::size_t row = 0; row < specs.size(); ++row) {
    for (std::size_t r = 0; r < replicates; ++r) {
      Job job{row, specs[row]};
      job.spec.train.seed = replicate_seed(specs[row].train.seed, r);
      jobs.push_back(std::move(job));
    }
  }

  std::vector<JobOutcome> outcomes(jobs.size());
  const std::size_t width = std::max<std::size_t>(options.jobs, 1);
  if (width == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) outcomes[j] = run_job(jobs[j], data, options.run);
  } else {
    for (std::size_t begin = 0; begin < jobs.size(); begin += width) {
      std::vector<std::future<JobOutcome>> running;
      const std::size_t end = std::min(jobs.size(), begin + width);
      for (std::size_t j = begin; j < end; ++j)
        running.push_back(std::async(std::launch::async, run_job, std::cref(jobs[j]), std::cref(data), std::cref(options.run)));
      for (std::size_t j = begin; j < end; ++j) outcomes[j] = running[j - begin].get();
    }
  }

  AblationTable table;
  for (const auto& spec : specs) table.rows.push_back(AblationRow{spec.variant, std::nullopt, {}, {}});
  std::vector<std::vector<train::MetricsReport>> per_row(specs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& row = table.rows[jobs[j].row];
    if (!outcomes[j].result) {
      if (row.error.empty()) row.error = outcomes[j].error;
      continue;
    }
    row.run_hashes.push_back(outcomes[j].result->hash);
    per_row[jobs[j].row].push_back(outcomes[j].result->metrics);
    if (results) results->push_back(std::move(*outcomes[j].result));
  }
  for (std::size_t row = 0; row < specs.size(); ++row) {
    const auto& ms = per_row[row];
    if (ms.size() != replicates) continue;  // any failed replicate fails the row
    auto pick = [&](double train::MetricsReport::*field) {
      std::vector<double> v;
      for (const auto& m : ms) v.push_back(m.*field);
      return median(std::move(v));
    };
    table.rows[row].metrics = train::MetricsReport{pick(&train::MetricsReport::mse), pick(&train::MetricsReport::rmse),
                                                   pick(&train::MetricsReport::mae), pick(&train::MetricsReport::mape)};
  }
  table.best = mark_minima(table.rows);
  return table;
}

std::array<std::optional<std::size_t>, 4> mark_minima(std::span<const AblationRow> rows) {
  std::array<std::optional<std::size_t>, 4> best{};
  const std::array<double train::MetricsReport::*, 4> fields{&train::MetricsReport::mse, &train::MetricsReport::rmse,
                                                             &train::MetricsReport::mae, &train::MetricsReport::mape};
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].metrics) continue;
      if (!best[m] || (*rows[r].metrics).*fields[m] < (*rows[*best[m]].metrics).*fields[m]) best[m] = r;
    }
  }
  return best;
}

std::string ablation_to_csv(const AblationTable& table) {
  std::string out = "variant,mse,rmse,mae,mape,best,status\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    out += row.variant;
    if (row.metrics) {
      for (double v : {row.metrics->mse, row.metrics->rmse, row.metrics->mae, row.metrics->mape}) out += "," + format_real(v);
    } else {
      out += ",,,,";
    }
    std::string best;
    for (std::size_t m = 0; m < 4; ++m) {
      if (table.best[m] == r) best += (best.empty() ? "" : ";") + std::string(kMetricNames[m]);
    }
    out += "," + best + "," + (row.metrics ? std::string("ok") : "failed") + "\n";
  }
  return out;
}

std::string ablation_to_text(const AblationTable& table, const std::string& title) {
  std::size_t name_w = 12;
  for (const auto& row : table.rows) name_w = std::max(name_w, row.variant.size());
  constexpr std::size_t kCol = 14;
  auto pad_left = [](std::string s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; };
  auto pad_right = [](std::string s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); };

  std::string out = title + "\n";
  out += "(metrics on " + train::to_string(table.scale) + " price scale; * marks the per-metric minimum)\n";
  out += pad_right("", name_w);
  for (const char* name : kMetricNames) out += pad_left(name, kCol);
  out += "\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    out += pad_right(row.variant, name_w);
    if (!row.metrics) {
      out += "  FAILED: " + row.error + "\n";
      continue;
    }
    const std::array<double, 4> values{row.metrics->mse, row.metrics->rmse, row.metrics->mae, row.metrics->mape};
    for (std::size_t m = 0; m < 4; ++m)
      out += pad_left(format_fixed(values[m], 5) + (table.best[m] == r ? "*" : " "), kCol);
    out += "\n";
  }
  return out;
}

AblationPlan ablation_plan_from_json(const nlohmann::json& j) {
  try {
    AblationPlan plan;
    plan.data = j.at("data").get<std::string>();
    plan.target = j.at("target").get<std::string>();
    plan.variants = j.value("variants", plan.variants);
    plan.seed = j.value("seed", plan.seed);
    plan.replicates = j.value("replicates", plan.replicates);
    plan.jobs = j.value("jobs", plan.jobs);
    auto base = j;
    base["target"] = plan.target;
    plan.base = spec_from_json(base);
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ablation plan: ") + e.what());
  }
}

std::vector<ExperimentSpec> make_ablation_specs(const AblationPlan& plan) {
  std::vector<ExperimentSpec> specs;
  for (const auto& variant : plan.variants) {
    ExperimentSpec spec = plan.base;
    spec.target = plan.target;
    spec.variant = variant;
    spec.train.seed = derive_seed(plan.seed, variant);
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace oilcast::experiment
