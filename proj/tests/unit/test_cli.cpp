#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oilcast/cli/cli.hpp"
#include "oilcast/data/frame.hpp"
#include "oilcast/data/series.hpp"
#include "oilcast/error.hpp"
#include "oilcast/format.hpp"
#include "oilcast/market/alpha_vantage.hpp"
#include "test_support.hpp"

#include "stub_server.hpp"

using namespace oilcast;
using namespace oilcast::testing;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool tree_contains(const fs::path& root, const std::string& needle) {
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file() && read_text(entry.path()).find(needle) != std::string::npos) return true;
  return false;
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

/// Serves the bundled synthetic instruments in the provider's envelope.
StubServer::Handler synthetic_provider() {
  return [](const httplib::Request& req, httplib::Response& res) {
    const auto symbol = req.get_param_value("symbol");
    const auto file = source_path("data/synthetic") / (symbol + ".csv");
    if (!fs::exists(file)) {
      res.set_content(R"({"Error Message": "Invalid API call for apikey )" + req.get_param_value("apikey") + "\"}",
                      "application/json");
      return;
    }
    res.set_content(market::daily_payload(data::read_series_file(file, symbol)), "application/json");
  };
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
  const auto r = run_cli({});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("fetch"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run_cli({"corr", "x.csv", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"nonsense"}).code, cli::kExitUsage);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("ablate"), std::string::npos);
}

TEST(Cli, MissingInputIsPipelineError) {
  TempDir dir;
  const auto r = run_cli({"corr", (dir / "absent.csv").string(), "--out-dir", dir.path().string()});
  EXPECT_EQ(r.code, cli::kExitPipeline);
  EXPECT_NE(r.err.find("absent.csv"), std::string::npos);
}

TEST(Cli, CorrOnFixtureMatchesGoldens) {
  TempDir dir;
  const auto r = run_cli({"corr", source_path("data/fixtures/seven_close.csv").string(), "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text(dir / "correlation_matrix.csv"), read_text(fs::path(OILCAST_GOLDEN_DIR) / "seven_close_matrix.csv"));
  EXPECT_EQ(read_text(dir / "heatmap.svg"), read_text(fs::path(OILCAST_GOLDEN_DIR) / "seven_close_heatmap.svg"));
}

TEST(Cli, WindowedCorrWritesTables) {
  TempDir dir;
  const auto r = run_cli({"corr", source_path("data/fixtures/seven_close.csv").string(), "--windowed", "--window-len",
                          "40", "--columns", "BP.L.close,WTI.close,GOLD.close", "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(read_text(dir / "windowed_summary.csv")), 3u);
  EXPECT_EQ(line_count(read_text(dir / "windowed_correlations.csv")), 1u + 2u * 6u);
  EXPECT_EQ(line_count(read_text(dir / "windowed_histogram.csv")), 1u + 2u * 4u);
}

TEST(Cli, ConfigFillsFlagsAndFlagsWin) {
  TempDir dir;
  const auto frame = source_path("data/fixtures/seven_close.csv").string();
  {
    std::ofstream(dir / "cfg.json") << R"({"max-lag": 10, "threshold": 0.9, "suggest": true})";
  }
  auto r = run_cli({"--config", (dir / "cfg.json").string(), "acf", "WTI.close", "--frame", frame, "--out-dir",
                    (dir / "a").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(read_text(dir / "a" / "acf.csv")), 12u);
  const auto report = nlohmann::json::parse(read_text(dir / "a" / "acf_report.json"));
  EXPECT_EQ(report.at("threshold"), 0.9);

  r = run_cli({"--config", (dir / "cfg.json").string(), "acf", "WTI.close", "--frame", frame, "--max-lag", "5",
               "--out-dir", (dir / "b").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(read_text(dir / "b" / "acf.csv")), 7u);

  {
    std::ofstream(dir / "bad.json") << R"({"no-such-flag": 1})";
  }
  EXPECT_EQ(run_cli({"--config", (dir / "bad.json").string(), "acf", "WTI.close", "--frame", frame}).code,
            cli::kExitUsage);
}

TEST(Cli, BundledDefaultConfigIsAccepted) {
  TempDir dir;
  const auto r = run_cli({"--config", source_path("configs/default.json").string(), "corr",
                          source_path("data/fixtures/seven_close.csv").string(), "--out-dir", dir.path().string()});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, FetchThroughStubNeverPersistsTheKey) {
  TempDir dir;
  StubServer stub(synthetic_provider());
  const std::string secret = "CLI-UNIT-SECRET";
  auto r = run_cli({"fetch", "OILCO", "WTI", "--base-url", stub.url(), "--api-key", secret, "--interval-ms", "0",
                    "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "OILCO.csv"));
  EXPECT_TRUE(fs::exists(dir / "frame.csv"));
  EXPECT_EQ(stub.requests(), 2u);

  r = run_cli({"fetch", "NOPE", "--base-url", stub.url(), "--api-key", secret, "--interval-ms", "0", "--out-dir",
               dir.path().string()});
  EXPECT_EQ(r.code, cli::kExitPipeline);
  EXPECT_EQ(r.err.find(secret), std::string::npos) << r.err;
  EXPECT_EQ(r.out.find(secret), std::string::npos);
  EXPECT_FALSE(tree_contains(dir.path(), secret));
}

TEST(Cli, FetchKeyFromEnvironmentIsRedactedToo) {
  TempDir dir;
  StubServer stub(synthetic_provider());
  ::setenv("OILCAST_API_KEY", "ENV-UNIT-SECRET", 1);
  const auto r = run_cli({"fetch", "MISSING", "--base-url", stub.url(), "--interval-ms", "0", "--out-dir",
                          dir.path().string()});
  ::unsetenv("OILCAST_API_KEY");
  EXPECT_EQ(r.code, cli::kExitPipeline);
  EXPECT_EQ(r.err.find("ENV-UNIT-SECRET"), std::string::npos) << r.err;
  ASSERT_FALSE(stub.queries().empty());
  EXPECT_NE(stub.queries().front().find("ENV-UNIT-SECRET"), std::string::npos);
}

TEST(Cli, SynthThenTrainThenReport) {
  TempDir dir;
  auto r = run_cli({"synth", "--days", "120", "--out-dir", (dir / "data").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto frame = data::read_frame_file(dir / "data" / "frame.csv");
  const auto& dates = frame.dates();
  const nlohmann::json spec{{"data", "data/frame.csv"},
                            {"target", "OILCO"},
                            {"variant", "+WTI"},
                            {"train_last", format_date(dates[89])},
                            {"test_first", format_date(dates[90])},
                            {"test_last", format_date(dates.back())},
                            {"lstm", {{"hidden_dim", 3}, {"dense_dim", 3}, {"lookback", 5}}},
                            {"train", {{"epochs", 1}, {"batch_size", 10}}}};
  std::ofstream(dir / "spec.json") << spec.dump(2);
  r = run_cli({"--seed", "4", "train", (dir / "spec.json").string(), "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(dir / "runs"));
  const auto run_dir = fs::directory_iterator(dir / "runs")->path();
  r = run_cli({"report", run_dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("OILCO"), std::string::npos);
  EXPECT_NE(r.out.find("+WTI"), std::string::npos);
  EXPECT_NE(r.out.find(run_dir.filename().string()), std::string::npos);
}

TEST(Cli, SymbolSets) {
  EXPECT_EQ(cli::symbol_set("study").size(), 7u);
  EXPECT_THROW(cli::symbol_set("unknown"), Error);
}
