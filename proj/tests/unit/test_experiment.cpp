#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "frsim/experiment.hpp"
#include "frsim/report.hpp"

using namespace frsim;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Experiment small_sweep() {
  Experiment e;
  e.base = fixture::tiny_config();
  e.base.learn_iters = 40;
  e.base.tx_slots_per_frame = 10;
  e.sh_counts = {0, 2};
  e.gammas = {0.5, 1.0};
  e.schemes = {CachingScheme::Learned, CachingScheme::Mpc};
  e.runs_per_point = 3;
  e.master_seed = 42;
  e.record_trace = true;
  return e;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("frsim_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Experiment, GridIsTheCartesianProduct) {
  const auto e = small_sweep();
  EXPECT_EQ(e.grid().size(), 8u);
  Experiment single;
  single.base = fixture::tiny_config();
  ASSERT_EQ(single.grid().size(), 1u);
  EXPECT_EQ(single.grid()[0].num_sh, single.base.num_sh);
}

TEST(Experiment, InvalidExperimentsAreReported) {
  auto e = small_sweep();
  e.runs_per_point = 0;
  EXPECT_FALSE(e.violations().empty());
  e = small_sweep();
  e.base.cache_cap_sh = 1000;
  EXPECT_FALSE(e.violations().empty());
  EXPECT_THROW(run_experiment(e, 1), ConfigError);
}

TEST(Experiment, RunSeedsAreSharedAcrossPoints) {
  const auto r = run_experiment(small_sweep(), 1);
  ASSERT_EQ(r.runs.size(), 24u);
  ASSERT_EQ(r.summaries.size(), 8u);
  for (const auto& run : r.runs) EXPECT_EQ(run.seed, run_seed(42, run.run_index));
  EXPECT_EQ(r.traces.size(), 4u);
}

TEST(Experiment, OnePointAloneReproducesItsRows) {
  const auto e = small_sweep();
  const auto full = run_experiment(e, 2);
  const auto point = e.grid()[5];
  const auto alone = run_point(e, point);
  ASSERT_EQ(alone.size(), 3u);
  for (const auto& a : alone) {
    const auto& match = full.runs[5 * 3 + a.run_index];
    EXPECT_EQ(a.summary.avg_delay_s, match.summary.avg_delay_s);
    EXPECT_EQ(a.summary.hit_rate, match.summary.hit_rate);
  }
}

TEST(Experiment, OutputIsIndependentOfThreadCount) {
  const auto e = small_sweep();
  const auto a = scratch("serial");
  const auto b = scratch("parallel");
  write_results(run_experiment(e, 1), a);
  write_results(run_experiment(e, 4), b);
  for (const char* f : {"runs.csv", "summary.csv", "learning_trace.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Experiment, CsvLayout) {
  const auto dir = scratch("layout");
  write_results(run_experiment(small_sweep(), 1), dir);
  std::istringstream summary(slurp(dir / "summary.csv"));
  std::string header;
  std::getline(summary, header);
  EXPECT_EQ(header.rfind("scheme,helper,num_errh,num_sh,gamma,runs,", 0), 0u);
  int rows = 0;
  for (std::string line; std::getline(summary, line);) ++rows;
  EXPECT_EQ(rows, 8);
  std::istringstream trace(slurp(dir / "learning_trace.csv"));
  std::getline(trace, header);
  EXPECT_NE(header.find("iteration"), std::string::npos);
  EXPECT_NE(header.find("mean_reward_sh"), std::string::npos);
  EXPECT_NE(header.find("mean_reward_relay"), std::string::npos);
  bool svg = false;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) svg |= entry.path().extension() == ".svg";
  EXPECT_TRUE(svg);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, UnwritableOutputDirectory) {
  EXPECT_THROW(write_results(run_experiment(small_sweep(), 1), "/proc/frsim_cannot_write"), std::runtime_error);
}

TEST(Presets, EveryNameBuilds) {
  for (const auto& n : preset_names()) {
    const auto p = make_preset(n, desk_config());
    ASSERT_TRUE(p) << n;
    EXPECT_TRUE(p->violations().empty()) << n;
    EXPECT_FALSE(p->grid().empty());
  }
  EXPECT_FALSE(make_preset("no-such-preset", desk_config()));
}

TEST(Presets, RelayComparisonRecordsTraces) {
  const auto p = *make_preset("learning-trace", desk_config());
  EXPECT_TRUE(p.record_trace);
  EXPECT_EQ(p.grid().size(), 4u);
}

TEST(Report, NumbersRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(std::stod(format_number(1e8)), 1e8);
  EXPECT_EQ(format_number(-2.5), "-2.5");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Report, SvgEscapesText) {
  LinePlot plot;
  plot.title = "a < b & c";
  plot.series.push_back({"s", {0, 1}, {1, 2}, {}});
  std::ostringstream os;
  write_svg(os, plot);
  EXPECT_NE(os.str().find("a &lt; b &amp; c"), std::string::npos);
  EXPECT_EQ(os.str().rfind("<svg", 0), 0u);
}
