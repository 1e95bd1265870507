#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "frsim/metrics.hpp"

using namespace frsim;

namespace {

SimConfig reference_constants() {
  SimConfig cfg;
  cfg.segment_bits = 1e7;
  cfg.fronthaul_rate = 1e8;
  return cfg;
}

SlotMetrics slot_with(std::vector<double> delays) {
  SlotMetrics m;
  for (double d : delays) {
    ServedUser s;
    s.delay = d;
    m.served.push_back(s);
  }
  return m;
}

}  // namespace

TEST(UserDelay, CacheAndMbsPaths) {
  const auto cfg = reference_constants();
  EXPECT_DOUBLE_EQ(*user_delay(ServedFrom::ErrhCache, 1e8, cfg), 0.1);
  EXPECT_DOUBLE_EQ(*user_delay(ServedFrom::HelperCache, 1e8, cfg), 0.1);
  EXPECT_DOUBLE_EQ(*user_delay(ServedFrom::Mbs, 1e8, cfg), 0.2);
  EXPECT_NEAR(*user_delay(ServedFrom::Mbs, 1e300, cfg), 0.1, 1e-15);
  EXPECT_FALSE(user_delay(ServedFrom::Mbs, 0.0, cfg).has_value());
}

TEST(UserDelay, FasterFronthaulNeverIncreasesDelay) {
  auto cfg = reference_constants();
  const double slow = *user_delay(ServedFrom::Mbs, 3e5, cfg);
  cfg.fronthaul_rate = 1e9;
  EXPECT_LT(*user_delay(ServedFrom::Mbs, 3e5, cfg), slow);
}

TEST(AverageDelay, NormalizedByRrbCount) {
  const std::vector<SlotMetrics> a{slot_with({0.1, 0.3})};
  EXPECT_DOUBLE_EQ(average_delay(a, 2), 0.2);
  const std::vector<SlotMetrics> b{slot_with({0.1})};
  EXPECT_DOUBLE_EQ(average_delay(b, 2), 0.05);
  const std::vector<SlotMetrics> c{slot_with({})};
  EXPECT_DOUBLE_EQ(average_delay(c, 2), 0.0);
  const std::vector<SlotMetrics> d{slot_with({0.4}), slot_with({0.0})};
  EXPECT_DOUBLE_EQ(average_delay(d, 1), 0.2);
}

TEST(EvaluateSlot, MbsFetchCostsFronthaulAndDelay) {
  auto cfg = reference_constants();
  cfg.num_rrb = 2;
  const auto ch = fixture::flat_channel(cfg, 2, 2, 1, 0, 1.0, 0.0);
  CacheState cache(1, 0, 5);
  cache.errh.set(0, 1, true);
  Schedule s;
  s.num_rrb = 2;
  s.num_errh = 1;
  s.power_errh = {cfg.p_errh_per_rrb, cfg.p_errh_per_rrb};
  s.assign_errh = {{0, 0, 0, -1, VertexKind::Errh}, {1, 1, 0, -1, VertexKind::Errh}};
  const auto m = evaluate_slot(s, cache, ch, fixture::requests({1, 2}), cfg, 0);
  ASSERT_EQ(m.served.size(), 2u);
  EXPECT_NEAR(m.served[1].delay - m.served[0].delay, 0.1, 1e-12);
  EXPECT_EQ(m.served[0].from, ServedFrom::ErrhCache);
  EXPECT_EQ(m.served[1].from, ServedFrom::Mbs);
  EXPECT_EQ(m.fronthaul_bits, 1e7);
  EXPECT_EQ(m.hits, 1);
  EXPECT_EQ(m.popular_served, 2);
}

TEST(EvaluateSlot, AllHitsMeanNoFronthaul) {
  auto cfg = reference_constants();
  const auto ch = fixture::flat_channel(cfg, 1, 1, 1, 0, 1.0, 0.0);
  CacheState cache(1, 0, 5);
  cache.errh.set(0, 3, true);
  Schedule s;
  s.num_rrb = 1;
  s.num_errh = 1;
  s.power_errh = {cfg.p_errh_per_rrb};
  s.assign_errh = {{0, 0, 0, -1, VertexKind::Errh}};
  EXPECT_EQ(evaluate_slot(s, cache, ch, fixture::requests({3}), cfg, 0).fronthaul_bits, 0.0);
}

TEST(EvaluateSlot, ZeroPowerCountsUnserved) {
  auto cfg = reference_constants();
  const auto ch = fixture::flat_channel(cfg, 1, 1, 1, 0, 1.0, 0.0);
  Schedule s;
  s.num_rrb = 1;
  s.num_errh = 1;
  s.power_errh = {0.0};
  s.assign_errh = {{0, 0, 0, -1, VertexKind::Errh}};
  const auto m = evaluate_slot(s, CacheState(1, 0, 5), ch, fixture::requests({3}), cfg, 0);
  EXPECT_EQ(m.zero_rate, 1);
  EXPECT_TRUE(m.served.empty());
}

TEST(EvaluateSlot, TwoHopAddsBothHops) {
  auto cfg = reference_constants();
  cfg.helper_kind = HelperKind::CeRelay;
  const auto ch = fixture::flat_channel(cfg, 1, 1, 1, 1, 1.0, 1.0, 3.0);
  Schedule s;
  s.num_rrb = 1;
  s.num_errh = 1;
  s.num_sh = 1;
  s.power_errh = {cfg.p_errh_per_rrb};
  s.power_sh = {cfg.p_sh_total};
  s.assign_two_hop = {{0, 0, 0, 0, VertexKind::TwoHop}};
  const auto m = evaluate_slot(s, CacheState(1, 1, 5), ch, fixture::requests({2}), cfg, 0);
  ASSERT_EQ(m.served.size(), 1u);
  EXPECT_NEAR(m.served[0].delay, 1e7 / 1.8e5 + 1e7 / 3.6e5 + 0.1, 1e-9);
}

TEST(Summary, RatesAndLoad) {
  SimConfig cfg;
  cfg.num_rrb = 2;
  cfg.segment_bits = 10.0;
  cfg.slot_duration = 2.0;
  std::vector<SlotMetrics> slots(2);
  slots[0] = slot_with({1.0});
  slots[0].fronthaul_bits = 40.0;
  slots[0].hits = 1;
  slots[0].popular_served = 1;
  slots[0].requests = 4;
  slots[1].hits = 0;
  slots[1].popular_served = 3;
  slots[1].requests = 4;
  const auto r = summarize_run(slots, cfg, 70.0);
  EXPECT_DOUBLE_EQ(r.hit_rate, 0.25);
  EXPECT_DOUBLE_EQ(r.fronthaul_bps, 10.0);
  EXPECT_DOUBLE_EQ(r.service_rate, 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(r.refresh_bits, 70.0);
  EXPECT_DOUBLE_EQ(r.avg_delay_s, 0.25);
}

TEST(MeanCi, IdenticalRunsHaveZeroWidth) {
  const std::vector<double> v(10, 0.3);
  const auto s = mean_ci(v);
  EXPECT_DOUBLE_EQ(s.mean, 0.3);
  EXPECT_DOUBLE_EQ(s.half_width, 0.0);
}

TEST(MeanCi, TwoRunsMean) {
  const std::vector<double> v{0.1, 0.3};
  EXPECT_DOUBLE_EQ(mean_ci(v).mean, 0.2);
}

TEST(MeanCi, CoverageOfNormalSamples) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> d(0.2, 0.01);
  int covered = 0;
  std::vector<double> v(2000);
  for (int trial = 0; trial < 1000; ++trial) {
    for (auto& x : v) x = d(rng);
    const auto s = mean_ci(v);
    covered += s.lo() <= 0.2 && 0.2 <= s.hi();
  }
  EXPECT_GE(covered, 930);
}

TEST(MeanCi, SeparationTest) {
  MetricStat a{1.0, 0.0, 0.1, 10};
  MetricStat b{1.3, 0.0, 0.1, 10};
  MetricStat c{1.15, 0.0, 0.1, 10};
  EXPECT_TRUE(ci_separated(a, b));
  EXPECT_FALSE(ci_separated(a, c));
}

TEST(Aggregate, MeansPerMetric) {
  std::vector<RunSummary> runs(2);
  runs[0].avg_delay_s = 1.0;
  runs[1].avg_delay_s = 3.0;
  runs[0].hit_rate = 0.5;
  runs[1].hit_rate = 0.7;
  const auto r = aggregate_runs(runs);
  EXPECT_EQ(r.runs, 2);
  EXPECT_DOUBLE_EQ(r.avg_delay_s.mean, 2.0);
  EXPECT_DOUBLE_EQ(r.hit_rate.mean, 0.6);
}

TEST(ScheduleRows, CsvLayout) {
  SlotMetrics m;
  m.slot = 3;
  ServedUser s;
  s.user = 4;
  s.rrb = 1;
  s.kind = VertexKind::Helper;
  s.node = 0;
  s.power = 0.5;
  s.delay = 2.0;
  s.from = ServedFrom::HelperCache;
  m.served.push_back(s);
  std::ostringstream os;
  write_schedule_rows(os, m, true);
  EXPECT_EQ(os.str(),
            "slot,user,node_type,node_id,rrb,power_watts,delay_seconds,served_from\n3,4,helper,0,1,0.5,2,sh_cache\n");
}
