#include <gtest/gtest.h>

#include <sstream>

#include "frsim/cache.hpp"

using namespace frsim;

namespace {

std::vector<std::uint8_t> row_of(const CacheState& c, NodeKind k, int i) {
  auto r = c.of(k).row(i);
  return {r.begin(), r.end()};
}

}  // namespace

TEST(Cache, EmptyCacheMisses) {
  CacheState c(2, 1, 10);
  for (int f = 0; f < 10; ++f) EXPECT_FALSE(is_hit(c, {NodeKind::Errh, 1}, f));
}

TEST(Cache, SetBitIsAHit) {
  CacheState c(1, 0, 10);
  c.errh.set(0, 3, true);
  EXPECT_TRUE(is_hit(c, {NodeKind::Errh, 0}, 3));
}

TEST(Cache, FullCacheMissesTheNextSegment) {
  CacheState c(1, 0, 10);
  for (int f = 0; f < 4; ++f) c.errh.set(0, f, true);
  EXPECT_FALSE(is_hit(c, {NodeKind::Errh, 0}, 4));
  EXPECT_EQ(c.errh.row_count(0), 4);
}

TEST(Cache, OutOfRangeIsAnError) {
  CacheState c(1, 1, 5);
  EXPECT_THROW(is_hit(c, {NodeKind::Errh, 1}, 0), std::out_of_range);
  EXPECT_THROW(is_hit(c, {NodeKind::Helper, 0}, 5), std::out_of_range);
  EXPECT_THROW(is_hit(c, {NodeKind::Helper, 0}, -1), std::out_of_range);
}

TEST(ApplyDecision, AllZeroClearsTheRow) {
  CacheState c(1, 0, 3);
  c.errh.set(0, 1, true);
  const std::vector<std::uint8_t> d{0, 0, 0};
  const std::vector<double> p{0.5, 0.5, 0.5};
  apply_decision(c, {NodeKind::Errh, 0}, d, 2, p);
  EXPECT_EQ(c.errh.row_count(0), 0);
}

TEST(ApplyDecision, KeepsHighestProbabilitiesOverCapacity) {
  CacheState c(1, 0, 3);
  const std::vector<std::uint8_t> d{1, 1, 1};
  const std::vector<double> p{0.9, 0.1, 0.5};
  apply_decision(c, {NodeKind::Errh, 0}, d, 2, p);
  EXPECT_EQ(row_of(c, NodeKind::Errh, 0), (std::vector<std::uint8_t>{1, 0, 1}));
}

TEST(ApplyDecision, WithinCapacityUnchanged) {
  CacheState c(1, 0, 3);
  const std::vector<std::uint8_t> d{1, 1, 0};
  const std::vector<double> p{0.1, 0.2, 0.3};
  apply_decision(c, {NodeKind::Errh, 0}, d, 2, p);
  EXPECT_EQ(row_of(c, NodeKind::Errh, 0), (std::vector<std::uint8_t>{1, 1, 0}));
}

TEST(ApplyDecision, TiesFollowOrderThenIndex) {
  CacheState c(1, 0, 4);
  const std::vector<std::uint8_t> d{1, 1, 1, 1};
  const std::vector<double> p{0.5, 0.5, 0.5, 0.5};
  apply_decision(c, {NodeKind::Errh, 0}, d, 2, p);
  EXPECT_EQ(row_of(c, NodeKind::Errh, 0), (std::vector<std::uint8_t>{1, 1, 0, 0}));
  const std::vector<int> order{3, 2, 1, 0};
  apply_decision(c, {NodeKind::Errh, 0}, d, 2, p, order);
  EXPECT_EQ(row_of(c, NodeKind::Errh, 0), (std::vector<std::uint8_t>{0, 0, 1, 1}));
}

TEST(ApplyDecision, NeverExceedsCapacity) {
  CacheState c(0, 1, 50);
  std::vector<std::uint8_t> d(50, 1);
  std::vector<double> p(50);
  for (int f = 0; f < 50; ++f) p[f] = (f * 37 % 50) / 50.0;
  for (int cap : {0, 1, 7, 49, 50, 60}) {
    apply_decision(c, {NodeKind::Helper, 0}, d, cap, p);
    EXPECT_EQ(c.helper.row_count(0), std::min(cap, 50));
  }
}

TEST(ShEligible, CachedOrObservedOnly) {
  CacheState c(1, 1, 4);
  BinaryMatrix observed(1, 4);
  c.helper.set(0, 0, true);
  observed.set(0, 1, true);
  EXPECT_TRUE(sh_eligible(0, 0, observed, c));
  EXPECT_TRUE(sh_eligible(1, 0, observed, c));
  EXPECT_FALSE(sh_eligible(2, 0, observed, c));
}

TEST(CacheSnapshot, CsvRows) {
  CacheState c(1, 1, 5);
  c.errh.set(0, 1, true);
  c.errh.set(0, 4, true);
  c.helper.set(0, 2, true);
  std::ostringstream os;
  write_cache_snapshot(os, c, 7, true);
  EXPECT_EQ(os.str(), "node_type,node_id,slot,segments\nerrh,0,7,1 4\nhelper,0,7,2\n");
}
