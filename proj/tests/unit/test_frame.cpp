#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "frsim/frame.hpp"

using namespace frsim;

namespace {

struct Network {
  SimConfig cfg;
  Topology topo;
  Catalog catalog;

  explicit Network(SimConfig c, std::uint64_t seed = 1) : cfg(c) {
    Rng rng = make_stream(seed, Stream::Topology);
    topo = generate_topology(cfg, rng);
    catalog = build_catalog(cfg.num_segments, cfg.zipf_gamma);
  }
};

}  // namespace

TEST(Frame, SameSeedSameOutcome) {
  for (auto kind : {HelperKind::SmartHelper, HelperKind::CeRelay}) {
    SimConfig cfg = fixture::tiny_config();
    cfg.helper_kind = kind;
    const auto a = simulate_run(cfg, 77, true);
    const auto b = simulate_run(cfg, 77, true);
    EXPECT_EQ(a.summary.avg_delay_s, b.summary.avg_delay_s);
    EXPECT_EQ(a.summary.fronthaul_bps, b.summary.fronthaul_bps);
    EXPECT_EQ(a.summary.hits, b.summary.hits);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i)
      EXPECT_EQ(a.trace[i].mean_reward_helper, b.trace[i].mean_reward_helper);
  }
}

TEST(Frame, NoTransmissionSlotsNoMetrics) {
  SimConfig cfg = fixture::tiny_config();
  cfg.tx_slots_per_frame = 0;
  const auto out = simulate_run(cfg, 3);
  EXPECT_TRUE(out.slots.empty());
  EXPECT_GT(out.summary.refresh_bits, 0.0);
}

TEST(Frame, WithoutHelpersNothingIsServedByHelpers) {
  SimConfig cfg = fixture::tiny_config();
  cfg.num_sh = 0;
  const auto out = simulate_run(cfg, 3);
  for (const auto& s : out.slots)
    for (const auto& u : s.served) EXPECT_NE(u.kind, VertexKind::Helper);
  cfg.num_sh = 2;
  cfg.helper_kind = HelperKind::None;
  for (const auto& s : simulate_run(cfg, 3).slots)
    for (const auto& u : s.served) EXPECT_NE(u.kind, VertexKind::Helper);
}

TEST(Frame, CacheCapacitiesHoldThroughout) {
  for (auto kind : {HelperKind::SmartHelper, HelperKind::CeRelay}) {
    SimConfig cfg = fixture::tiny_config();
    cfg.helper_kind = kind;
    Network net(cfg);
    FrameSimulator sim(net.cfg, net.topo, net.catalog, 5);
    auto check = [&](const CacheState& c) {
      for (int s = 0; s < c.errh.rows(); ++s) ASSERT_LE(c.errh.row_count(s), cfg.cache_cap_errh);
      for (int h = 0; h < c.helper.rows(); ++h) ASSERT_LE(c.helper.row_count(h), cfg.cache_cap_sh);
    };
    for (int i = 0; i < cfg.learn_iters; ++i) {
      sim.learning_iteration();
      check(sim.cache());
    }
    sim.run_frame(false, [&](const SlotMetrics&, const CacheState& c) { check(c); });
  }
}

TEST(Frame, HelpersOnlyGainWhatTheyObserved) {
  SimConfig cfg = fixture::tiny_config();
  Network net(cfg);
  FrameSimulator sim(net.cfg, net.topo, net.catalog, 9);
  int gained = 0;
  for (int i = 0; i < cfg.learn_iters; ++i) {
    const BinaryMatrix before = sim.cache().helper;
    const BinaryMatrix observed = sim.observed();
    sim.learning_iteration();
    for (int h = 0; h < cfg.num_sh; ++h) {
      for (int f = 0; f < cfg.num_segments; ++f) {
        if (!before.get(h, f) && sim.cache().helper.get(h, f)) {
          ++gained;
          EXPECT_TRUE(observed.get(h, f));
        }
      }
    }
  }
  EXPECT_GT(gained, 0);

  BinaryMatrix before = sim.cache().helper;
  cfg.learn_iters = 0;  // transmission phase only, continuing from the learned state
  sim.commit_caches();
  for (int t = 0; t < cfg.tx_slots_per_frame; ++t) {
    before = sim.cache().helper;
    sim.transmission_slot();
    for (int h = 0; h < cfg.num_sh; ++h)
      for (int f = 0; f < cfg.num_segments; ++f)
        if (!before.get(h, f) && sim.cache().helper.get(h, f)) EXPECT_TRUE(sim.observed().get(h, f));
  }
}

TEST(Frame, RelaysOnlyHoldRelayedSegments) {
  for (auto scheme : {CachingScheme::Learned, CachingScheme::Mpc}) {
    SimConfig cfg = fixture::tiny_config();
    cfg.helper_kind = HelperKind::CeRelay;
    cfg.caching_scheme = scheme;
    cfg.cell_radius = 900.0;
    Network net(cfg);
    FrameSimulator sim(net.cfg, net.topo, net.catalog, 13);
    auto check = [&](const SlotMetrics&, const CacheState& c) {
      for (int h = 0; h < cfg.num_sh; ++h)
        for (int f = 0; f < cfg.num_segments; ++f)
          if (c.helper.get(h, f)) ASSERT_TRUE(sim.relay_state().ever_relayed.get(h, f));
    };
    sim.run_frame(false, check);
  }
}

TEST(Frame, HitRateMatchesLegitimacySuccesses) {
  // Replays transmission slots and compares the metrics' hit count with the
  // learning module's success events on the same schedule.
  for (auto kind : {HelperKind::SmartHelper, HelperKind::CeRelay}) {
    SimConfig cfg = fixture::tiny_config();
    cfg.helper_kind = kind;
    Network net(cfg);
    const auto catalog = net.catalog;
    ChannelSampler channel(net.topo, cfg, 21, 1);
    Rng req_rng = make_stream(21, Stream::Requests, 1);
    Rng fill_rng(4);
    CacheState cache(cfg.num_errh, cfg.num_sh, cfg.num_segments);
    for (int s = 0; s < cfg.num_errh; ++s)
      fill_cache_baseline(CachingScheme::Hybrid50, catalog, cache, {NodeKind::Errh, s}, cfg.cache_cap_errh, fill_rng);
    for (int h = 0; h < cfg.num_sh; ++h)
      fill_cache_baseline(CachingScheme::Random, catalog, cache, {NodeKind::Helper, h}, cfg.cache_cap_sh, fill_rng);
    long hits = 0;
    long popular = 0;
    long successes = 0;
    for (int t = 0; t < 50; ++t) {
      const auto ch = channel.sample(t);
      const auto req = draw_requests(catalog, cfg.num_users, cfg.popular_prob, req_rng, t);
      const auto sched = schedule_slot(net.topo, cache, ch, req, cfg);
      const auto m = evaluate_slot(sched, cache, ch, req, cfg, t);
      successes += compute_legitimacy(sched, net.topo, cache, req, cfg.num_segments).success_events;
      hits += m.hits;
      popular += m.popular_served;
    }
    EXPECT_GT(popular, 0);
    EXPECT_EQ(hits, successes);
  }
}

TEST(Frame, BaselineHelperCachesAreStatic) {
  SimConfig cfg = fixture::tiny_config();
  cfg.caching_scheme = CachingScheme::Mpc;
  Network net(cfg);
  FrameSimulator sim(net.cfg, net.topo, net.catalog, 2);
  BinaryMatrix first;
  bool seen = false;
  sim.run_frame(false, [&](const SlotMetrics&, const CacheState& c) {
    if (!seen) first = c.helper;
    seen = true;
    EXPECT_EQ(c.helper, first);
  });
}

TEST(Frame, MismatchedInputsAreRejected) {
  SimConfig cfg = fixture::tiny_config();
  Network net(cfg);
  SimConfig other = cfg;
  other.num_segments = 10;
  EXPECT_THROW(FrameSimulator(other, net.topo, net.catalog, 1), std::invalid_argument);
  other = cfg;
  other.num_users = 5;
  EXPECT_THROW(FrameSimulator(other, net.topo, net.catalog, 1), std::invalid_argument);
}
