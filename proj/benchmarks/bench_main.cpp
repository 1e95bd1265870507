#include <benchmark/benchmark.h>

#include <random>

#include "frsim/experiment.hpp"
#include "frsim/frame.hpp"
#include "frsim/scheduler.hpp"

namespace {

using namespace frsim;

void BM_Waterfill(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lg(-2.0, 4.0);
  std::vector<double> a(static_cast<std::size_t>(state.range(0)));
  for (auto& v : a) v = std::pow(10.0, lg(rng));
  for (auto _ : state) benchmark::DoNotOptimize(waterfill(a, 0.2));
}
BENCHMARK(BM_Waterfill)->Arg(2)->Arg(8)->Arg(50);

struct DeskSlot {
  SimConfig cfg = desk_config();
  Topology topo;
  Catalog catalog;
  CacheState cache;
  ChannelState channel;
  RequestBatch requests;

  explicit DeskSlot(HelperKind kind) {
    cfg.helper_kind = kind;
    Rng rng(7);
    topo = generate_topology(cfg, rng);
    catalog = build_catalog(cfg.num_segments, cfg.zipf_gamma);
    cache = CacheState(cfg.num_errh, cfg.num_sh, cfg.num_segments);
    for (int s = 0; s < cfg.num_errh; ++s)
      for (int f = 0; f < cfg.cache_cap_errh; ++f) cache.errh.set(s, f, true);
    for (int h = 0; h < cfg.num_sh; ++h)
      for (int f = 0; f < cfg.cache_cap_sh; ++f) cache.helper.set(h, f, true);
    channel = ChannelSampler(topo, cfg, 7, 0).sample(0);
    requests = draw_requests(catalog, cfg.num_users, cfg.popular_prob, rng);
  }
};

void BM_ScheduleSlot(benchmark::State& state) {
  const DeskSlot d(state.range(0) ? HelperKind::CeRelay : HelperKind::SmartHelper);
  for (auto _ : state) benchmark::DoNotOptimize(schedule_slot(d.topo, d.cache, d.channel, d.requests, d.cfg));
}
BENCHMARK(BM_ScheduleSlot)->Arg(0)->Arg(1);

void BM_LearningIteration(benchmark::State& state) {
  const SimConfig cfg = desk_config();
  Rng rng(3);
  const auto topo = generate_topology(cfg, rng);
  const auto catalog = build_catalog(cfg.num_segments, cfg.zipf_gamma);
  FrameSimulator sim(cfg, topo, catalog, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sim.learning_iteration());
}
BENCHMARK(BM_LearningIteration);

void BM_DeskRun(benchmark::State& state) {
  SimConfig cfg = desk_config();
  cfg.caching_scheme = state.range(0) ? CachingScheme::Mpc : CachingScheme::Learned;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_run(cfg, seed++).summary);
}
BENCHMARK(BM_DeskRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
