#pragma once

#include <functional>
#include <vector>

#include "frsim/baselines.hpp"
#include "frsim/cache.hpp"
#include "frsim/channel.hpp"
#include "frsim/config.hpp"
#include "frsim/learning.hpp"
#include "frsim/metrics.hpp"
#include "frsim/topology.hpp"
#include "frsim/traffic.hpp"

namespace frsim {

/// Per-iteration learning statistics of node 0 of each kind.
struct LearningTracePoint {
  double mean_reward_errh = 0.0;
  double mean_reward_helper = 0.0;
  /// Mean cache probability of the cap most popular segments.
  double top_k_policy_errh = 0.0;
  double top_k_policy_helper = 0.0;
};

struct FrameOutcome {
  std::vector<SlotMetrics> slots;
  RunSummary summary;
  std::vector<LearningTracePoint> trace;
};

/// Called after each transmission slot with the cache as updated by it.
using SlotCallback = std::function<void(const SlotMetrics&, const CacheState&)>;

/// One time frame of one Monte Carlo run: N cache-learning iterations over
/// shadow traffic, the eRRH cache commit, then T scheduled transmission
/// slots. Owns every piece of mutable run state.
class FrameSimulator {
 public:
  FrameSimulator(const SimConfig& cfg, const Topology& topo, const Catalog& catalog, std::uint64_t run_seed);

  /// One learning iteration: sample actions, update caches, schedule a
  /// shadow slot, reward and update every agent.
  LearningTracePoint learning_iteration();

  /// Commits eRRH caches (and helper caches) from the current policies and
  /// returns the fronthaul bits spent fetching eRRH contents.
  double commit_caches();

  /// Fills all caches from a non-learned scheme and returns the refresh bits.
  double prefill_baseline(CachingScheme scheme);

  /// One scheduled transmission slot, followed by opportunistic helper cache
  /// updates (overhearing for learned SHs, relaying for CE-relays). The
  /// metrics describe the cache as it was during the slot.
  SlotMetrics transmission_slot();

  /// Full frame for cfg.caching_scheme.
  FrameOutcome run_frame(bool record_trace, const SlotCallback& on_slot = {});

  [[nodiscard]] const AgentBank& bank() const { return bank_; }
  [[nodiscard]] AgentBank& bank() { return bank_; }
  [[nodiscard]] const CacheState& cache() const { return cache_; }
  [[nodiscard]] CacheState& cache() { return cache_; }
  [[nodiscard]] const BinaryMatrix& observed() const { return observed_; }
  [[nodiscard]] const RelayState& relay_state() const { return relay_; }
  [[nodiscard]] const LegitimacySignals& last_legitimacy() const { return last_legitimacy_; }

 private:
  void sample_actions();
  void update_helper_observations(const Schedule& schedule, const RequestBatch& requests);
  void opportunistic_helper_update();
  std::vector<int> shuffled_order();

  const SimConfig& cfg_;
  const Topology& topo_;
  const Catalog& catalog_;
  int num_errh_;
  int num_helpers_;
  int num_segments_;
  bool relay_variant_;
  CacheState cache_;
  AgentBank bank_;
  LearnSchedule steps_;
  BinaryMatrix observed_;  // helper x segment, from the previous slot
  std::vector<std::uint8_t> overhears_;  // [u * H + h], user within overhear_radius of SH h
  RelayState relay_;
  LegitimacySignals last_legitimacy_;
  ChannelSampler learn_channel_;
  ChannelSampler tx_channel_;
  Rng learn_requests_;
  Rng tx_requests_;
  Rng agent_rng_;
  Rng order_rng_;
  Rng baseline_rng_;
  int tx_slot_ = 0;
  std::vector<std::uint8_t> decisions_;
  std::vector<double> tie_break_;
};

/// One complete Monte Carlo run for cfg: topology, catalog and frame, all
/// derived from run_seed.
FrameOutcome simulate_run(const SimConfig& cfg, std::uint64_t run_seed, bool record_trace = false);

}  // namespace frsim
