#pragma once

#include <array>
#include <string>
#include <vector>

#include "frsim/cache.hpp"
#include "frsim/config.hpp"
#include "frsim/scheduler.hpp"
#include "frsim/topology.hpp"
#include "frsim/traffic.hpp"

namespace frsim {

/// Binary cache/no-cache learner for one (node, segment) pair.
/// Index 0 is "do not cache", index 1 is "cache".
struct Agent {
  std::array<double, 2> utility{0.0, 0.0};
  std::array<double, 2> policy{0.5, 0.5};
};

struct AgentBank {
  int num_errh = 0;
  int num_helpers = 0;
  int num_segments = 0;
  std::vector<Agent> errh;    // [s * F + f]
  std::vector<Agent> helper;  // [h * F + f]
  long iteration = 0;

  AgentBank() = default;
  AgentBank(int s, int h, int f);

  Agent& errh_agent(int s, int f) { return errh[static_cast<std::size_t>(s) * num_segments + f]; }
  Agent& helper_agent(int h, int f) { return helper[static_cast<std::size_t>(h) * num_segments + f]; }
  [[nodiscard]] const Agent& errh_agent(int s, int f) const {
    return errh[static_cast<std::size_t>(s) * num_segments + f];
  }
  [[nodiscard]] const Agent& helper_agent(int h, int f) const {
    return helper[static_cast<std::size_t>(h) * num_segments + f];
  }
};

/// Power-law step sizes α(n) = scale · n^(-exponent) for the critic
/// (utility) and the actor (policy).
struct LearnSchedule {
  double utility_scale = 1.0;
  double utility_exponent = 0.6;
  double policy_scale = 1.0;
  double policy_exponent = 0.85;

  static LearnSchedule from_config(const SimConfig& cfg);

  [[nodiscard]] double utility_rate(long n) const;
  [[nodiscard]] double policy_rate(long n) const;

  /// Closed-form check of the stochastic-approximation conditions: both
  /// series diverge, both squared series converge, and the actor step
  /// vanishes faster than the critic step. Returns one message per failure.
  [[nodiscard]] std::vector<std::string> violations() const;
};

std::array<double, 2> softmax_policy(double u0, double u1, double sharpness);

/// scale · [(1 - 2c) + hit_weight · legitimacy], legitimacy in {-1, 0, +1}.
double compute_reward(bool cached, int legitimacy, double hit_weight, double scale);

/// Critic step on the taken action only, then actor step toward the softmax
/// of the (pre-step) utilities; the policy is renormalized to sum to one.
void update_agent(Agent& agent, int action, double reward, double utility_rate, double policy_rate,
                  double sharpness);

/// Per-(node, segment) hit legitimacy from one scheduled slot.
///  eRRH s: a popular request served by s (directly or as the first hop of a
///    two-hop delivery) marks +1 if s caches the segment, else -1.
///  helper h: a popular request from any user inside h's service area,
///    served or not, marks +1 if h caches the segment, else -1.
/// success_events counts served popular requests delivered from the cache
/// of their serving node, i.e. the cache hits of the slot.
struct LegitimacySignals {
  std::vector<signed char> errh;    // [s * F + f]
  std::vector<signed char> helper;  // [h * F + f]
  long success_events = 0;
};

LegitimacySignals compute_legitimacy(const Schedule& schedule, const Topology& topo, const CacheState& cache,
                                     const RequestBatch& requests, int num_segments);

}  // namespace frsim
