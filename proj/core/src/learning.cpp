#include "frsim/learning.hpp"

#include <algorithm>
#include <cmath>

namespace frsim {

AgentBank::AgentBank(int s, int h, int f)
    : num_errh(s),
      num_helpers(h),
      num_segments(f),
      errh(static_cast<std::size_t>(s) * f),
      helper(static_cast<std::size_t>(h) * f) {}

LearnSchedule LearnSchedule::from_config(const SimConfig& cfg) {
  return {cfg.utility_step_scale, cfg.utility_step_exponent, cfg.policy_step_scale, cfg.policy_step_exponent};
}

double LearnSchedule::utility_rate(long n) const {
  return utility_scale * std::pow(static_cast<double>(std::max(n, 1L)), -utility_exponent);
}

double LearnSchedule::policy_rate(long n) const {
  return policy_scale * std::pow(static_cast<double>(std::max(n, 1L)), -policy_exponent);
}

std::vector<std::string> LearnSchedule::violations() const {
  // For a·n^-p with a > 0: the series diverges iff p <= 1 and the squared
  // series converges iff p > 1/2.
  std::vector<std::string> out;
  auto check = [&](const char* name, double scale, double exponent) {
    if (!(scale > 0.0)) out.push_back(std::string(name) + "_step_scale must be positive");
    if (!(exponent <= 1.0)) out.push_back(std::string(name) + "_step_exponent must be <= 1 so the steps are not summable");
    if (!(exponent > 0.5)) out.push_back(std::string(name) + "_step_exponent must exceed 0.5 so the squared steps are summable");
  };
  check("utility", utility_scale, utility_exponent);
  check("policy", policy_scale, policy_exponent);
  if (!(policy_exponent > utility_exponent))
    out.push_back("policy_step_exponent must exceed utility_step_exponent so the policy moves on the slower timescale");
  return out;
}

std::array<double, 2> softmax_policy(double u0, double u1, double sharpness) {
  const double a = sharpness * u0;
  const double b = sharpness * u1;
  const double m = std::max(a, b);
  const double e0 = std::exp(a - m);
  const double e1 = std::exp(b - m);
  const double z = e0 + e1;
  return {e0 / z, e1 / z};
}

double compute_reward(bool cached, int legitimacy, double hit_weight, double scale) {
  return scale * ((cached ? -1.0 : 1.0) + hit_weight * legitimacy);
}

void update_agent(Agent& agent, int action, double reward, double utility_rate, double policy_rate,
                  double sharpness) {
  const auto target = softmax_policy(agent.utility[0], agent.utility[1], sharpness);
  agent.utility[action] += utility_rate * (reward - agent.utility[action]);
  double p0 = agent.policy[0] + policy_rate * (target[0] - agent.policy[0]);
  double p1 = agent.policy[1] + policy_rate * (target[1] - agent.policy[1]);
  p0 = std::clamp(p0, 0.0, 1.0);
  p1 = std::clamp(p1, 0.0, 1.0);
  const double z = p0 + p1;
  if (z > 0.0) {
    agent.policy[0] = p0 / z;
    agent.policy[1] = 1.0 - agent.policy[0];
  } else {
    agent.policy = {0.5, 0.5};
  }
}

LegitimacySignals compute_legitimacy(const Schedule& schedule, const Topology& topo, const CacheState& cache,
                                     const RequestBatch& requests, int num_segments) {
  LegitimacySignals sig;
  const int num_errh = cache.errh.rows();
  const int num_helpers = cache.helper.rows();
  sig.errh.assign(static_cast<std::size_t>(num_errh) * num_segments, 0);
  sig.helper.assign(static_cast<std::size_t>(num_helpers) * num_segments, 0);

  auto mark_errh = [&](int s, int f) {
    const bool hit = cache.errh.get(s, f);
    sig.errh[static_cast<std::size_t>(s) * num_segments + f] = hit ? 1 : -1;
    return hit;
  };
  auto mark_helpers = [&](int u, int f) {
    for (int h = 0; h < num_helpers; ++h) {
      if (!topo.sh_serves(h, u)) continue;
      sig.helper[static_cast<std::size_t>(h) * num_segments + f] = cache.helper.get(h, f) ? 1 : -1;
    }
  };

  // Helpers see every popular request raised inside their service area,
  // served or not: an in-area request for a cached segment would have been
  // taken by the helper first.
  const int num_users = std::min<int>(topo.num_users(), static_cast<int>(requests.requests.size()));
  for (int u = 0; u < num_users; ++u) {
    const auto& req = requests.requests[u];
    if (req.is_popular()) mark_helpers(u, *req.segment);
  }
  for (const auto& a : schedule.assign_sh) {
    const auto& req = requests.requests[a.user];
    if (req.is_popular() && cache.helper.get(a.node, *req.segment)) ++sig.success_events;
  }
  for (const auto& a : schedule.assign_errh) {
    const auto& req = requests.requests[a.user];
    if (req.is_popular() && mark_errh(a.node, *req.segment)) ++sig.success_events;
  }
  for (const auto& a : schedule.assign_two_hop) {
    const auto& req = requests.requests[a.user];
    if (req.is_popular() && mark_errh(a.anchor, *req.segment)) ++sig.success_events;
  }
  return sig;
}

}  // namespace frsim
