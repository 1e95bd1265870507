#include "frsim/frame.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace frsim {

namespace {

constexpr std::uint64_t kLearnPhase = 0;
constexpr std::uint64_t kTransmitPhase = 1;

}  // namespace

FrameSimulator::FrameSimulator(const SimConfig& cfg, const Topology& topo, const Catalog& catalog,
                               std::uint64_t run_seed)
    : cfg_(cfg),
      topo_(topo),
      catalog_(catalog),
      num_errh_(static_cast<int>(topo.errh_pos.size())),
      num_helpers_(static_cast<int>(topo.sh_pos.size())),
      num_segments_(catalog.size()),
      relay_variant_(cfg.helper_kind == HelperKind::CeRelay),
      cache_(num_errh_, num_helpers_, num_segments_),
      bank_(num_errh_, num_helpers_, num_segments_),
      steps_(LearnSchedule::from_config(cfg)),
      observed_(num_helpers_, num_segments_),
      relay_(num_helpers_, num_segments_),
      learn_channel_(topo, cfg, run_seed, kLearnPhase),
      tx_channel_(topo, cfg, run_seed, kTransmitPhase),
      learn_requests_(make_stream(run_seed, Stream::Requests, kLearnPhase)),
      tx_requests_(make_stream(run_seed, Stream::Requests, kTransmitPhase)),
      agent_rng_(make_stream(run_seed, Stream::Agents)),
      order_rng_(make_stream(run_seed, Stream::CacheOrder)),
      baseline_rng_(make_stream(run_seed, Stream::Baseline)),
      decisions_(num_segments_, 0),
      tie_break_(num_segments_, 0.0) {
  if (num_segments_ != cfg.num_segments) throw std::invalid_argument("FrameSimulator: catalog size differs from num_segments");
  if (topo.num_users() != cfg.num_users) throw std::invalid_argument("FrameSimulator: topology user count differs from num_users");

  overhears_.assign(static_cast<std::size_t>(topo.num_users()) * num_helpers_, 0);
  for (int u = 0; u < topo.num_users(); ++u)
    for (int h = 0; h < num_helpers_; ++h)
      overhears_[static_cast<std::size_t>(u) * num_helpers_ + h] =
          distance(topo.user_pos[u], topo.sh_pos[h]) <= cfg.overhear_radius;
}

std::vector<int> FrameSimulator::shuffled_order() {
  std::vector<int> rank(num_segments_);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), order_rng_);
  return rank;
}

void FrameSimulator::sample_actions() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto commit = [&](std::span<std::uint8_t> row, int cap, int chosen) {
    if (chosen > cap) {
      const auto order = shuffled_order();
      apply_decision(row, decisions_, cap, tie_break_, order);
    } else {
      apply_decision(row, decisions_, cap, tie_break_);
    }
  };

  for (int s = 0; s < num_errh_; ++s) {
    int chosen = 0;
    for (int f = 0; f < num_segments_; ++f) {
      const auto& a = bank_.errh_agent(s, f);
      tie_break_[f] = a.policy[1];
      decisions_[f] = unit(agent_rng_) < a.policy[1];
      chosen += decisions_[f];
    }
    commit(cache_.errh.row(s), cfg_.cache_cap_errh, chosen);
  }

  // Helpers may only keep what they hold or newly observed.
  for (int h = 0; h < num_helpers_; ++h) {
    int chosen = 0;
    for (int f = 0; f < num_segments_; ++f) {
      const auto& a = bank_.helper_agent(h, f);
      tie_break_[f] = a.policy[1];
      decisions_[f] = sh_eligible(f, h, observed_, cache_) && unit(agent_rng_) < a.policy[1];
      chosen += decisions_[f];
    }
    commit(cache_.helper.row(h), cfg_.cache_cap_sh, chosen);
  }
}

void FrameSimulator::update_helper_observations(const Schedule& schedule, const RequestBatch& requests) {
  observed_.clear();
  if (num_helpers_ == 0) return;
  if (relay_variant_) {
    for (const auto& a : schedule.assign_two_hop) {
      const auto& req = requests.requests[a.user];
      if (!req.is_popular()) continue;
      observed_.set(a.node, *req.segment, true);
      relay_.ever_relayed.set(a.node, *req.segment, true);
    }
    return;
  }
  for (const auto& a : schedule.assign_errh) {
    const auto& req = requests.requests[a.user];
    if (!req.is_popular()) continue;
    for (int h = 0; h < num_helpers_; ++h)
      if (overhears_[static_cast<std::size_t>(a.user) * num_helpers_ + h]) observed_.set(h, *req.segment, true);
  }
}

void FrameSimulator::opportunistic_helper_update() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int h = 0; h < num_helpers_; ++h) {
    int chosen = 0;
    bool changed = false;
    for (int f = 0; f < num_segments_; ++f) {
      const auto& a = bank_.helper_agent(h, f);
      tie_break_[f] = a.policy[1];
      decisions_[f] = cache_.helper.get(h, f);
      if (!decisions_[f] && observed_.get(h, f) && unit(agent_rng_) < a.policy[1]) {
        decisions_[f] = 1;
        changed = true;
      }
      chosen += decisions_[f];
    }
    if (!changed) continue;
    if (chosen > cfg_.cache_cap_sh) {
      const auto order = shuffled_order();
      apply_decision(cache_.helper.row(h), decisions_, cfg_.cache_cap_sh, tie_break_, order);
    } else {
      apply_decision(cache_.helper.row(h), decisions_, cfg_.cache_cap_sh, tie_break_);
    }
  }
}

LearningTracePoint FrameSimulator::learning_iteration() {
  const long n = ++bank_.iteration;
  const int slot = static_cast<int>(n - 1);
  sample_actions();

  const auto requests = draw_requests(catalog_, cfg_.num_users, cfg_.popular_prob, learn_requests_, slot);
  const auto channel = learn_channel_.sample(slot);
  const auto schedule = schedule_slot(topo_, cache_, channel, requests, cfg_);
  last_legitimacy_ = compute_legitimacy(schedule, topo_, cache_, requests, num_segments_);

  const double au = steps_.utility_rate(n);
  const double ap = steps_.policy_rate(n);
  LearningTracePoint tp;

  for (int s = 0; s < num_errh_; ++s) {
    for (int f = 0; f < num_segments_; ++f) {
      const bool c = cache_.errh.get(s, f);
      const int l = last_legitimacy_.errh[static_cast<std::size_t>(s) * num_segments_ + f];
      const double r = compute_reward(c, l, cfg_.hit_weight, cfg_.reward_scale_errh);
      update_agent(bank_.errh_agent(s, f), c ? 1 : 0, r, au, ap, cfg_.policy_sharpness);
      if (s == 0) tp.mean_reward_errh += r;
    }
  }
  for (int h = 0; h < num_helpers_; ++h) {
    for (int f = 0; f < num_segments_; ++f) {
      const bool c = cache_.helper.get(h, f);
      const int l = last_legitimacy_.helper[static_cast<std::size_t>(h) * num_segments_ + f];
      const double r = compute_reward(c, l, cfg_.hit_weight, cfg_.reward_scale_sh);
      update_agent(bank_.helper_agent(h, f), c ? 1 : 0, r, au, ap, cfg_.policy_sharpness);
      if (h == 0) tp.mean_reward_helper += r;
    }
  }
  update_helper_observations(schedule, requests);

  tp.mean_reward_errh /= num_segments_;
  tp.mean_reward_helper /= num_segments_;
  const int k_errh = std::min(cfg_.cache_cap_errh, num_segments_);
  const int k_sh = std::min(cfg_.cache_cap_sh, num_segments_);
  if (num_errh_ > 0 && k_errh > 0) {
    for (int f = 0; f < k_errh; ++f) tp.top_k_policy_errh += bank_.errh_agent(0, f).policy[1];
    tp.top_k_policy_errh /= k_errh;
  }
  if (num_helpers_ > 0 && k_sh > 0) {
    for (int f = 0; f < k_sh; ++f) tp.top_k_policy_helper += bank_.helper_agent(0, f).policy[1];
    tp.top_k_policy_helper /= k_sh;
  }
  return tp;
}

double FrameSimulator::commit_caches() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long stored = 0;
  for (int s = 0; s < num_errh_; ++s) {
    int chosen = 0;
    for (int f = 0; f < num_segments_; ++f) {
      const auto& a = bank_.errh_agent(s, f);
      tie_break_[f] = a.policy[1];
      decisions_[f] = unit(agent_rng_) < a.policy[1];
      chosen += decisions_[f];
    }
    if (chosen > cfg_.cache_cap_errh) {
      const auto order = shuffled_order();
      apply_decision(cache_.errh.row(s), decisions_, cfg_.cache_cap_errh, tie_break_, order);
    } else {
      apply_decision(cache_.errh.row(s), decisions_, cfg_.cache_cap_errh, tie_break_);
    }
    stored += cache_.errh.row_count(s);
  }
  return cfg_.segment_bits * static_cast<double>(stored);
}

double FrameSimulator::prefill_baseline(CachingScheme scheme) {
  cache_ = CacheState(num_errh_, num_helpers_, num_segments_);
  long stored = 0;
  for (int s = 0; s < num_errh_; ++s) {
    fill_cache_baseline(scheme, catalog_, cache_, {NodeKind::Errh, s}, cfg_.cache_cap_errh, baseline_rng_);
    stored += cache_.errh.row_count(s);
  }
  // CE-relays cannot cache proactively; they start empty under every scheme.
  if (!relay_variant_)
    for (int h = 0; h < num_helpers_; ++h)
      fill_cache_baseline(scheme, catalog_, cache_, {NodeKind::Helper, h}, cfg_.cache_cap_sh, baseline_rng_);
  return cfg_.segment_bits * static_cast<double>(stored);
}

SlotMetrics FrameSimulator::transmission_slot() {
  const auto channel = tx_channel_.sample(tx_slot_);
  const auto requests = draw_requests(catalog_, cfg_.num_users, cfg_.popular_prob, tx_requests_, tx_slot_);
  const auto schedule = schedule_slot(topo_, cache_, channel, requests, cfg_);
  auto m = evaluate_slot(schedule, cache_, channel, requests, cfg_, tx_slot_);

  if (relay_variant_) {
    relay_step(relay_, cache_, schedule, requests, cfg_.cache_cap_sh, tx_slot_);
  } else if (num_helpers_ > 0 && cfg_.caching_scheme == CachingScheme::Learned) {
    update_helper_observations(schedule, requests);
    opportunistic_helper_update();
  }
  ++tx_slot_;
  return m;
}

FrameOutcome FrameSimulator::run_frame(bool record_trace, const SlotCallback& on_slot) {
  FrameOutcome out;
  double refresh = 0.0;
  if (cfg_.caching_scheme == CachingScheme::Learned) {
    if (record_trace) out.trace.reserve(cfg_.learn_iters);
    for (int i = 0; i < cfg_.learn_iters; ++i) {
      const auto tp = learning_iteration();
      if (record_trace) out.trace.push_back(tp);
    }
    refresh = commit_caches();
  } else {
    refresh = prefill_baseline(cfg_.caching_scheme);
  }

  // Observations from shadow traffic do not carry into real slots.
  observed_.clear();
  relay_.relayed.clear();

  out.slots.reserve(cfg_.tx_slots_per_frame);
  for (int t = 0; t < cfg_.tx_slots_per_frame; ++t) {
    out.slots.push_back(transmission_slot());
    if (on_slot) on_slot(out.slots.back(), cache_);
  }
  out.summary = summarize_run(out.slots, cfg_, refresh);
  return out;
}

FrameOutcome simulate_run(const SimConfig& cfg, std::uint64_t run_seed, bool record_trace) {
  auto topo_rng = make_stream(run_seed, Stream::Topology);
  const auto topo = generate_topology(cfg, topo_rng);
  const auto catalog = build_catalog(cfg.num_segments, cfg.zipf_gamma);
  FrameSimulator sim(cfg, topo, catalog, run_seed);
  return sim.run_frame(record_trace);
}

}  // namespace frsim
