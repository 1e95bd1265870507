#include "frsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frsim {

std::vector<Assignment> Schedule::all() const {
  std::vector<Assignment> out;
  out.reserve(served_count());
  out.insert(out.end(), assign_sh.begin(), assign_sh.end());
  out.insert(out.end(), assign_errh.begin(), assign_errh.end());
  out.insert(out.end(), assign_two_hop.begin(), assign_two_hop.end());
  return out;
}

double nominal_sh_power(const SimConfig& cfg) { return cfg.p_sh_total / cfg.sh_nominal_share; }

ConflictGraph build_graph(const Topology& topo, const CacheState& cache, const ChannelState& channel,
                          const RequestBatch& requests, const SimConfig& cfg) {
  ConflictGraph graph;
  const double noise = noise_power(cfg);
  const double bits = cfg.segment_bits;
  const double fetch = bits / cfg.fronthaul_rate;
  const double p_sh = nominal_sh_power(cfg);
  const double p_errh = cfg.p_errh_per_rrb;
  auto rate = [&](double gain, double power) {
    return cfg.rrb_bandwidth * std::log2(1.0 + gain * power / noise);
  };

  const int num_users = std::min<int>(channel.num_users, static_cast<int>(requests.requests.size()));
  const int num_rrb = channel.num_rrb;
  const int num_errh = channel.num_errh;
  const int num_sh = channel.num_sh;
  const bool relays = cfg.helper_kind == HelperKind::CeRelay && !channel.gain_relay_link.empty();

  std::vector<double> best_direct;
  for (int u = 0; u < num_users; ++u) {
    const auto& req = requests.requests[u];
    const bool popular = req.is_popular();
    const int f = popular ? *req.segment : -1;

    // Best direct eRRH weight per RRB; a two-hop vertex must beat it.
    best_direct.assign(num_rrb, std::numeric_limits<double>::infinity());
    for (int s = 0; s < num_errh; ++s) {
      if (!topo.errh_serves(s, u)) continue;
      const double extra = (popular && cache.errh.get(s, f)) ? 0.0 : fetch;
      for (int r = 0; r < num_rrb; ++r) {
        const double rt = rate(channel.errh(u, r, s), p_errh);
        if (!(rt > 0.0)) continue;
        const double w = bits / rt + extra;
        best_direct[r] = std::min(best_direct[r], w);
        graph.errh_vertices.push_back({u, r, s, -1, w, VertexKind::Errh});
      }
    }

    if (!popular) continue;
    for (int h = 0; h < num_sh; ++h) {
      if (!topo.sh_serves(h, u)) continue;
      if (cache.helper.get(h, f)) {
        for (int r = 0; r < num_rrb; ++r) {
          const double rt = rate(channel.sh(u, r, h), p_sh);
          if (!(rt > 0.0)) continue;
          graph.helper_vertices.push_back({u, r, h, -1, bits / rt, VertexKind::Helper});
        }
      } else if (relays) {
        const int anchor = topo.anchor_errh_of_sh[h];
        const double extra = cache.errh.get(anchor, f) ? 0.0 : fetch;
        for (int r = 0; r < num_rrb; ++r) {
          const double r1 = rate(channel.relay_link(h, r), p_errh);
          const double r2 = rate(channel.sh(u, r, h), p_sh);
          if (!(r1 > 0.0) || !(r2 > 0.0)) continue;
          const double w = bits / r1 + bits / r2 + extra;
          if (w < best_direct[r]) graph.errh_vertices.push_back({u, r, h, anchor, w, VertexKind::TwoHop});
        }
      }
    }
  }
  return graph;
}

namespace {

bool lighter(const Vertex& a, const Vertex& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  if (a.user != b.user) return a.user < b.user;
  if (a.rrb != b.rrb) return a.rrb < b.rrb;
  if (a.node != b.node) return a.node < b.node;
  return a.kind < b.kind;
}

}  // namespace

Schedule greedy_mwis(const ConflictGraph& graph) {
  Schedule out;
  int max_user = -1;
  int max_rrb = -1;
  int max_errh = -1;
  int max_sh = -1;
  for (const auto* set : {&graph.helper_vertices, &graph.errh_vertices}) {
    for (const auto& v : *set) {
      max_user = std::max(max_user, v.user);
      max_rrb = std::max(max_rrb, v.rrb);
      if (v.kind == VertexKind::Errh) max_errh = std::max(max_errh, v.node);
      else max_sh = std::max(max_sh, v.node);
      if (v.kind == VertexKind::TwoHop) max_errh = std::max(max_errh, v.anchor);
    }
  }
  out.num_rrb = max_rrb + 1;
  out.num_errh = max_errh + 1;
  out.num_sh = max_sh + 1;

  std::vector<std::uint8_t> user_used(max_user + 1, 0);
  std::vector<std::uint8_t> rrb_used(max_rrb + 1, 0);

  // Scanning in weight order and skipping conflicts is the same as repeatedly
  // taking the lightest surviving vertex and deleting its neighbours.
  auto sweep = [&](const std::vector<Vertex>& vertices) {
    std::vector<const Vertex*> order;
    order.reserve(vertices.size());
    for (const auto& v : vertices) order.push_back(&v);
    std::sort(order.begin(), order.end(), [](const Vertex* a, const Vertex* b) { return lighter(*a, *b); });
    for (const Vertex* v : order) {
      if (user_used[v->user] || rrb_used[v->rrb]) continue;
      user_used[v->user] = 1;
      rrb_used[v->rrb] = 1;
      const Assignment a{v->user, v->rrb, v->node, v->anchor, v->kind};
      switch (v->kind) {
        case VertexKind::Helper: out.assign_sh.push_back(a); break;
        case VertexKind::Errh: out.assign_errh.push_back(a); break;
        case VertexKind::TwoHop: out.assign_two_hop.push_back(a); break;
      }
    }
  };
  sweep(graph.helper_vertices);
  sweep(graph.errh_vertices);
  return out;
}

double waterfill_level(std::span<const double> gain_to_noise, double total_power) {
  double floor_max = 0.0;
  double floor_min = std::numeric_limits<double>::infinity();
  bool any = false;
  for (double a : gain_to_noise) {
    if (!(a > 0.0)) continue;
    any = true;
    floor_max = std::max(floor_max, 1.0 / a);
    floor_min = std::min(floor_min, 1.0 / a);
  }
  if (!any || !(total_power > 0.0)) return 0.0;

  auto spent = [&](double level) {
    double sum = 0.0;
    for (double a : gain_to_noise)
      if (a > 0.0) sum += std::max(0.0, level - 1.0 / a);
    return sum;
  };
  // Bisect until the bracket cannot shrink any further.
  double lo = floor_min;
  double hi = floor_max + total_power;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = spent(mid);
    if (s == total_power) return mid;
    (s < total_power ? lo : hi) = mid;
  }
  return std::abs(spent(lo) - total_power) <= std::abs(spent(hi) - total_power) ? lo : hi;
}

std::vector<double> waterfill(std::span<const double> gain_to_noise, double total_power) {
  std::vector<double> p(gain_to_noise.size(), 0.0);
  const double level = waterfill_level(gain_to_noise, total_power);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (gain_to_noise[i] > 0.0) p[i] = std::max(0.0, level - 1.0 / gain_to_noise[i]);
  return p;
}

Schedule allocate_power(Schedule schedule, const ChannelState& channel, const SimConfig& cfg) {
  schedule.num_rrb = channel.num_rrb;
  schedule.num_errh = channel.num_errh;
  schedule.num_sh = channel.num_sh;
  schedule.power_errh.assign(static_cast<std::size_t>(channel.num_errh) * channel.num_rrb, 0.0);
  schedule.power_sh.assign(static_cast<std::size_t>(channel.num_sh) * channel.num_rrb, 0.0);

  for (const auto& a : schedule.assign_errh)
    schedule.power_errh[static_cast<std::size_t>(a.node) * channel.num_rrb + a.rrb] = cfg.p_errh_per_rrb;
  for (const auto& a : schedule.assign_two_hop)
    schedule.power_errh[static_cast<std::size_t>(a.anchor) * channel.num_rrb + a.rrb] = cfg.p_errh_per_rrb;

  const double noise = noise_power(cfg);
  std::vector<std::vector<const Assignment*>> per_helper(channel.num_sh);
  for (const auto& a : schedule.assign_sh) per_helper[a.node].push_back(&a);
  for (const auto& a : schedule.assign_two_hop) per_helper[a.node].push_back(&a);

  std::vector<double> ratio;
  for (int h = 0; h < channel.num_sh; ++h) {
    const auto& list = per_helper[h];
    if (list.empty()) continue;
    ratio.clear();
    for (const auto* a : list) ratio.push_back(channel.sh(a->user, a->rrb, h) / noise);
    const auto p = waterfill(ratio, cfg.p_sh_total);
    for (std::size_t i = 0; i < list.size(); ++i)
      schedule.power_sh[static_cast<std::size_t>(h) * channel.num_rrb + list[i]->rrb] = p[i];
  }
  return schedule;
}

Schedule schedule_slot(const Topology& topo, const CacheState& cache, const ChannelState& channel,
                       const RequestBatch& requests, const SimConfig& cfg) {
  return allocate_power(greedy_mwis(build_graph(topo, cache, channel, requests, cfg)), channel, cfg);
}

}  // namespace frsim
