#pragma once

#include <span>
#include <vector>

#include "frsim/cache.hpp"
#include "frsim/channel.hpp"
#include "frsim/config.hpp"
#include "frsim/topology.hpp"
#include "frsim/traffic.hpp"

namespace frsim {

enum class VertexKind {
  Helper,  // helper serves from its own cache
  Errh,    // eRRH serves from cache or after an MBS fetch
  TwoHop,  // eRRH -> CE-relay -> user, relay variant only
};

/// One candidate (user, RRB, node) association. `node` is the helper index
/// for Helper/TwoHop vertices and the eRRH index for Errh vertices.
struct Vertex {
  int user = 0;
  int rrb = 0;
  int node = 0;
  int anchor = -1;  // TwoHop: the eRRH feeding the relay
  double weight = 0.0;  // delay in seconds
  VertexKind kind = VertexKind::Errh;
};

/// Two vertices conflict when they share a user or an RRB.
inline bool conflicts(const Vertex& a, const Vertex& b) {
  return a.user == b.user || a.rrb == b.rrb;
}

/// Edges are implicit (see conflicts()). Two-hop vertices compete with the
/// eRRH vertices in the second phase.
struct ConflictGraph {
  std::vector<Vertex> helper_vertices;
  std::vector<Vertex> errh_vertices;

  [[nodiscard]] std::size_t size() const { return helper_vertices.size() + errh_vertices.size(); }
};

struct Assignment {
  int user = 0;
  int rrb = 0;
  int node = 0;
  int anchor = -1;
  VertexKind kind = VertexKind::Errh;
};

struct Schedule {
  std::vector<Assignment> assign_errh;
  std::vector<Assignment> assign_sh;
  std::vector<Assignment> assign_two_hop;
  int num_rrb = 0;
  int num_errh = 0;
  int num_sh = 0;
  std::vector<double> power_errh;  // [s * R + r]
  std::vector<double> power_sh;    // [h * R + r]

  [[nodiscard]] double errh_power(int s, int r) const {
    return power_errh[static_cast<std::size_t>(s) * num_rrb + r];
  }
  [[nodiscard]] double sh_power(int h, int r) const {
    return power_sh[static_cast<std::size_t>(h) * num_rrb + r];
  }
  [[nodiscard]] std::size_t served_count() const {
    return assign_errh.size() + assign_sh.size() + assign_two_hop.size();
  }
  /// Helper assignments, then eRRH, then two-hop.
  [[nodiscard]] std::vector<Assignment> all() const;
};

/// Vertex weight of helper service under nominal power P̄_H / sh_nominal_share.
double nominal_sh_power(const SimConfig& cfg);

ConflictGraph build_graph(const Topology& topo, const CacheState& cache, const ChannelState& channel,
                          const RequestBatch& requests, const SimConfig& cfg);

/// Min-weight-first selection over helper vertices, then over the remaining
/// eRRH vertices; ties go to the lower (user, rrb, node). Fills assignments
/// only; power vectors are left empty.
Schedule greedy_mwis(const ConflictGraph& graph);

/// Water-filling over parallel channels with gain-to-noise ratios `a`:
/// maximizes sum log2(1 + a_r p_r) s.t. sum p_r <= total, p_r >= 0, by
/// bisection on the water level. Spends the full budget when any channel
/// exists.
std::vector<double> waterfill(std::span<const double> gain_to_noise, double total_power);

/// The water level reached by waterfill() for the same inputs.
double waterfill_level(std::span<const double> gain_to_noise, double total_power);

/// eRRHs transmit P̄_S on each RRB they use (including the first hop of a
/// two-hop delivery); each helper water-fills P̄_H across its RRBs.
Schedule allocate_power(Schedule schedule, const ChannelState& channel, const SimConfig& cfg);

Schedule schedule_slot(const Topology& topo, const CacheState& cache, const ChannelState& channel,
                       const RequestBatch& requests, const SimConfig& cfg);

}  // namespace frsim
