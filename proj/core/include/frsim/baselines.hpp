#pragma once

#include <span>
#include <vector>

#include "frsim/cache.hpp"
#include "frsim/config.hpp"
#include "frsim/random.hpp"
#include "frsim/scheduler.hpp"
#include "frsim/traffic.hpp"

namespace frsim {

/// Share of capacity given to the most probable segments; the remainder is
/// filled uniformly at random from the other segments.
double mpc_fraction(CachingScheme scheme);

/// Fills one cache row for a non-learned scheme. Under UniformNonOverlap,
/// helper h takes popularity ranks h*cap .. (h+1)*cap - 1 (wrapping at F)
/// and eRRHs fall back to MPC. Throws ConfigError when cap > F.
void fill_cache_baseline(CachingScheme scheme, const Catalog& catalog, CacheState& cache, NodeRef node, int cap,
                         Rng& rng);

/// Hybrid fill with an arbitrary MPC share in [0, 1].
void fill_hybrid(double fraction, const Catalog& catalog, std::span<std::uint8_t> row, int cap, Rng& rng);

/// Per-relay recency bookkeeping for least-recently-hit eviction.
struct RelayState {
  std::vector<long> last_hit;      // [h * F + f], slot of last hit or insertion
  BinaryMatrix relayed;            // segments relayed during the latest slot
  BinaryMatrix ever_relayed;       // provenance record

  RelayState() = default;
  RelayState(int num_relays, int num_segments);
};

/// Cache bookkeeping after a slot: relay hits refresh recency; every
/// segment relayed over a two-hop path is inserted, evicting the
/// least-recently-hit entry (lower index on ties) when the cache is full.
void relay_step(RelayState& state, CacheState& cache, const Schedule& schedule, const RequestBatch& requests,
                int cap, long now);

}  // namespace frsim
