#include "frsim/baselines.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace frsim {

double mpc_fraction(CachingScheme scheme) {
  switch (scheme) {
    case CachingScheme::Random: return 0.0;
    case CachingScheme::Hybrid20: return 0.2;
    case CachingScheme::Hybrid50: return 0.5;
    default: return 1.0;
  }
}

void fill_hybrid(double fraction, const Catalog& catalog, std::span<std::uint8_t> row, int cap, Rng& rng) {
  const int num_segments = catalog.size();
  if (cap > num_segments)
    throw ConfigError("cache capacity " + std::to_string(cap) + " exceeds num_segments " + std::to_string(num_segments));
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("fill_hybrid: fraction must lie in [0, 1]");
  std::fill(row.begin(), row.end(), std::uint8_t{0});
  if (cap <= 0) return;

  // The small slack keeps 0.2 * 15 from rounding up to 4.
  const int top = std::min(cap, static_cast<int>(std::ceil(fraction * cap - 1e-9)));
  for (int f = 0; f < top; ++f) row[f] = 1;

  // Partial Fisher-Yates over the remaining ranks.
  std::vector<int> rest(num_segments - top);
  std::iota(rest.begin(), rest.end(), top);
  const int extra = cap - top;
  for (int i = 0; i < extra; ++i) {
    std::uniform_int_distribution<int> pick(i, static_cast<int>(rest.size()) - 1);
    std::swap(rest[i], rest[pick(rng)]);
    row[rest[i]] = 1;
  }
}

void fill_cache_baseline(CachingScheme scheme, const Catalog& catalog, CacheState& cache, NodeRef node, int cap,
                         Rng& rng) {
  if (scheme == CachingScheme::Learned) throw std::invalid_argument("fill_cache_baseline: learned scheme has no fixed fill");
  auto& m = cache.of(node.kind);
  if (node.index < 0 || node.index >= m.rows()) throw std::out_of_range("fill_cache_baseline: node index out of range");
  auto row = m.row(node.index);
  const int num_segments = catalog.size();

  if (scheme == CachingScheme::UniformNonOverlap && node.kind == NodeKind::Helper) {
    if (cap > num_segments)
      throw ConfigError("cache capacity " + std::to_string(cap) + " exceeds num_segments " +
                        std::to_string(num_segments));
    std::fill(row.begin(), row.end(), std::uint8_t{0});
    const long start = static_cast<long>(node.index) * cap;
    for (int i = 0; i < cap; ++i) row[static_cast<std::size_t>((start + i) % num_segments)] = 1;
    return;
  }
  fill_hybrid(mpc_fraction(scheme), catalog, row, cap, rng);
}

RelayState::RelayState(int num_relays, int num_segments)
    : last_hit(static_cast<std::size_t>(num_relays) * num_segments, -1),
      relayed(num_relays, num_segments),
      ever_relayed(num_relays, num_segments) {}

void relay_step(RelayState& state, CacheState& cache, const Schedule& schedule, const RequestBatch& requests,
                int cap, long now) {
  const int num_segments = cache.helper.cols();
  state.relayed.clear();
  auto recency = [&](int h, int f) -> long& {
    return state.last_hit[static_cast<std::size_t>(h) * num_segments + f];
  };

  for (const auto& a : schedule.assign_sh) {
    const auto& req = requests.requests[a.user];
    if (req.is_popular() && cache.helper.get(a.node, *req.segment)) recency(a.node, *req.segment) = now;
  }

  for (const auto& a : schedule.assign_two_hop) {
    const auto& req = requests.requests[a.user];
    if (!req.is_popular()) continue;
    const int h = a.node;
    const int f = *req.segment;
    state.relayed.set(h, f, true);
    state.ever_relayed.set(h, f, true);
    if (cache.helper.get(h, f)) {
      recency(h, f) = now;
      continue;
    }
    if (cap <= 0) continue;
    if (cache.helper.row_count(h) >= cap) {
      int victim = -1;
      long oldest = std::numeric_limits<long>::max();
      for (int g = 0; g < num_segments; ++g) {
        if (cache.helper.get(h, g) && recency(h, g) < oldest) {
          oldest = recency(h, g);
          victim = g;
        }
      }
      if (victim >= 0) cache.helper.set(h, victim, false);
    }
    cache.helper.set(h, f, true);
    recency(h, f) = now;
  }
}

}  // namespace frsim
