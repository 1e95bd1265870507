#pragma once

#include <cstdint>
#include <vector>

#include "frsim/config.hpp"
#include "frsim/random.hpp"

namespace frsim {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

/// Static network for one run. Users belong to every eRRH within
/// errh_service_radius plus their nearest eRRH; to every SH within
/// sh_service_radius.
struct Topology {
  Point mbs_pos{};
  std::vector<Point> errh_pos;
  std::vector<Point> sh_pos;
  std::vector<Point> user_pos;
  std::vector<std::vector<int>> users_of_errh;
  std::vector<std::vector<int>> users_of_sh;
  /// Nearest eRRH of each SH; the anchor for CE-relay two-hop delivery.
  std::vector<int> anchor_errh_of_sh;
  /// Dense membership flags mirroring the sets above: [u * S + s], [u * H + h].
  std::vector<std::uint8_t> errh_member;
  std::vector<std::uint8_t> sh_member;

  [[nodiscard]] int num_users() const { return static_cast<int>(user_pos.size()); }
  [[nodiscard]] bool sh_serves(int sh, int user) const;
  [[nodiscard]] bool errh_serves(int errh, int user) const;
};

inline constexpr int kPlacementRetries = 100000;

/// Rejection-samples eRRHs, then users, then SHs uniformly over the disc, so
/// the eRRH and user layout for a seed does not depend on num_sh.
/// Throws ConfigError when spacing cannot be met within kPlacementRetries.
Topology generate_topology(const SimConfig& cfg, Rng& rng);

/// Recomputes service-area membership from positions.
void assign_service_areas(Topology& topo, double errh_radius, double sh_radius);

}  // namespace frsim
