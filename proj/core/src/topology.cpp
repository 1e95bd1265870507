#include "frsim/topology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace frsim {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Topology::errh_serves(int errh, int user) const {
  return errh_member[static_cast<std::size_t>(user) * errh_pos.size() + errh] != 0;
}

bool Topology::sh_serves(int sh, int user) const {
  return sh_member[static_cast<std::size_t>(user) * sh_pos.size() + sh] != 0;
}

namespace {

Point uniform_in_disc(Point center, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

std::vector<Point> place_spaced(int count, double spacing, Point center, double radius, Rng& rng,
                                const char* what) {
  std::vector<Point> placed;
  placed.reserve(count);
  for (int i = 0; i < count; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
      const Point p = uniform_in_disc(center, radius, rng);
      ok = true;
      for (const auto& q : placed) {
        if (distance(p, q) < spacing) {
          ok = false;
          break;
        }
      }
      if (ok) placed.push_back(p);
    }
    if (!ok)
      throw ConfigError(std::string("cannot place ") + what + " " + std::to_string(i) + " with spacing " +
                        std::to_string(spacing) + " m after " + std::to_string(kPlacementRetries) + " attempts");
  }
  return placed;
}

}  // namespace

void assign_service_areas(Topology& topo, double errh_radius, double sh_radius) {
  const int num_users = topo.num_users();
  const int s_count = static_cast<int>(topo.errh_pos.size());
  const int h_count = static_cast<int>(topo.sh_pos.size());

  topo.users_of_errh.assign(s_count, {});
  topo.users_of_sh.assign(h_count, {});
  topo.errh_member.assign(static_cast<std::size_t>(num_users) * s_count, 0);
  topo.sh_member.assign(static_cast<std::size_t>(num_users) * h_count, 0);

  for (int u = 0; u < num_users; ++u) {
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < s_count; ++s) {
      const double d = distance(topo.user_pos[u], topo.errh_pos[s]);
      if (d < best) {
        best = d;
        nearest = s;
      }
    }
    for (int s = 0; s < s_count; ++s) {
      if (s == nearest || distance(topo.user_pos[u], topo.errh_pos[s]) <= errh_radius) {
        topo.users_of_errh[s].push_back(u);
        topo.errh_member[static_cast<std::size_t>(u) * s_count + s] = 1;
      }
    }
    for (int h = 0; h < h_count; ++h) {
      if (distance(topo.user_pos[u], topo.sh_pos[h]) <= sh_radius) {
        topo.users_of_sh[h].push_back(u);
        topo.sh_member[static_cast<std::size_t>(u) * h_count + h] = 1;
      }
    }
  }

  topo.anchor_errh_of_sh.assign(h_count, 0);
  for (int h = 0; h < h_count; ++h) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < s_count; ++s) {
      const double d = distance(topo.sh_pos[h], topo.errh_pos[s]);
      if (d < best) {
        best = d;
        topo.anchor_errh_of_sh[h] = s;
      }
    }
  }
}

Topology generate_topology(const SimConfig& cfg, Rng& rng) {
  if (auto issues = check_config(cfg); !issues.empty()) throw ConfigError(std::move(issues));

  Topology topo;
  topo.errh_pos = place_spaced(cfg.num_errh, cfg.min_errh_spacing, topo.mbs_pos, cfg.cell_radius, rng, "eRRH");
  topo.user_pos.reserve(cfg.num_users);
  for (int u = 0; u < cfg.num_users; ++u) topo.user_pos.push_back(uniform_in_disc(topo.mbs_pos, cfg.cell_radius, rng));
  topo.sh_pos = place_spaced(cfg.helper_count(), cfg.min_sh_spacing, topo.mbs_pos, cfg.cell_radius, rng, "SH");
  assign_service_areas(topo, cfg.errh_service_radius, cfg.sh_service_radius);
  return topo;
}

}  // namespace frsim
