#pragma once

#include <cstddef>
#include <vector>

#include "frsim/config.hpp"
#include "frsim/random.hpp"
#include "frsim/topology.hpp"

namespace frsim {

inline constexpr double kShadowingStdDb = 4.0;
/// Links shorter than this are evaluated at this distance.
inline constexpr double kMinLinkDistance = 1.0;

/// 128.1 + 37.6 log10(d / 1 km). Throws std::domain_error for d <= 0.
double path_loss_db(double distance_m);

/// Linear gain with log-normal shadowing and unit-mean Rayleigh power fading.
double sample_gain(double distance_m, Rng& rng);

/// Noise power over one RRB in watts.
double noise_power(const SimConfig& cfg);

/// Shannon rate in bit/s over one RRB; there is one user per RRB so the
/// SINR is an SNR.
double rate_bps(double gain, double power, const SimConfig& cfg);

/// Per-slot gains. Index layout is user-major: [(u * R + r) * nodes + node].
struct ChannelState {
  int num_users = 0;
  int num_rrb = 0;
  int num_errh = 0;
  int num_sh = 0;
  int slot_index = 0;
  std::vector<double> gain_errh;
  std::vector<double> gain_sh;
  /// CE-relay variant only: gain between helper h and its anchor eRRH on rrb r, [h * R + r].
  std::vector<double> gain_relay_link;

  [[nodiscard]] double errh(int u, int r, int s) const {
    return gain_errh[(static_cast<std::size_t>(u) * num_rrb + r) * num_errh + s];
  }
  [[nodiscard]] double sh(int u, int r, int h) const {
    return gain_sh[(static_cast<std::size_t>(u) * num_rrb + r) * num_sh + h];
  }
  [[nodiscard]] double relay_link(int h, int r) const {
    return gain_relay_link[static_cast<std::size_t>(h) * num_rrb + r];
  }
};

/// Draws ChannelState for successive slots of one run. Path loss is
/// evaluated once per link; shadowing and fading are redrawn every slot.
/// eRRH, helper and relay-link gains come from separate streams so that
/// adding helpers leaves the eRRH gains of a seed unchanged.
class ChannelSampler {
 public:
  ChannelSampler(const Topology& topo, const SimConfig& cfg, std::uint64_t run_seed,
                 std::uint64_t phase);

  ChannelState sample(int slot_index);

 private:
  void fill(std::vector<double>& out, const std::vector<double>& large_scale, int links, Rng& rng);

  int num_users_;
  int num_rrb_;
  int num_errh_;
  int num_sh_;
  bool relay_links_;
  std::vector<double> path_gain_errh_;  // [u * S + s]
  std::vector<double> path_gain_sh_;    // [u * H + h]
  std::vector<double> path_gain_link_;  // [h]
  Rng errh_rng_;
  Rng sh_rng_;
  Rng link_rng_;
};

}  // namespace frsim
