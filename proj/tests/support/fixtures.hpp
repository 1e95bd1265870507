#pragma once

#include <vector>

#include "frsim/channel.hpp"
#include "frsim/config.hpp"
#include "frsim/topology.hpp"
#include "frsim/traffic.hpp"

namespace fixture {

/// Hand-placed network; service areas follow the radii in cfg.
inline frsim::Topology place(const frsim::SimConfig& cfg, std::vector<frsim::Point> errh, std::vector<frsim::Point> sh,
                             std::vector<frsim::Point> users) {
  frsim::Topology t;
  t.errh_pos = std::move(errh);
  t.sh_pos = std::move(sh);
  t.user_pos = std::move(users);
  frsim::assign_service_areas(t, cfg.errh_service_radius, cfg.sh_service_radius);
  return t;
}

/// Channel with every gain set so that gain * power / noise equals `snr`
/// at the given powers.
inline frsim::ChannelState flat_channel(const frsim::SimConfig& cfg, int users, int rrbs, int errhs, int shs,
                                        double errh_snr, double sh_snr, double link_snr = 0.0) {
  const double noise = frsim::noise_power(cfg);
  frsim::ChannelState c;
  c.num_users = users;
  c.num_rrb = rrbs;
  c.num_errh = errhs;
  c.num_sh = shs;
  c.gain_errh.assign(static_cast<std::size_t>(users) * rrbs * errhs, errh_snr * noise / cfg.p_errh_per_rrb);
  c.gain_sh.assign(static_cast<std::size_t>(users) * rrbs * shs, sh_snr * noise / cfg.p_sh_total);
  if (link_snr > 0.0)
    c.gain_relay_link.assign(static_cast<std::size_t>(shs) * rrbs, link_snr * noise / cfg.p_errh_per_rrb);
  return c;
}

inline frsim::RequestBatch requests(std::vector<int> segments) {
  frsim::RequestBatch b;
  for (int f : segments) {
    frsim::Request r;
    if (f >= 0) r.segment = f;
    b.requests.push_back(r);
  }
  return b;
}

/// Small network that runs a full frame in well under a second.
inline frsim::SimConfig tiny_config() {
  frsim::SimConfig cfg;
  cfg.num_errh = 2;
  cfg.num_sh = 2;
  cfg.num_users = 20;
  cfg.num_rrb = 8;
  cfg.num_segments = 30;
  cfg.cache_cap_errh = 6;
  cfg.cache_cap_sh = 3;
  cfg.cell_radius = 600.0;
  cfg.learn_iters = 150;
  cfg.tx_slots_per_frame = 40;
  cfg.hit_weight = 20.0;
  cfg.utility_step_scale = 0.1;
  return cfg;
}

}  // namespace fixture
