#include "frsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace frsim {

double path_loss_db(double distance_m) {
  if (!(distance_m > 0.0)) throw std::domain_error("path_loss_db: distance must be positive");
  return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
}

double sample_gain(double distance_m, Rng& rng) {
  const double pl = path_loss_db(distance_m);
  std::normal_distribution<double> shadowing(0.0, kShadowingStdDb);
  std::exponential_distribution<double> fading(1.0);
  const double x = shadowing(rng);
  return std::pow(10.0, -(pl + x) / 10.0) * fading(rng);
}

double noise_power(const SimConfig& cfg) {
  return std::pow(10.0, cfg.noise_density / 10.0) * 1e-3 * cfg.rrb_bandwidth;
}

double rate_bps(double gain, double power, const SimConfig& cfg) {
  if (power <= 0.0 || gain <= 0.0) return 0.0;
  return cfg.rrb_bandwidth * std::log2(1.0 + gain * power / noise_power(cfg));
}

namespace {

double large_scale_gain(Point a, Point b) {
  const double d = std::max(distance(a, b), kMinLinkDistance);
  return std::pow(10.0, -path_loss_db(d) / 10.0);
}

}  // namespace

ChannelSampler::ChannelSampler(const Topology& topo, const SimConfig& cfg, std::uint64_t run_seed,
                               std::uint64_t phase)
    : num_users_(topo.num_users()),
      num_rrb_(cfg.num_rrb),
      num_errh_(static_cast<int>(topo.errh_pos.size())),
      num_sh_(static_cast<int>(topo.sh_pos.size())),
      relay_links_(cfg.helper_kind == HelperKind::CeRelay),
      errh_rng_(make_stream(run_seed, Stream::ChannelErrh, phase)),
      sh_rng_(make_stream(run_seed, Stream::ChannelHelper, phase)),
      link_rng_(make_stream(run_seed, Stream::ChannelRelayLink, phase)) {
  path_gain_errh_.resize(static_cast<std::size_t>(num_users_) * num_errh_);
  path_gain_sh_.resize(static_cast<std::size_t>(num_users_) * num_sh_);
  for (int u = 0; u < num_users_; ++u) {
    for (int s = 0; s < num_errh_; ++s)
      path_gain_errh_[static_cast<std::size_t>(u) * num_errh_ + s] = large_scale_gain(topo.user_pos[u], topo.errh_pos[s]);
    for (int h = 0; h < num_sh_; ++h)
      path_gain_sh_[static_cast<std::size_t>(u) * num_sh_ + h] = large_scale_gain(topo.user_pos[u], topo.sh_pos[h]);
  }
  if (relay_links_) {
    path_gain_link_.resize(num_sh_);
    for (int h = 0; h < num_sh_; ++h)
      path_gain_link_[h] = large_scale_gain(topo.sh_pos[h], topo.errh_pos[topo.anchor_errh_of_sh[h]]);
  }
}

void ChannelSampler::fill(std::vector<double>& out, const std::vector<double>& large_scale, int links, Rng& rng) {
  // Gain = path gain * 10^(-X/10) * E, X ~ N(0, 4 dB), E ~ Exp(1).
  constexpr double kDbToLn = std::numbers::ln10 / 10.0;
  std::normal_distribution<double> shadowing(0.0, kShadowingStdDb);
  std::exponential_distribution<double> fading(1.0);
  const int rows = links == 0 ? 0 : static_cast<int>(large_scale.size()) / links;
  out.resize(static_cast<std::size_t>(rows) * num_rrb_ * links);
  std::size_t i = 0;
  for (int row = 0; row < rows; ++row) {
    const double* base = large_scale.data() + static_cast<std::size_t>(row) * links;
    for (int r = 0; r < num_rrb_; ++r) {
      for (int n = 0; n < links; ++n) {
        const double x = shadowing(rng);
        out[i++] = base[n] * std::exp(-x * kDbToLn) * fading(rng);
      }
    }
  }
}

ChannelState ChannelSampler::sample(int slot_index) {
  ChannelState state;
  state.num_users = num_users_;
  state.num_rrb = num_rrb_;
  state.num_errh = num_errh_;
  state.num_sh = num_sh_;
  state.slot_index = slot_index;
  fill(state.gain_errh, path_gain_errh_, num_errh_, errh_rng_);
  fill(state.gain_sh, path_gain_sh_, num_sh_, sh_rng_);
  if (relay_links_) fill(state.gain_relay_link, path_gain_link_, 1, link_rng_);
  return state;
}

}  // namespace frsim
