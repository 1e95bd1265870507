#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "frsim/cache.hpp"
#include "frsim/channel.hpp"
#include "frsim/config.hpp"
#include "frsim/scheduler.hpp"
#include "frsim/traffic.hpp"

namespace frsim {

enum class ServedFrom { HelperCache, ErrhCache, Mbs };

std::string to_string(ServedFrom from);

/// Download delay of one segment: B / rate, plus B / C_fh when it travels
/// over the fronthaul. Empty when the rate is zero (the user is counted as
/// unserved).
std::optional<double> user_delay(ServedFrom from, double rate, const SimConfig& cfg);

struct ServedUser {
  int user = 0;
  int rrb = 0;
  VertexKind kind = VertexKind::Errh;
  int node = 0;
  double power = 0.0;  // power on the access hop
  double delay = 0.0;
  ServedFrom from = ServedFrom::Mbs;
  std::optional<int> segment;
};

struct SlotMetrics {
  int slot = 0;
  std::vector<ServedUser> served;
  int zero_rate = 0;  // assigned but no usable rate
  double fronthaul_bits = 0.0;
  int hits = 0;
  int popular_served = 0;
  int requests = 0;

  [[nodiscard]] double delay_sum() const;
};

/// Realized per-user delays for a scheduled slot, using the post
/// water-filling powers.
SlotMetrics evaluate_slot(const Schedule& schedule, const CacheState& cache, const ChannelState& channel,
                          const RequestBatch& requests, const SimConfig& cfg, int slot);

/// Sum of served delays divided by the RRB count, averaged over slots.
double average_delay(std::span<const SlotMetrics> slots, int num_rrb);

struct RunSummary {
  double avg_delay_s = 0.0;
  double fronthaul_bps = 0.0;
  double hit_rate = 0.0;
  double service_rate = 0.0;
  /// Bits fetched over the fronthaul to refresh eRRH caches at frame start.
  double refresh_bits = 0.0;
  long hits = 0;
  long popular_served = 0;
  int slots = 0;
};

RunSummary summarize_run(std::span<const SlotMetrics> slots, const SimConfig& cfg, double refresh_bits);

struct MetricStat {
  double mean = 0.0;
  double stddev = 0.0;
  double half_width = 0.0;  // 95% normal approximation
  int n = 0;

  [[nodiscard]] double lo() const { return mean - half_width; }
  [[nodiscard]] double hi() const { return mean + half_width; }
};

MetricStat mean_ci(std::span<const double> values);

/// True when the two 95% intervals do not overlap.
bool ci_separated(const MetricStat& a, const MetricStat& b);

struct AggregateReport {
  MetricStat avg_delay_s;
  MetricStat fronthaul_bps;
  MetricStat hit_rate;
  MetricStat service_rate;
  MetricStat refresh_bits;
  int runs = 0;
};

AggregateReport aggregate_runs(std::span<const RunSummary> runs);

/// slot,user,node_type,node_id,rrb,power_watts,delay_seconds,served_from
void write_schedule_rows(std::ostream& out, const SlotMetrics& slot, bool header);

}  // namespace frsim
