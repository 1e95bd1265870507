#include "frsim/metrics.hpp"

#include <algorithm>

#include <cmath>

#include "frsim/report.hpp"

namespace frsim {

std::string to_string(ServedFrom from) {
  switch (from) {
    case ServedFrom::HelperCache: return "sh_cache";
    case ServedFrom::ErrhCache: return "errh_cache";
    case ServedFrom::Mbs: return "mbs";
  }
  return "unknown";
}

std::optional<double> user_delay(ServedFrom from, double rate, const SimConfig& cfg) {
  if (!(rate > 0.0)) return std::nullopt;
  double d = cfg.segment_bits / rate;
  if (from == ServedFrom::Mbs) d += cfg.segment_bits / cfg.fronthaul_rate;
  return d;
}

double SlotMetrics::delay_sum() const {
  double s = 0.0;
  for (const auto& u : served) s += u.delay;
  return s;
}

SlotMetrics evaluate_slot(const Schedule& schedule, const CacheState& cache, const ChannelState& channel,
                          const RequestBatch& requests, const SimConfig& cfg, int slot) {
  SlotMetrics m;
  m.slot = slot;
  m.requests = static_cast<int>(requests.requests.size());
  const double noise = noise_power(cfg);
  auto rate = [&](double gain, double power) {
    return power > 0.0 ? cfg.rrb_bandwidth * std::log2(1.0 + gain * power / noise) : 0.0;
  };

  for (const auto& a : schedule.all()) {
    const auto& req = requests.requests[a.user];
    ServedUser su;
    su.user = a.user;
    su.rrb = a.rrb;
    su.kind = a.kind;
    su.node = a.node;
    su.segment = req.segment;

    std::optional<double> delay;
    switch (a.kind) {
      case VertexKind::Helper: {
        su.power = schedule.sh_power(a.node, a.rrb);
        su.from = ServedFrom::HelperCache;
        delay = user_delay(su.from, rate(channel.sh(a.user, a.rrb, a.node), su.power), cfg);
        break;
      }
      case VertexKind::Errh: {
        su.power = schedule.errh_power(a.node, a.rrb);
        const bool hit = req.is_popular() && cache.errh.get(a.node, *req.segment);
        su.from = hit ? ServedFrom::ErrhCache : ServedFrom::Mbs;
        delay = user_delay(su.from, rate(channel.errh(a.user, a.rrb, a.node), su.power), cfg);
        break;
      }
      case VertexKind::TwoHop: {
        su.power = schedule.sh_power(a.node, a.rrb);
        const bool hit = req.is_popular() && cache.errh.get(a.anchor, *req.segment);
        su.from = hit ? ServedFrom::ErrhCache : ServedFrom::Mbs;
        const double first = rate(channel.relay_link(a.node, a.rrb), schedule.errh_power(a.anchor, a.rrb));
        delay = user_delay(su.from, rate(channel.sh(a.user, a.rrb, a.node), su.power), cfg);
        if (delay && first > 0.0) *delay += cfg.segment_bits / first;
        else delay.reset();
        break;
      }
    }
    if (!delay) {
      ++m.zero_rate;
      continue;
    }
    su.delay = *delay;
    if (su.from == ServedFrom::Mbs) m.fronthaul_bits += cfg.segment_bits;
    if (req.is_popular()) {
      ++m.popular_served;
      if (su.from != ServedFrom::Mbs) ++m.hits;
    }
    m.served.push_back(su);
  }
  return m;
}

double average_delay(std::span<const SlotMetrics> slots, int num_rrb) {
  if (slots.empty() || num_rrb <= 0) return 0.0;
  double total = 0.0;
  for (const auto& s : slots) total += s.delay_sum() / num_rrb;
  return total / static_cast<double>(slots.size());
}

RunSummary summarize_run(std::span<const SlotMetrics> slots, const SimConfig& cfg, double refresh_bits) {
  RunSummary r;
  r.slots = static_cast<int>(slots.size());
  r.refresh_bits = refresh_bits;
  r.avg_delay_s = average_delay(slots, cfg.num_rrb);
  double fronthaul = 0.0;
  long served = 0;
  long requests = 0;
  for (const auto& s : slots) {
    fronthaul += s.fronthaul_bits / cfg.slot_duration;
    r.hits += s.hits;
    r.popular_served += s.popular_served;
    served += static_cast<long>(s.served.size());
    requests += s.requests;
  }
  if (!slots.empty()) r.fronthaul_bps = fronthaul / static_cast<double>(slots.size());
  r.hit_rate = r.popular_served > 0 ? static_cast<double>(r.hits) / static_cast<double>(r.popular_served) : 0.0;
  r.service_rate = requests > 0 ? static_cast<double>(served) / static_cast<double>(requests) : 0.0;
  return r;
}

MetricStat mean_ci(std::span<const double> values) {
  MetricStat s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  // Shifted by the first value so that identical inputs give exactly zero spread.
  const double shift = values[0];
  double sum = 0.0;
  double sq = 0.0;
  for (double v : values) {
    sum += v - shift;
    sq += (v - shift) * (v - shift);
  }
  s.mean = shift + sum / s.n;
  if (s.n < 2) return s;
  s.stddev = std::sqrt(std::max(0.0, (sq - sum * sum / s.n) / (s.n - 1)));
  s.half_width = 1.959963984540054 * s.stddev / std::sqrt(static_cast<double>(s.n));
  return s;
}

bool ci_separated(const MetricStat& a, const MetricStat& b) { return a.hi() < b.lo() || b.hi() < a.lo(); }

AggregateReport aggregate_runs(std::span<const RunSummary> runs) {
  AggregateReport rep;
  rep.runs = static_cast<int>(runs.size());
  std::vector<double> v(runs.size());
  auto stat = [&](auto field) {
    for (std::size_t i = 0; i < runs.size(); ++i) v[i] = runs[i].*field;
    return mean_ci(v);
  };
  rep.avg_delay_s = stat(&RunSummary::avg_delay_s);
  rep.fronthaul_bps = stat(&RunSummary::fronthaul_bps);
  rep.hit_rate = stat(&RunSummary::hit_rate);
  rep.service_rate = stat(&RunSummary::service_rate);
  rep.refresh_bits = stat(&RunSummary::refresh_bits);
  return rep;
}

void write_schedule_rows(std::ostream& out, const SlotMetrics& slot, bool header) {
  if (header) out << "slot,user,node_type,node_id,rrb,power_watts,delay_seconds,served_from\n";
  for (const auto& u : slot.served) {
    const char* type = u.kind == VertexKind::Helper ? "helper" : u.kind == VertexKind::Errh ? "errh" : "two_hop";
    out << slot.slot << ',' << u.user << ',' << type << ',' << u.node << ',' << u.rrb << ','
        << format_number(u.power) << ',' << format_number(u.delay) << ',' << to_string(u.from) << '\n';
  }
}

}  // namespace frsim
