#include "frsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "frsim/random.hpp"
#include "frsim/report.hpp"

namespace frsim {

std::vector<SweepPoint> Experiment::grid() const {
  const std::vector<HelperKind> hs = helpers.empty() ? std::vector{base.helper_kind} : helpers;
  const std::vector<CachingScheme> ss = schemes.empty() ? std::vector{base.caching_scheme} : schemes;
  const std::vector<int> es = errh_counts.empty() ? std::vector{base.num_errh} : errh_counts;
  const std::vector<int> shs = sh_counts.empty() ? std::vector{base.num_sh} : sh_counts;
  const std::vector<double> gs = gammas.empty() ? std::vector{base.zipf_gamma} : gammas;

  std::vector<SweepPoint> out;
  for (auto helper : hs)
    for (auto scheme : ss)
      for (int s : es)
        for (int h : shs)
          for (double g : gs) out.push_back({s, h, g, scheme, helper});
  return out;
}

std::vector<std::string> Experiment::violations() const {
  std::vector<std::string> out;
  if (runs_per_point < 1) out.push_back("runs per point must be at least 1");
  for (const auto& p : grid()) {
    for (const auto& d : check_config(config_for(*this, p))) {
      auto msg = format_diagnostic(d);
      if (std::find(out.begin(), out.end(), msg) == out.end()) out.push_back(std::move(msg));
    }
  }
  return out;
}

SimConfig config_for(const Experiment& experiment, const SweepPoint& point) {
  SimConfig cfg = experiment.base;
  cfg.num_errh = point.num_errh;
  cfg.num_sh = point.num_sh;
  cfg.zipf_gamma = point.gamma;
  cfg.caching_scheme = point.scheme;
  cfg.helper_kind = point.helper;
  cfg.rng_seed = experiment.master_seed;
  return cfg;
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(run_index)});
}

namespace {

struct JobOutput {
  RunSummary summary;
  std::vector<LearningTracePoint> trace;
};

JobOutput run_job(const Experiment& exp, const SweepPoint& point, int run_index) {
  const SimConfig cfg = config_for(exp, point);
  const bool trace = exp.record_trace && point.scheme == CachingScheme::Learned;
  auto outcome = simulate_run(cfg, run_seed(exp.master_seed, run_index), trace);
  return {outcome.summary, std::move(outcome.trace)};
}

std::vector<LearningTracePoint> mean_trace(const std::vector<JobOutput>& outputs, std::size_t first, int count) {
  std::vector<LearningTracePoint> mean;
  if (count <= 0) return mean;
  mean.resize(outputs[first].trace.size());
  for (int r = 0; r < count; ++r) {
    const auto& t = outputs[first + r].trace;
    for (std::size_t i = 0; i < mean.size() && i < t.size(); ++i) {
      mean[i].mean_reward_errh += t[i].mean_reward_errh;
      mean[i].mean_reward_helper += t[i].mean_reward_helper;
      mean[i].top_k_policy_errh += t[i].top_k_policy_errh;
      mean[i].top_k_policy_helper += t[i].top_k_policy_helper;
    }
  }
  for (auto& p : mean) {
    p.mean_reward_errh /= count;
    p.mean_reward_helper /= count;
    p.top_k_policy_errh /= count;
    p.top_k_policy_helper /= count;
  }
  return mean;
}

}  // namespace

ExperimentResult run_experiment(const Experiment& experiment, int threads) {
  if (auto bad = experiment.violations(); !bad.empty()) {
    std::vector<Diagnostic> diags;
    for (auto& m : bad) diags.push_back({"", std::move(m), 0});
    throw ConfigError(std::move(diags));
  }
  const auto points = experiment.grid();
  const int runs = experiment.runs_per_point;
  const std::size_t jobs = points.size() * static_cast<std::size_t>(runs);
  std::vector<JobOutput> outputs(jobs);

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(jobs, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs) return;
      try {
        outputs[j] = run_job(experiment, points[j / runs], static_cast<int>(j % runs));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs);
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.runs.reserve(jobs);
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<RunSummary> summaries;
    for (int r = 0; r < runs; ++r) {
      const std::size_t j = p * runs + r;
      result.runs.push_back({points[p], r, run_seed(experiment.master_seed, r), outputs[j].summary});
      summaries.push_back(outputs[j].summary);
    }
    result.summaries.push_back({points[p], aggregate_runs(summaries)});
    if (experiment.record_trace && points[p].scheme == CachingScheme::Learned)
      result.traces.push_back({points[p], mean_trace(outputs, p * runs, runs)});
  }
  return result;
}

std::vector<RunRecord> run_point(const Experiment& experiment, const SweepPoint& point) {
  std::vector<RunRecord> out;
  for (int r = 0; r < experiment.runs_per_point; ++r)
    out.push_back({point, r, run_seed(experiment.master_seed, r), run_job(experiment, point, r).summary});
  return out;
}

SimConfig desk_config() {
  SimConfig cfg;
  cfg.num_errh = 2;
  cfg.num_sh = 2;
  cfg.num_users = 60;
  cfg.num_rrb = 20;
  cfg.num_segments = 200;
  cfg.cache_cap_errh = 20;
  cfg.cache_cap_sh = 10;
  cfg.zipf_gamma = 1.0;
  cfg.learn_iters = 2000;
  cfg.tx_slots_per_frame = 200;
  // Sixty users on a 1.5 km disc leave a 300 m helper area nearly empty.
  cfg.cell_radius = 750.0;
  cfg.hit_weight = 60.0;
  cfg.utility_step_scale = 0.03;
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"learning-trace", "helpers-by-gamma", "node-counts", "relay-by-helpers", "relay-by-gamma", "schemes",
          "full-scale"};
}

std::optional<Experiment> make_preset(std::string_view name, const SimConfig& base) {
  Experiment e;
  e.name = std::string(name);
  e.base = base;
  e.master_seed = base.rng_seed;
  e.runs_per_point = 20;
  const std::vector<double> gamma_sweep{0.0, 0.25, 0.5, 0.75, 1.0};

  if (name == "learning-trace") {
    e.helpers = {HelperKind::SmartHelper, HelperKind::CeRelay};
    e.gammas = {0.5, 1.0};
    e.schemes = {CachingScheme::Learned};
    e.record_trace = true;
  } else if (name == "helpers-by-gamma") {
    e.sh_counts = {0, 2, 4};
    e.gammas = gamma_sweep;
    e.schemes = {CachingScheme::Learned};
  } else if (name == "node-counts") {
    e.errh_counts = {1, 2};
    e.sh_counts = {0, 2, 4};
    e.gammas = {0.5, 1.0};
    e.schemes = {CachingScheme::Learned};
  } else if (name == "relay-by-helpers") {
    e.helpers = {HelperKind::SmartHelper, HelperKind::CeRelay};
    e.sh_counts = {2, 4};
    e.schemes = {CachingScheme::Learned};
  } else if (name == "relay-by-gamma") {
    e.helpers = {HelperKind::SmartHelper, HelperKind::CeRelay};
    e.gammas = gamma_sweep;
    e.schemes = {CachingScheme::Learned};
  } else if (name == "schemes") {
    e.schemes = {CachingScheme::Learned, CachingScheme::Random, CachingScheme::Mpc, CachingScheme::Hybrid20,
                 CachingScheme::Hybrid50, CachingScheme::UniformNonOverlap};
    e.gammas = gamma_sweep;
  } else if (name == "full-scale") {
    e.errh_counts = {2, 4};
    e.sh_counts = {0, 2, 4, 8};
    e.gammas = gamma_sweep;
    e.schemes = {CachingScheme::Learned};
    e.runs_per_point = 2000;
  } else {
    return std::nullopt;
  }
  return e;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string point_label(const SweepPoint& p, bool scheme, bool helper, bool errh, bool sh, bool gamma) {
  std::string s;
  auto add = [&](const std::string& part) {
    if (!s.empty()) s += ' ';
    s += part;
  };
  if (scheme) add(to_string(p.scheme));
  if (helper) add(to_string(p.helper));
  if (errh) add("S=" + std::to_string(p.num_errh));
  if (sh) add("H=" + std::to_string(p.num_sh));
  if (gamma) add("gamma=" + format_number(p.gamma));
  return s.empty() ? "all" : s;
}

struct AxisUse {
  bool scheme = false, helper = false, errh = false, sh = false, gamma = false;
};

AxisUse varying_axes(const std::vector<PointSummary>& points) {
  std::set<CachingScheme> sc;
  std::set<HelperKind> hk;
  std::set<int> es, hs;
  std::set<double> gs;
  for (const auto& p : points) {
    sc.insert(p.point.scheme);
    hk.insert(p.point.helper);
    es.insert(p.point.num_errh);
    hs.insert(p.point.num_sh);
    gs.insert(p.point.gamma);
  }
  return {sc.size() > 1, hk.size() > 1, es.size() > 1, hs.size() > 1, gs.size() > 1};
}

// One series per combination of the non-x axes that actually vary.
void plot_against(const std::vector<PointSummary>& points, const std::filesystem::path& file, const std::string& title,
                  const std::string& x_label, const std::string& y_label, bool x_is_sh,
                  const MetricStat AggregateReport::*metric) {
  const auto use = varying_axes(points);
  std::map<std::tuple<int, int, int, int, double>, PlotSeries> series;
  std::vector<std::tuple<int, int, int, int, double>> order;
  for (const auto& ps : points) {
    const auto& p = ps.point;
    const auto key = std::make_tuple(static_cast<int>(p.helper), static_cast<int>(p.scheme), p.num_errh,
                                     x_is_sh ? -1 : p.num_sh, x_is_sh ? p.gamma : -1.0);
    auto [it, fresh] = series.try_emplace(key);
    if (fresh) {
      order.push_back(key);
      it->second.label = point_label(p, use.scheme, use.helper, use.errh, !x_is_sh && use.sh, x_is_sh && use.gamma);
    }
    const auto& stat = ps.report.*metric;
    it->second.x.push_back(x_is_sh ? p.num_sh : p.gamma);
    it->second.y.push_back(stat.mean);
    it->second.err.push_back(stat.half_width);
  }
  LinePlot plot{title, x_label, y_label, {}};
  for (const auto& k : order) plot.series.push_back(series[k]);
  auto out = open_out(file);
  write_svg(out, plot);
}

}  // namespace

void write_results(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());

  {
    auto out = open_out(out_dir / "runs.csv");
    out << "scheme,helper,num_errh,num_sh,gamma,run,seed,avg_delay_s,fronthaul_bps,hit_rate,service_rate,"
           "refresh_bits\n";
    for (const auto& r : result.runs) {
      const auto& p = r.point;
      const auto& s = r.summary;
      out << to_string(p.scheme) << ',' << to_string(p.helper) << ',' << p.num_errh << ',' << p.num_sh << ','
          << format_number(p.gamma) << ',' << r.run_index << ',' << r.seed << ',' << format_number(s.avg_delay_s)
          << ',' << format_number(s.fronthaul_bps) << ',' << format_number(s.hit_rate) << ','
          << format_number(s.service_rate) << ',' << format_number(s.refresh_bits) << '\n';
    }
  }
  {
    auto out = open_out(out_dir / "summary.csv");
    out << "scheme,helper,num_errh,num_sh,gamma,runs";
    for (const char* m : {"avg_delay_s", "fronthaul_bps", "hit_rate", "service_rate", "refresh_bits"})
      out << ',' << m << "_mean," << m << "_ci95_lo," << m << "_ci95_hi";
    out << '\n';
    for (const auto& ps : result.summaries) {
      const auto& p = ps.point;
      out << to_string(p.scheme) << ',' << to_string(p.helper) << ',' << p.num_errh << ',' << p.num_sh << ','
          << format_number(p.gamma) << ',' << ps.report.runs;
      for (const auto* m : {&ps.report.avg_delay_s, &ps.report.fronthaul_bps, &ps.report.hit_rate,
                            &ps.report.service_rate, &ps.report.refresh_bits})
        out << ',' << format_number(m->mean) << ',' << format_number(m->lo()) << ',' << format_number(m->hi());
      out << '\n';
    }
  }

  if (!result.traces.empty()) {
    // Rows keyed by (gamma, S, H); SH and CE-relay curves side by side.
    using Key = std::tuple<double, int, int>;
    std::map<Key, std::map<HelperKind, const TraceSeries*>> grouped;
    for (const auto& t : result.traces) grouped[{t.point.gamma, t.point.num_errh, t.point.num_sh}][t.point.helper] = &t;

    auto out = open_out(out_dir / "learning_trace.csv");
    out << "gamma,num_errh,num_sh,iteration,mean_reward_errh,mean_reward_sh,mean_reward_relay,top_k_policy_errh,"
           "top_k_policy_sh,top_k_policy_relay\n";
    for (const auto& [key, by_helper] : grouped) {
      auto get = [&](HelperKind k) -> const TraceSeries* {
        auto it = by_helper.find(k);
        return it == by_helper.end() ? nullptr : it->second;
      };
      const TraceSeries* sh = get(HelperKind::SmartHelper);
      const TraceSeries* relay = get(HelperKind::CeRelay);
      const TraceSeries* errh = sh ? sh : relay ? relay : get(HelperKind::None);
      std::size_t n = 0;
      for (const auto& [k, t] : by_helper) n = std::max(n, t->mean.size());
      for (std::size_t i = 0; i < n; ++i) {
        auto cell = [&](const TraceSeries* t, double LearningTracePoint::*f) {
          return t && i < t->mean.size() ? format_number(t->mean[i].*f) : std::string();
        };
        out << format_number(std::get<0>(key)) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ',' << i + 1
            << ',' << cell(errh, &LearningTracePoint::mean_reward_errh) << ','
            << cell(sh, &LearningTracePoint::mean_reward_helper) << ','
            << cell(relay, &LearningTracePoint::mean_reward_helper) << ','
            << cell(errh, &LearningTracePoint::top_k_policy_errh) << ','
            << cell(sh, &LearningTracePoint::top_k_policy_helper) << ','
            << cell(relay, &LearningTracePoint::top_k_policy_helper) << '\n';
      }
    }

    LinePlot plot{"Mean agent reward per learning iteration", "iteration", "mean reward", {}};
    for (const auto& t : result.traces) {
      PlotSeries s;
      s.label = (t.point.helper == HelperKind::CeRelay ? "CE-relay" : "SH") + std::string(" gamma=") +
                format_number(t.point.gamma);
      // Thin long traces so the SVG stays small.
      const std::size_t stride = std::max<std::size_t>(1, t.mean.size() / 400);
      for (std::size_t i = 0; i < t.mean.size(); i += stride) {
        s.x.push_back(static_cast<double>(i + 1));
        s.y.push_back(t.mean[i].mean_reward_helper);
      }
      plot.series.push_back(std::move(s));
    }
    auto svg = open_out(out_dir / "reward_vs_iteration.svg");
    write_svg(svg, plot);
  }

  const auto use = varying_axes(result.summaries);
  if (use.sh) {
    plot_against(result.summaries, out_dir / "delay_vs_helpers.svg", "Average delay vs number of helpers",
                 "helpers H", "average delay (s)", true, &AggregateReport::avg_delay_s);
    plot_against(result.summaries, out_dir / "load_vs_helpers.svg", "Fronthaul load vs number of helpers",
                 "helpers H", "fronthaul load (bit/s)", true, &AggregateReport::fronthaul_bps);
  }
  if (use.gamma) {
    plot_against(result.summaries, out_dir / "load_vs_gamma.svg", "Fronthaul load vs Zipf parameter", "gamma",
                 "fronthaul load (bit/s)", false, &AggregateReport::fronthaul_bps);
    plot_against(result.summaries, out_dir / "hit_rate_vs_gamma.svg", "Cache hit rate vs Zipf parameter", "gamma",
                 "cache hit rate", false, &AggregateReport::hit_rate);
    plot_against(result.summaries, out_dir / "delay_vs_gamma.svg", "Average delay vs Zipf parameter", "gamma",
                 "average delay (s)", false, &AggregateReport::avg_delay_s);
  }
}

}  // namespace frsim
