#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frsim/config.hpp"
#include "frsim/frame.hpp"
#include "frsim/metrics.hpp"

namespace frsim {

struct SweepPoint {
  int num_errh = 0;
  int num_sh = 0;
  double gamma = 0.0;
  CachingScheme scheme = CachingScheme::Learned;
  HelperKind helper = HelperKind::SmartHelper;
};

/// A sweep over the cartesian product of its axes. Every point runs
/// runs_per_point Monte Carlo runs; run i uses the same seed at every point.
struct Experiment {
  std::string name = "custom";
  SimConfig base;
  std::vector<int> errh_counts;
  std::vector<int> sh_counts;
  std::vector<double> gammas;
  std::vector<CachingScheme> schemes;
  std::vector<HelperKind> helpers;
  int runs_per_point = 1;
  std::uint64_t master_seed = 1;
  bool record_trace = false;

  /// Axes left empty take the single value found in `base`.
  [[nodiscard]] std::vector<SweepPoint> grid() const;
  [[nodiscard]] std::vector<std::string> violations() const;
};

SimConfig config_for(const Experiment& experiment, const SweepPoint& point);

std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

struct RunRecord {
  SweepPoint point;
  int run_index = 0;
  std::uint64_t seed = 0;
  RunSummary summary;
};

struct PointSummary {
  SweepPoint point;
  AggregateReport report;
};

/// Learning trace of one sweep point averaged over its runs.
struct TraceSeries {
  SweepPoint point;
  std::vector<LearningTracePoint> mean;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;          // point-major, then run index
  std::vector<PointSummary> summaries;  // one per grid point
  std::vector<TraceSeries> traces;      // learned-scheme points only
};

/// Executes every run. threads <= 0 uses the hardware concurrency. Results
/// are stored by (point, run) index so the output does not depend on the
/// thread count.
ExperimentResult run_experiment(const Experiment& experiment, int threads = 0);

/// A single point in isolation; reproduces the matching rows of a full sweep.
std::vector<RunRecord> run_point(const Experiment& experiment, const SweepPoint& point);

/// Desk-scale network used by the presets.
SimConfig desk_config();

std::vector<std::string> preset_names();

/// Builds a named preset over `base`. Empty for unknown names.
std::optional<Experiment> make_preset(std::string_view name, const SimConfig& base);

/// Writes runs.csv, summary.csv, learning_trace.csv (when traces exist) and
/// SVG plots into out_dir. Throws std::runtime_error if out_dir is unusable.
void write_results(const ExperimentResult& result, const std::filesystem::path& out_dir);

}  // namespace frsim
