#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frsim {

enum class CachingScheme { Learned, Random, Mpc, Hybrid20, Hybrid50, UniformNonOverlap };
enum class HelperKind { SmartHelper, CeRelay, None };

std::string to_string(CachingScheme scheme);
std::string to_string(HelperKind kind);
std::optional<CachingScheme> parse_scheme(std::string_view text);
std::optional<HelperKind> parse_helper_kind(std::string_view text);

/// Every tunable of one simulated network. Defaults are the full-scale
/// settings (1.5 km cell, 10^4 segments, 50 RRBs); desk presets shrink them.
struct SimConfig {
  // Network size.
  int num_errh = 2;
  int num_sh = 2;
  int num_users = 60;
  int num_rrb = 50;

  // Content.
  int num_segments = 10000;
  double segment_bits = 1.0e7;  // 1.25 MBytes
  double zipf_gamma = 1.0;
  double popular_prob = 0.3;
  int cache_cap_errh = 200;
  int cache_cap_sh = 100;

  // Radio.
  double p_errh_per_rrb = 0.007;  // W
  double p_sh_total = 0.2;        // W
  double rrb_bandwidth = 180.0e3;  // Hz
  double noise_density = -174.0;   // dBm/Hz
  double fronthaul_rate = 1.0e8;   // bit/s, 12.5 MBytes/s
  /// SH vertex weights assume P̄_H / sh_nominal_share before water-filling.
  double sh_nominal_share = 4.0;

  // Geometry (meters).
  double cell_radius = 1500.0;
  double min_errh_spacing = 300.0;
  double min_sh_spacing = 150.0;
  double errh_service_radius = 800.0;
  double sh_service_radius = 300.0;
  double overhear_radius = 300.0;

  // Time frame.
  int learn_iters = 2000;
  int tx_slots_per_frame = 200;
  double slot_duration = 1.0;  // s

  // Reward and policy.
  double reward_scale_errh = 1.0;  // α_μ
  double reward_scale_sh = 1.0;    // α_ν
  double hit_weight = 2.0;         // c_l
  double policy_sharpness = 5.0;   // λ_p

  // Step sizes α(n) = scale · n^(-exponent), shared by eRRH and helper agents.
  double utility_step_scale = 1.0;
  double utility_step_exponent = 0.6;
  double policy_step_scale = 1.0;
  double policy_step_exponent = 0.85;

  CachingScheme caching_scheme = CachingScheme::Learned;
  HelperKind helper_kind = HelperKind::SmartHelper;

  std::uint64_t rng_seed = 1;

  /// Number of helper nodes that actually exist for this configuration.
  [[nodiscard]] int helper_count() const {
    return helper_kind == HelperKind::None ? 0 : num_sh;
  }
};

struct Diagnostic {
  std::string key;
  std::string message;
  int line = 0;  // 1-based source line, 0 when unknown
};

std::string format_diagnostic(const Diagnostic& d);

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Diagnostic> diagnostics);
  explicit ConfigError(const std::string& message);

  [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Invariant check. Empty result means the configuration is usable.
std::vector<Diagnostic> check_config(const SimConfig& cfg);

struct ConfigLoad {
  std::optional<SimConfig> config;
  std::vector<Diagnostic> diagnostics;
};

/// Parses a flat `key: value` YAML document whose keys are exactly the
/// SimConfig field names. Keys that are absent keep their default.
ConfigLoad parse_config(const std::string& text, SimConfig base = {});
ConfigLoad validate_config(const std::filesystem::path& path, SimConfig base = {});

/// Throws ConfigError with the collected diagnostics.
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

std::string dump_config(const SimConfig& cfg);

}  // namespace frsim
