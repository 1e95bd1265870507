#include "frsim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "frsim/learning.hpp"
#include "frsim/report.hpp"

namespace frsim {

namespace {

using FieldRef = std::variant<int SimConfig::*, double SimConfig::*, std::uint64_t SimConfig::*,
                              CachingScheme SimConfig::*, HelperKind SimConfig::*>;

struct Field {
  const char* name;
  FieldRef ref;
};

const Field kFields[] = {
    {"num_errh", &SimConfig::num_errh},
    {"num_sh", &SimConfig::num_sh},
    {"num_users", &SimConfig::num_users},
    {"num_rrb", &SimConfig::num_rrb},
    {"num_segments", &SimConfig::num_segments},
    {"segment_bits", &SimConfig::segment_bits},
    {"zipf_gamma", &SimConfig::zipf_gamma},
    {"popular_prob", &SimConfig::popular_prob},
    {"cache_cap_errh", &SimConfig::cache_cap_errh},
    {"cache_cap_sh", &SimConfig::cache_cap_sh},
    {"p_errh_per_rrb", &SimConfig::p_errh_per_rrb},
    {"p_sh_total", &SimConfig::p_sh_total},
    {"rrb_bandwidth", &SimConfig::rrb_bandwidth},
    {"noise_density", &SimConfig::noise_density},
    {"fronthaul_rate", &SimConfig::fronthaul_rate},
    {"sh_nominal_share", &SimConfig::sh_nominal_share},
    {"cell_radius", &SimConfig::cell_radius},
    {"min_errh_spacing", &SimConfig::min_errh_spacing},
    {"min_sh_spacing", &SimConfig::min_sh_spacing},
    {"errh_service_radius", &SimConfig::errh_service_radius},
    {"sh_service_radius", &SimConfig::sh_service_radius},
    {"overhear_radius", &SimConfig::overhear_radius},
    {"learn_iters", &SimConfig::learn_iters},
    {"tx_slots_per_frame", &SimConfig::tx_slots_per_frame},
    {"slot_duration", &SimConfig::slot_duration},
    {"reward_scale_errh", &SimConfig::reward_scale_errh},
    {"reward_scale_sh", &SimConfig::reward_scale_sh},
    {"hit_weight", &SimConfig::hit_weight},
    {"policy_sharpness", &SimConfig::policy_sharpness},
    {"utility_step_scale", &SimConfig::utility_step_scale},
    {"utility_step_exponent", &SimConfig::utility_step_exponent},
    {"policy_step_scale", &SimConfig::policy_step_scale},
    {"policy_step_exponent", &SimConfig::policy_step_exponent},
    {"caching_scheme", &SimConfig::caching_scheme},
    {"helper_kind", &SimConfig::helper_kind},
    {"rng_seed", &SimConfig::rng_seed},
};

const Field* find_field(std::string_view name) {
  for (const auto& f : kFields)
    if (name == f.name) return &f;
  return nullptr;
}

// Returns an error message, or empty on success.
std::string assign(SimConfig& cfg, const Field& field, const YAML::Node& node) {
  if (!node.IsScalar()) return "expected a scalar value";
  const std::string text = node.Scalar();
  try {
    return std::visit(
        [&](auto member) -> std::string {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, CachingScheme>) {
            auto v = parse_scheme(text);
            if (!v) return "unknown caching scheme '" + text + "'";
            cfg.*member = *v;
          } else if constexpr (std::is_same_v<T, HelperKind>) {
            auto v = parse_helper_kind(text);
            if (!v) return "unknown helper kind '" + text + "'";
            cfg.*member = *v;
          } else {
            cfg.*member = node.as<T>();
          }
          return {};
        },
        field.ref);
  } catch (const YAML::BadConversion&) {
    return "cannot convert '" + text + "' to the field type";
  }
}

void require(std::vector<Diagnostic>& out, bool ok, const char* key, const std::string& message) {
  if (!ok) out.push_back({key, message, 0});
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::string to_string(CachingScheme scheme) {
  switch (scheme) {
    case CachingScheme::Learned: return "learned";
    case CachingScheme::Random: return "random";
    case CachingScheme::Mpc: return "mpc";
    case CachingScheme::Hybrid20: return "hybrid20";
    case CachingScheme::Hybrid50: return "hybrid50";
    case CachingScheme::UniformNonOverlap: return "uniform";
  }
  return "unknown";
}

std::string to_string(HelperKind kind) {
  switch (kind) {
    case HelperKind::SmartHelper: return "sh";
    case HelperKind::CeRelay: return "ce_relay";
    case HelperKind::None: return "none";
  }
  return "unknown";
}

std::optional<CachingScheme> parse_scheme(std::string_view text) {
  for (auto s : {CachingScheme::Learned, CachingScheme::Random, CachingScheme::Mpc, CachingScheme::Hybrid20,
                 CachingScheme::Hybrid50, CachingScheme::UniformNonOverlap})
    if (text == to_string(s)) return s;
  return std::nullopt;
}

std::optional<HelperKind> parse_helper_kind(std::string_view text) {
  for (auto k : {HelperKind::SmartHelper, HelperKind::CeRelay, HelperKind::None})
    if (text == to_string(k)) return k;
  return std::nullopt;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream os;
  if (d.line > 0) os << "line " << d.line << ": ";
  if (!d.key.empty()) os << d.key << ": ";
  os << d.message;
  return os.str();
}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string text = "invalid configuration";
  for (const auto& d : diagnostics) text += "\n  " + format_diagnostic(d);
  return text;
}
}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ConfigError::ConfigError(const std::string& message)
    : std::runtime_error(message), diagnostics_{{"", message, 0}} {}

std::vector<Diagnostic> check_config(const SimConfig& c) {
  std::vector<Diagnostic> out;
  require(out, c.num_errh >= 1, "num_errh", "must be at least 1");
  require(out, c.num_sh >= 0, "num_sh", "must be non-negative");
  require(out, c.num_users >= 0, "num_users", "must be non-negative");
  require(out, c.num_rrb >= 1, "num_rrb", "must be at least 1");
  require(out, c.num_segments >= 1, "num_segments", "must be at least 1");
  require(out, c.cache_cap_errh >= 1, "cache_cap_errh", "must be at least 1");
  require(out, c.cache_cap_sh >= 1, "cache_cap_sh", "must be at least 1");
  require(out, c.cache_cap_errh <= c.num_segments, "cache_cap_errh", "cache_cap_errh exceeds num_segments");
  require(out, c.cache_cap_sh <= c.num_segments, "cache_cap_sh", "cache_cap_sh exceeds num_segments");
  require(out, c.learn_iters >= 0, "learn_iters", "must be non-negative");
  require(out, c.tx_slots_per_frame >= 0, "tx_slots_per_frame", "must be non-negative");

  require(out, finite(c.popular_prob) && c.popular_prob >= 0.0 && c.popular_prob <= 1.0, "popular_prob",
          "popular_prob must lie in [0, 1]");
  require(out, finite(c.zipf_gamma) && c.zipf_gamma >= 0.0, "zipf_gamma", "must be finite and >= 0");

  auto positive = [&](double v, const char* key) { require(out, finite(v) && v > 0.0, key, "must be positive"); };
  positive(c.segment_bits, "segment_bits");
  positive(c.p_errh_per_rrb, "p_errh_per_rrb");
  positive(c.p_sh_total, "p_sh_total");
  positive(c.rrb_bandwidth, "rrb_bandwidth");
  positive(c.fronthaul_rate, "fronthaul_rate");
  positive(c.sh_nominal_share, "sh_nominal_share");
  positive(c.cell_radius, "cell_radius");
  positive(c.errh_service_radius, "errh_service_radius");
  positive(c.sh_service_radius, "sh_service_radius");
  positive(c.overhear_radius, "overhear_radius");
  positive(c.slot_duration, "slot_duration");
  positive(c.reward_scale_errh, "reward_scale_errh");
  positive(c.reward_scale_sh, "reward_scale_sh");

  require(out, finite(c.noise_density), "noise_density", "must be finite");
  require(out, finite(c.hit_weight), "hit_weight", "must be finite");
  require(out, finite(c.policy_sharpness) && c.policy_sharpness >= 0.0, "policy_sharpness",
          "must be finite and >= 0");
  require(out, finite(c.min_errh_spacing) && c.min_errh_spacing >= 0.0, "min_errh_spacing", "must be >= 0");
  require(out, finite(c.min_sh_spacing) && c.min_sh_spacing >= 0.0, "min_sh_spacing", "must be >= 0");
  require(out, c.min_sh_spacing <= c.min_errh_spacing, "min_sh_spacing",
          "min_sh_spacing exceeds min_errh_spacing");

  for (const auto& v : LearnSchedule::from_config(c).violations())
    out.push_back({"learning-rate schedule", v, 0});
  return out;
}

ConfigLoad parse_config(const std::string& text, SimConfig base) {
  ConfigLoad result;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    result.diagnostics.push_back({"", e.msg, e.mark.line + 1});
    return result;
  }
  if (root.IsNull()) {
    result.diagnostics = check_config(base);
    if (result.diagnostics.empty()) result.config = base;
    return result;
  }
  if (!root.IsMap()) {
    result.diagnostics.push_back({"", "top level must be a key: value mapping", root.Mark().line + 1});
    return result;
  }
  for (const auto& item : root) {
    const auto key = item.first.as<std::string>();
    const int line = item.first.Mark().line + 1;
    const Field* field = find_field(key);
    if (field == nullptr) {
      result.diagnostics.push_back({key, "unknown key", line});
      continue;
    }
    if (auto err = assign(base, *field, item.second); !err.empty())
      result.diagnostics.push_back({key, err, line});
  }
  if (!result.diagnostics.empty()) return result;
  result.diagnostics = check_config(base);
  if (result.diagnostics.empty()) result.config = base;
  return result;
}

ConfigLoad validate_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) return {std::nullopt, {{"", "cannot open " + path.string(), 0}}};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base);
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  auto loaded = validate_config(path, base);
  if (!loaded.config) throw ConfigError(std::move(loaded.diagnostics));
  return *loaded.config;
}

std::string dump_config(const SimConfig& cfg) {
  std::ostringstream os;
  for (const auto& field : kFields) {
    os << field.name << ": ";
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, double>)
            os << format_number(cfg.*member);
          else if constexpr (std::is_same_v<T, CachingScheme> || std::is_same_v<T, HelperKind>)
            os << to_string(cfg.*member);
          else
            os << cfg.*member;
        },
        field.ref);
    os << '\n';
  }
  return os.str();
}

}  // namespace frsim
