#pragma once

// Campaign configuration and machine-readable reports.
//
// Configs are flat key=value files with '#' comments; command-line flags
// override file values.  Reports are JSON or CSV with a provenance header
// (version, config hash, seed) and one row per check.  Row order and float
// formatting are deterministic, so identical config and seed produce byte
// identical reports for any worker count.

#include <qcr/measures.hpp>

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace qcr {

inline constexpr const char* version_string = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CampaignConfig {
  std::string group_type = "A";
  int rank = 2;  ///< suites sweep ranks 1..rank (matrix sizes 2..rank+1)
  std::vector<double> hbar_list = {0.1, 0.5, 1.0};
  int max_level = 5;
  int torus_points_per_dim = 0;  ///< 0 = smallest exact grid per integrand
  int hermite_nodes = 128;
  long mc_samples = 1000000;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;  ///< per-check overrides
  std::string out_path;                      ///< empty = stdout
  std::string format = "json";
  bool timings = false;  ///< record wall-clock in rows (breaks byte identity)
  std::string sample_dump_path;  ///< reduction suite: per-sample CSV dump
  std::string state_dump_path;   ///< roundtrip suite: sample state/image JSON
};

struct ReportRow {
  std::string suite;
  std::string case_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  std::string method;
  bool pass = false;
  double err = 0.0;  ///< integrator error estimate where applicable (SEM for MC)
  long nodes_or_samples = 0;
  double runtime_ms = 0.0;
};

/// Identity checked by each suite, emitted in the report header.
inline const std::map<std::string, std::string>& suite_descriptions() {
  static const std::map<std::string, std::string> d = {
      {"isometry",
       "squared-norm ratio of a class-function state to its alternating image equals "
       "exp(-hbar*|delta|^2); torus heat scaling preserves L2(T) norms"},
      {"weyl-integral",
       "SU(2) Haar norm of each character equals the torus integral of |sigma*chi|^2 / |W|"},
      {"orthogonality",
       "alternating orbit sums N_{mu+delta} are orthogonal under the torus heat measure"},
      {"reduction",
       "three regularity classifiers agree on zero-momentum samples; normalizer orientation "
       "signs equal Weyl signs"},
      {"det-identity",
       "det(Ad(z^-1)-I) on the torus complement equals (-1)^m sigma_C(z)^2; product and "
       "orbit-sum forms of sigma_C agree"},
      {"qcr-roundtrip",
       "coefficient round trip through the alternating map and back is exact"},
  };
  return d;
}

/// Default tolerance for a named check, with config overrides applied.
inline double check_tolerance(const CampaignConfig& cfg, const std::string& key, double fallback) {
  auto it = cfg.tolerances.find(key);
  return it == cfg.tolerances.end() ? fallback : it->second;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw ConfigError("bad number in list: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline void apply_config_entry(CampaignConfig& cfg, const std::string& key,
                               const std::string& value) {
  try {
    if (key == "group_type") {
      cfg.group_type = value;
    } else if (key == "rank") {
      cfg.rank = std::stoi(value);
    } else if (key == "hbar_list") {
      cfg.hbar_list = detail::parse_double_list(value);
    } else if (key == "max_level") {
      cfg.max_level = std::stoi(value);
    } else if (key == "torus_points_per_dim") {
      cfg.torus_points_per_dim = std::stoi(value);
    } else if (key == "hermite_nodes") {
      cfg.hermite_nodes = std::stoi(value);
    } else if (key == "mc_samples") {
      cfg.mc_samples = std::stol(value);
    } else if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "out") {
      cfg.out_path = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "timings") {
      cfg.timings = (value == "1" || value == "true" || value == "on");
    } else if (key == "sample_dump") {
      cfg.sample_dump_path = value;
    } else if (key == "state_dump") {
      cfg.state_dump_path = value;
    } else if (key.rfind("tol_", 0) == 0) {
      cfg.tolerances[key.substr(4)] = std::stod(value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad value for config key '" + key + "': '" + value + "'");
  }
}

inline CampaignConfig parse_config_file(const std::string& path, CampaignConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    apply_config_entry(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return base;
}

inline void validate_config(const CampaignConfig& cfg) {
  if (cfg.group_type != "A") throw ConfigError("group_type must be 'A'");
  if (cfg.rank < 1 || cfg.rank > 3) throw ConfigError("rank must be between 1 and 3");
  if (cfg.hbar_list.empty()) throw ConfigError("hbar_list must not be empty");
  for (double h : cfg.hbar_list) {
    if (!(h > 0.0)) throw ConfigError("hbar values must be positive");
  }
  if (cfg.max_level < 0) throw ConfigError("max_level must be nonnegative");
  if (cfg.torus_points_per_dim < 0) throw ConfigError("torus_points_per_dim must be nonnegative");
  if (cfg.hermite_nodes < 1 || cfg.hermite_nodes > 300) {
    throw ConfigError("hermite_nodes must be between 1 and 300");
  }
  if (cfg.mc_samples < 2) throw ConfigError("mc_samples must be at least 2");
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
  for (const auto& [key, tol] : cfg.tolerances) {
    if (tol < 0.0) throw ConfigError("tolerance overrides must be nonnegative");
  }
}

/// Canonical key=value rendering; the basis for the config hash.
inline std::string canonical_config(const CampaignConfig& cfg) {
  std::ostringstream out;
  out << "format=" << cfg.format << "\n";
  out << "group_type=" << cfg.group_type << "\n";
  out << "hbar_list=";
  for (size_t i = 0; i < cfg.hbar_list.size(); ++i) {
    if (i) out << ",";
    out << detail::format_double(cfg.hbar_list[i]);
  }
  out << "\n";
  out << "hermite_nodes=" << cfg.hermite_nodes << "\n";
  out << "max_level=" << cfg.max_level << "\n";
  out << "mc_samples=" << cfg.mc_samples << "\n";
  out << "rank=" << cfg.rank << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "timings=" << (cfg.timings ? 1 : 0) << "\n";
  for (const auto& [key, tol] : cfg.tolerances) {
    out << "tol_" << key << "=" << detail::format_double(tol) << "\n";
  }
  out << "torus_points_per_dim=" << cfg.torus_points_per_dim << "\n";
  return out.str();
}

inline std::string config_hash(const CampaignConfig& cfg) {
  // FNV-1a over the canonical form.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical_config(cfg)) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::json report_json(const CampaignConfig& cfg, const std::vector<ReportRow>& rows) {
  nlohmann::json meta{{"tool", "qcr"},
                      {"version", version_string},
                      {"config_hash", config_hash(cfg)},
                      {"seed", cfg.seed},
                      {"suites", suite_descriptions()}};
  nlohmann::json jrows = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    jrows.push_back({{"suite", r.suite},
                     {"case", r.case_id},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"rel_err", r.rel_err},
                     {"method", r.method},
                     {"pass", r.pass},
                     {"err", r.err},
                     {"nodes_or_samples", r.nodes_or_samples},
                     {"runtime_ms", r.runtime_ms}});
  }
  return nlohmann::json{{"meta", meta}, {"rows", jrows}};
}

inline std::string render_report(const CampaignConfig& cfg, const std::vector<ReportRow>& rows) {
  if (cfg.format == "json") {
    return report_json(cfg, rows).dump(2) + "\n";
  }
  std::ostringstream out;
  out << "# qcr-report version=" << version_string << " config_hash=" << config_hash(cfg)
      << " seed=" << cfg.seed << "\n";
  for (const auto& [id, desc] : suite_descriptions()) {
    out << "# suite " << id << ": " << desc << "\n";
  }
  out << "suite,case,lhs,rhs,rel_err,method,pass,err,nodes_or_samples,runtime_ms\n";
  for (const ReportRow& r : rows) {
    out << r.suite << ",\"" << r.case_id << "\"," << detail::format_double(r.lhs) << ","
        << detail::format_double(r.rhs) << "," << detail::format_double(r.rel_err) << ","
        << r.method << "," << (r.pass ? 1 : 0) << "," << detail::format_double(r.err) << ","
        << r.nodes_or_samples << "," << detail::format_double(r.runtime_ms) << "\n";
  }
  return out.str();
}

/// Opens an output file; a missing parent directory is a configuration
/// error, not an excuse to create one.
inline std::ofstream open_output_file(const std::string& path_text) {
  const std::filesystem::path path(path_text);
  if (path.has_parent_path() && !std::filesystem::is_directory(path.parent_path())) {
    throw ConfigError("output directory does not exist: " + path.parent_path().string());
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path_text);
  return out;
}

/// Writes the rendered report to the configured destination.
inline void write_report(const CampaignConfig& cfg, const std::vector<ReportRow>& rows,
                         std::ostream& stdout_stream) {
  const std::string text = render_report(cfg, rows);
  if (cfg.out_path.empty()) {
    stdout_stream << text;
    return;
  }
  std::ofstream out = open_output_file(cfg.out_path);
  out << text;
  if (!out) throw ConfigError("failed writing report to " + cfg.out_path);
}

}  // namespace qcr
