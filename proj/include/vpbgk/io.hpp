#pragma once

#include "vpbgk/harness.hpp"
#include "vpbgk/solver.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vpbgk {

/// A solver configuration with a level count for convergence studies.
struct StudyConfig {
    SolverConfig base;
    int levels = 2;
};

/// Configuration files hold either a single run or a study (a `levels` key is present).
using ParsedConfig = std::variant<SolverConfig, StudyConfig>;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses flat `key = value` text with `#` comments. Unknown or duplicate keys, missing
/// required keys and out-of-range values raise ConfigError naming the offending line.
/// Relative `ic_file` paths resolve against `base_dir`.
ParsedConfig parse_config_text(const std::string& text, const std::string& source_name = "<config>",
                               const std::filesystem::path& base_dir = {});
ParsedConfig parse_config(const std::filesystem::path& path);

/// Keys that every configuration must set.
const std::vector<std::string>& required_config_keys();

/// Flat key/value echo of a configuration (used by manifests).
std::map<std::string, std::string> config_echo(const SolverConfig& config);

/// CSV with header `n_x,n_v,metric,error,order`, numbers as %.4e, empty order on the finest row.
std::string format_report(const ConvergenceReport& report);
void emit_report(const ConvergenceReport& report, const std::filesystem::path& path);

/// CSV with header `x,rho,u,temp,e`.
std::string format_snapshot(const Snapshot& snapshot, const Grid& grid);
void emit_snapshot(const SimulationState& state, const Grid& grid, const std::filesystem::path& path);
void emit_snapshot(const Snapshot& snapshot, const Grid& grid, const std::filesystem::path& path);

/// Diagnostics records as CSV, one row per record.
void emit_diagnostics(const DiagnosticsLog& log, const std::vector<double>& q_list, const std::filesystem::path& path);

/// Binary full-f dump: 8-byte magic "VPBGKDF1", u64 n_x, u64 n_v (little-endian), then
/// n_x * (2 n_v + 1) little-endian doubles, i-major, j-minor, ghosts excluded.
inline constexpr char kDumpMagic[8] = {'V', 'P', 'B', 'G', 'K', 'D', 'F', '1'};
void write_distribution(const Distribution& f, const std::filesystem::path& path);
/// Reloads a dump; ghost rows are refreshed from the boundary rows.
Distribution read_distribution(const std::filesystem::path& path);

struct RunManifest {
    std::map<std::string, std::string> config;
    std::string version;
    std::string dt_policy;
    double wall_time_seconds = 0;
    std::vector<std::string> outputs;
    std::map<std::string, std::string> notes;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace vpbgk
