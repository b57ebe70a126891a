#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "collapse/evolution.hpp"
#include "collapse/initial_data.hpp"
#include "collapse/profile.hpp"
#include "collapse/state.hpp"

namespace collapse::cli {

inline constexpr int schema_version = 1;

/// Output files, relative to the output directory. Empty means "not written".
struct OutputPaths {
  std::string summary = "summary.json";
  std::string slices;
  std::string signmap;
  std::string monitors;
  std::string checkpoint;

  std::vector<std::string> requested() const;
};

struct RunConfig {
  GridSpec grid;
  bool auto_u0 = true;       // u0 = -v1
  bool auto_u_end = true;    // u_end from the outgoing data
  bool auto_n_u = true;      // hu matched to hv
  PhysicalParams params;
  ProfileSpec profile_c;
  ProfileSpec profile_cbar;
  StopPolicy stop = StopPolicy::stop_at_first_mots;
  double mots_tolerance = -1.0;
  OutputPaths outputs;
};

/// Reads a JSON document, reporting syntax errors with line and column.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Strict parse: unknown keys and wrong types raise ConfigError naming the
/// dotted field. Sample files are resolved against `base_dir`.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {},
                           bool require_version = true);

/// Replaces the grid resolution: n_v = n, and n_u rescaled when it was given.
void override_resolution(RunConfig& cfg, int n);

/// Resolves the automatic grid entries and builds the characteristic data.
/// `cfg.grid` is updated to the grid actually used.
CharacteristicData prepare(RunConfig& cfg);

struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

struct SweepConfig {
  nlohmann::json base;
  std::filesystem::path base_dir;
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  int parallelism = 1;
  std::string table_path = "sweep.csv";

  std::size_t size() const { return axis1.values.size() * (axis2 ? axis2->values.size() : 1); }
};

SweepConfig parse_sweep_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// True for dotted paths naming a numeric leaf of a run config.
bool is_numeric_field(const std::string& path);

/// Copy of `base` with the numeric leaf at `path` set to `value`.
nlohmann::json with_field(const nlohmann::json& base, const std::string& path, double value);

}  // namespace collapse::cli
