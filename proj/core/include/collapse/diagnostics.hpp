#pragma once

#include <limits>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "collapse/evolution.hpp"
#include "collapse/initial_data.hpp"

namespace collapse {

struct SliceDiagnostics {
  double eta = 0.0;
  double delta = 0.0;
  double x = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double sup_q2_over_r2 = 0.0;
};

SliceDiagnostics slice_diagnostics(const Solution& sol, int i_u);

/// Worst case of (bound - quantity) over the points where the premise held.
struct MonitorRecord {
  std::string name;
  std::string premise;
  bool premise_held = false;     // at least one point was scored
  long points = 0;
  double margin = std::numeric_limits<double>::infinity();
  double u = 0.0, v = 0.0;       // location of the worst margin
  double scale = 0.0;
  double tolerance = 0.0;
  int last_slice = -1;           // last slice scored

  bool ok() const { return !premise_held || margin >= -tolerance; }
};

struct MonitorReport {
  std::vector<MonitorRecord> monitors;
  double h = 0.0;                // strip-normalized spacing max(hu, hv)/(v2 - v1)
  int pre_mots_slices = 0;       // slices before the first MOTS
  int u_star_slices = 0;         // slices with x >= x*

  bool all_ok() const;
  const MonitorRecord* find(const std::string& name) const;
};

/// Runs every inequality monitor over the stored region. Monitors only score
/// points before the first MOTS and where their premises hold. The tolerance
/// is residual_warn_scale * h^2 * scale with scale the largest magnitude of
/// bound or quantity seen.
MonitorReport monitor_all(const Solution& sol, const CharacteristicData& data, const PhysicalParams& params);

nlohmann::json to_json(const MonitorReport& r);

}  // namespace collapse
