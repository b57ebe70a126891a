#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "collapse/initial_data.hpp"
#include "collapse/state.hpp"

namespace collapse {

enum class StopPolicy { stop_at_first_mots, run_to_u_star, run_to_end };
enum class RunStatus { completed, mots_found, trapped_found, r_floor, aborted };

const char* to_string(StopPolicy p);
const char* to_string(RunStatus s);
StopPolicy stop_policy_from_string(const std::string& s);

/// First slice on which some point has |dv r| <= tol (or below). `u` is the
/// linear interpolation in u of the zero of w at column j.
struct MotsRecord {
  double u = 0.0;
  double v = 0.0;
  int slice = -1;
  int j = -1;
  double x = 0.0;   // r2 / r2(u0), interpolated to u
};

struct SliceSeries {
  std::vector<double> u, eta, delta, x, m1, m2;
};

/// Per-slice sup-norms of discrete constraint residuals on interior slices.
struct ResidualSeries {
  std::vector<int> slice;
  std::vector<double> u, raychaudhuri_u, raychaudhuri_v, maxwell_u, mass_u, mass_v;
  double max_raychaudhuri_u = 0.0, max_raychaudhuri_v = 0.0, max_maxwell_u = 0.0, max_mass_u = 0.0, max_mass_v = 0.0;
};

struct Solution {
  GridSpec grid;                  // grid.n_u is the planned slice count
  PhysicalParams params;
  int n_slices = 0;               // slices actually stored
  std::vector<FieldPoint> fields; // u-major, n_slices * grid.n_v
  RunStatus status = RunStatus::completed;
  std::optional<MotsRecord> first_mots;
  int first_trapped_slice = -1;
  int failed_slice = -1;
  double mots_tolerance = 0.0;
  double r2_u0 = 0.0;
  double x_star = 0.0;
  SliceSeries series;
  ResidualSeries residuals;

  const FieldPoint& at(int i, int j) const { return fields[static_cast<std::size_t>(i) * grid.n_v + j]; }
  double u(int i) const { return grid.u(i); }
  double v(int j) const { return grid.v(j); }
};

using SliceObserver = std::function<void(int slice, double u, const std::vector<FieldPoint>&)>;

struct EvolveOptions {
  StopPolicy stop = StopPolicy::stop_at_first_mots;
  double mots_tolerance = -1.0;   // < 0 selects the default
  int max_slices = -1;            // < 0 means no limit
  SliceObserver on_slice;
};

enum class StepStatus { ok, r_floor, aborted };

struct StepResult {
  std::vector<FieldPoint> slice;
  StepStatus status = StepStatus::ok;
  int failed_column = -1;
};

/// Advances one u-slice. `cbar_point` supplies every field at (u + hu, v1).
StepResult step_slice(const std::vector<FieldPoint>& prev, const FieldPoint& cbar_point, double hu,
                      double hv, const PhysicalParams& params);

/// Default MOTS tolerance on dv r: 10 h^2 dv r(u0, v2) with h = 1/(n_v - 1).
double default_mots_tolerance(const CharacteristicData& data);

Solution evolve(const CharacteristicData& data, const EvolveOptions& options = {});
Solution evolve(const CharacteristicData& data, StopPolicy stop);

/// Stored state for restarting a run; slices are kept bit-exact.
struct Checkpoint {
  GridSpec grid;
  PhysicalParams params;
  int n_slices = 0;
  std::vector<FieldPoint> fields;
};

Checkpoint make_checkpoint(const Solution& sol, int n_slices = -1);
void write_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);

/// Continues a run from a checkpoint taken on the same data and grid.
Solution resume(const CharacteristicData& data, const Checkpoint& cp, const EvolveOptions& options = {});

struct ConvergenceResult {
  std::vector<int> resolutions;   // n_v per level
  std::vector<double> diff_r;     // sup |S_h - S_h/2| on the coarse grid
  std::vector<double> diff_phi;
  std::vector<double> order_r;    // log2 of consecutive difference ratios
  std::vector<double> order_phi;
  bool exact = false;             // differences at rounding level
  double order() const;           // finest-pair order over r and phi (min)
};

/// Self-convergence of (r, phi). Level k uses n_u = 2^k (n_u - 1) + 1 and
/// likewise for n_v. Runs use run_to_end and compare on common slices.
ConvergenceResult convergence_order(const ProfileSpec& profile_c, const ProfileSpec& profile_cbar,
                                    const GridSpec& grid, const PhysicalParams& params, int levels = 3);

}  // namespace collapse
