#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "collapse/cli/config.hpp"
#include "collapse/criteria.hpp"
#include "collapse/diagnostics.hpp"

namespace collapse::cli {

enum ExitCode { exit_ok = 0, exit_config = 1, exit_aborted = 2 };

struct CommonOptions {
  std::string config;
  std::string out = ".";
  int parallel = 0;          // 0 keeps the config value
  int resolution = 0;        // 0 keeps the config value
  bool quiet = false;
  std::string resume;        // checkpoint to continue from (run only)
};

/// Everything a run produces, before anything is written.
struct RunOutcome {
  RunConfig config;
  CharacteristicData data;
  Solution solution;
  CriteriaReport criteria;
  MonitorReport monitors;
};

RunOutcome execute(RunConfig cfg, const std::string& resume_path = {});

nlohmann::json summary_json(const RunOutcome& r);

/// Matrix over the stored slices: +1 regular, 0 MOTS band, -1 trapped.
void write_signmap(std::ostream& os, const Solution& sol);

int cmd_run(const CommonOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommonOptions& opt, std::ostream& out, std::ostream& err);
int cmd_signmap(const CommonOptions& opt, std::ostream& out, std::ostream& err);
int cmd_convergence(const CommonOptions& opt, int levels, std::ostream& out, std::ostream& err);
int cmd_mink_check(const CommonOptions& opt, std::ostream& out, std::ostream& err);

struct CriteriaArgs {
  std::optional<double> eta0, delta0;
  double epsilon = 0.0;
  double big_l = 0.0;
  double omega = 0.5;
  double coupling = 0.0;
  double dv = 0.0;
  double r2_u0 = 1.0;
  double sup_phi1_sq = 0.0;
  bool supercharged = false;
  bool minkowskian_cbar = false;
  bool tables = false;       // also write E and g tables to the output directory
};

int cmd_criteria(const CommonOptions& opt, const CriteriaArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace collapse::cli
