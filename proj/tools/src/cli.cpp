#include <CLI11.hpp>

#include <ostream>

#include "collapse/cli/commands.hpp"

namespace collapse::cli {

namespace {

void add_common(CLI::App* sub, CommonOptions& opt, bool with_config = true) {
  if (with_config) sub->add_option("--config", opt.config, "JSON config file");
  sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
  sub->add_option("--parallel", opt.parallel, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  sub->add_option("--resolution", opt.resolution, "Override n_v (n_u rescaled)")->check(CLI::Range(2, 1 << 20));
  sub->add_flag("--quiet", opt.quiet, "Suppress progress output");
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Characteristic evolution of spherically symmetric charged scalar collapse"};
  app.require_subcommand(1);

  CommonOptions opt;
  CriteriaArgs crit;
  int levels = 3;

  auto* run = app.add_subcommand("run", "Evolve one configuration and write the summary");
  add_common(run, opt);
  run->add_option("--resume", opt.resume, "Continue from a checkpoint file");

  auto* sweep = app.add_subcommand("sweep", "Run a 1-D or 2-D parameter sweep");
  add_common(sweep, opt);

  auto* criteria = app.add_subcommand("criteria", "Evaluate the collapse criteria for given scalars");
  add_common(criteria, opt, false);
  criteria->add_option("--eta0", crit.eta0, "Initial mass ratio eta0");
  criteria->add_option("--delta0", crit.delta0, "Initial radius ratio delta0");
  criteria->add_option("--epsilon", crit.epsilon, "Charge bound epsilon");
  criteria->add_option("--L", crit.big_l, "sup over the incoming cone of r|phi|^2");
  criteria->add_option("--omega", crit.omega, "Margin parameter in (0, 2/3)");
  criteria->add_option("--coupling", crit.coupling, "Charge coupling e");
  criteria->add_option("--dv", crit.dv, "Strip width v2 - v1");
  criteria->add_option("--r2", crit.r2_u0, "r(u0, v2)");
  criteria->add_option("--sup-phi1-sq", crit.sup_phi1_sq, "sup |phi|^2 along v = v1");
  criteria->add_flag("--supercharged", crit.supercharged, "Incoming data is supercharged");
  criteria->add_flag("--minkowskian-cbar", crit.minkowskian_cbar, "Incoming data is Minkowskian");
  criteria->add_flag("--tables", crit.tables, "Write E and g tables to the output directory");

  auto* convergence = app.add_subcommand("convergence", "Self-convergence study of a configuration");
  add_common(convergence, opt);
  convergence->add_option("--levels", levels, "Number of resolutions (>= 3)")->capture_default_str();

  auto* signmap = app.add_subcommand("signmap", "Write the trapped/MOTS/regular sign map");
  add_common(signmap, opt);

  auto* mink = app.add_subcommand("mink-check", "Check the evolution of flat data");
  add_common(mink, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return exit_config;
  }

  if (*run) return cmd_run(opt, out, err);
  if (*sweep) return cmd_sweep(opt, out, err);
  if (*criteria) return cmd_criteria(opt, crit, out, err);
  if (*convergence) return cmd_convergence(opt, levels, out, err);
  if (*signmap) return cmd_signmap(opt, out, err);
  return cmd_mink_check(opt, out, err);
}

}  // namespace collapse::cli
