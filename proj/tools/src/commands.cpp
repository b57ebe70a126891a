#include "collapse/cli/commands.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "collapse/csv.hpp"

namespace collapse::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void ensure_writable(const fs::path& out_dir, const std::vector<std::string>& files) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("out", "cannot create '" + out_dir.string() + "': " + ec.message());
  for (const auto& f : files) {
    const fs::path dir = (out_dir / f).parent_path();
    if (!fs::is_directory(dir)) throw ConfigError("outputs", "directory '" + dir.string() + "' does not exist");
    if (::access(dir.c_str(), W_OK) != 0)
      throw ConfigError("outputs", "directory '" + dir.string() + "' is not writable");
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("outputs", "cannot write '" + path.string() + "'");
  return os;
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  if (!os) throw ConfigError("outputs", "write failed for '" + path.string() + "'");
}

RunConfig load_run_config(const CommonOptions& opt) {
  if (opt.config.empty()) throw ConfigError("config", "--config is required");
  const fs::path path(opt.config);
  RunConfig cfg = parse_run_config(load_json_file(path), path.parent_path());
  if (opt.resolution > 0) override_resolution(cfg, opt.resolution);
  return cfg;
}

json grid_json(const GridSpec& g) {
  return {{"u0", g.u0}, {"u_end", g.u_end}, {"v1", g.v1}, {"v2", g.v2}, {"n_u", g.n_u}, {"n_v", g.n_v}};
}

// Maps the usual failure modes onto exit codes; `body` returns the code.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
  }
  return exit_config;
}

int exit_for(RunStatus s) { return s == RunStatus::aborted ? exit_aborted : exit_ok; }

}  // namespace

RunOutcome execute(RunConfig cfg, const std::string& resume_path) {
  RunOutcome r;
  r.data = prepare(cfg);
  r.config = cfg;
  EvolveOptions opts;
  opts.stop = cfg.stop;
  opts.mots_tolerance = cfg.mots_tolerance;
  r.solution = resume_path.empty() ? evolve(r.data, opts) : resume(r.data, read_checkpoint(resume_path), opts);
  r.criteria = evaluate_criteria(r.data, r.data.params);
  r.monitors = monitor_all(r.solution, r.data, r.data.params);
  return r;
}

json summary_json(const RunOutcome& r) {
  const Solution& s = r.solution;
  const CharacteristicData& d = r.data;
  json j;
  j["schema_version"] = schema_version;
  j["status"] = to_string(s.status);
  j["stop_policy"] = to_string(r.config.stop);
  j["grid"] = grid_json(s.grid);
  j["params"] = {{"coupling", d.params.coupling},
                 {"omega", d.params.omega},
                 {"r_floor", d.params.r_floor},
                 {"residual_warn_scale", d.params.residual_warn_scale}};
  j["n_slices"] = s.n_slices;
  j["eta0"] = d.eta0;
  j["delta0"] = d.delta0;
  j["epsilon"] = d.epsilon;
  j["L"] = d.big_l;
  j["x_star"] = d.x_star;
  j["r2_u0"] = d.r2_u0;
  j["sup_phi1_sq"] = d.sup_phi1_sq;
  j["supercharged"] = d.supercharged;
  j["minkowskian_cbar"] = d.minkowskian_cbar;
  j["mots_tolerance"] = s.mots_tolerance;
  if (s.first_mots) {
    const MotsRecord& m = *s.first_mots;
    j["first_mots"] = {{"u", m.u}, {"v", m.v}, {"x", m.x}, {"slice", m.slice}, {"j", m.j}};
  } else {
    j["first_mots"] = nullptr;
  }
  j["first_trapped_slice"] = s.first_trapped_slice;
  j["failed_slice"] = s.failed_slice;
  const ResidualSeries& res = s.residuals;
  j["residuals"] = {{"raychaudhuri_u", res.max_raychaudhuri_u}, {"raychaudhuri_v", res.max_raychaudhuri_v}, {"maxwell_u", res.max_maxwell_u},
                    {"mass_u", res.max_mass_u}, {"mass_v", res.max_mass_v}};
  j["criteria"] = to_json(r.criteria);
  j["monitors"] = to_json(r.monitors);
  j["monitors_ok"] = r.monitors.all_ok();
  return j;
}

void write_signmap(std::ostream& os, const Solution& sol) {
  std::vector<std::string> cells{"u\\v"};
  for (int j = 0; j < sol.grid.n_v; ++j) cells.push_back(format_real(sol.v(j)));
  CsvWriter csv(os);
  csv.text_row(cells);
  for (int i = 0; i < sol.n_slices; ++i) {
    cells.assign(1, format_real(sol.u(i)));
    for (int j = 0; j < sol.grid.n_v; ++j) {
      switch (classify_point(sol.at(i, j), sol.mots_tolerance)) {
        case PointClass::regular: cells.emplace_back("1"); break;
        case PointClass::mots: cells.emplace_back("0"); break;
        case PointClass::trapped: cells.emplace_back("-1"); break;
      }
    }
    csv.text_row(cells);
  }
}

int cmd_run(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(opt);
    const fs::path dir(opt.out);
    ensure_writable(dir, cfg.outputs.requested());
    const RunOutcome r = execute(cfg, opt.resume);
    const Solution& s = r.solution;

    write_text(dir / cfg.outputs.summary, summary_json(r).dump(2) + "\n");
    if (!cfg.outputs.monitors.empty()) write_text(dir / cfg.outputs.monitors, to_json(r.monitors).dump(2) + "\n");
    if (!cfg.outputs.slices.empty()) {
      auto os = open_out(dir / cfg.outputs.slices);
      write_slice_header(os);
      std::vector<double> v(s.grid.n_v);
      for (int j = 0; j < s.grid.n_v; ++j) v[j] = s.v(j);
      for (int i = 0; i < s.n_slices; ++i) {
        const auto first = s.fields.begin() + static_cast<std::ptrdiff_t>(i) * s.grid.n_v;
        write_slice_rows(os, s.u(i), v, std::vector<FieldPoint>(first, first + s.grid.n_v));
      }
    }
    if (!cfg.outputs.signmap.empty()) {
      auto os = open_out(dir / cfg.outputs.signmap);
      write_signmap(os, s);
    }
    if (!cfg.outputs.checkpoint.empty()) write_checkpoint((dir / cfg.outputs.checkpoint).string(), make_checkpoint(s));

    if (!opt.quiet) {
      out << "status " << to_string(s.status) << "  eta0 " << format_real(r.data.eta0) << "  delta0 "
          << format_real(r.data.delta0) << "  slices " << s.n_slices;
      if (s.first_mots)
        out << "  first MOTS at u=" << format_real(s.first_mots->u) << " v=" << format_real(s.first_mots->v)
            << " x=" << format_real(s.first_mots->x);
      out << "  monitors " << (r.monitors.all_ok() ? "ok" : "VIOLATED") << '\n';
    }
    if (s.status == RunStatus::aborted) err << "run aborted at slice " << s.failed_slice << '\n';
    return exit_for(s.status);
  });
}

int cmd_signmap(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(opt);
    const std::string name = cfg.outputs.signmap.empty() ? "signmap.csv" : cfg.outputs.signmap;
    const fs::path dir(opt.out);
    ensure_writable(dir, {name});
    RunConfig resolved = cfg;
    const CharacteristicData data = prepare(resolved);
    EvolveOptions eo;
    eo.stop = cfg.stop;
    eo.mots_tolerance = cfg.mots_tolerance;
    const Solution sol = evolve(data, eo);
    if (sol.status == RunStatus::aborted) {
      err << "run aborted at slice " << sol.failed_slice << "; no sign map written\n";
      return static_cast<int>(exit_aborted);
    }
    auto os = open_out(dir / name);
    write_signmap(os, sol);
    if (!opt.quiet) out << "wrote " << (dir / name).string() << " (" << sol.n_slices << " x " << sol.grid.n_v << ")\n";
    return static_cast<int>(exit_ok);
  });
}

int cmd_convergence(const CommonOptions& opt, int levels, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_run_config(opt);
    const fs::path dir(opt.out);
    ensure_writable(dir, {"convergence.json"});
    prepare(cfg);
    const ConvergenceResult c = convergence_order(cfg.profile_c, cfg.profile_cbar, cfg.grid, cfg.params, levels);
    json j{{"schema_version", schema_version},
           {"grid", grid_json(cfg.grid)},
           {"resolutions", c.resolutions},
           {"diff_r", c.diff_r},
           {"diff_phi", c.diff_phi},
           {"order_r", c.order_r},
           {"order_phi", c.order_phi},
           {"exact", c.exact},
           {"order", c.order()}};
    write_text(dir / "convergence.json", j.dump(2) + "\n");
    if (!opt.quiet) out << j.dump(2) << '\n';
    return static_cast<int>(exit_ok);
  });
}

int cmd_mink_check(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg;
    if (!opt.config.empty()) {
      cfg = load_run_config(opt);
      if (!cfg.profile_c.identically_zero() || !cfg.profile_cbar.identically_zero() || cfg.params.coupling != 0.0)
        throw ConfigError("profile_c", "mink-check needs zero profiles and zero coupling");
    } else {
      cfg.grid = GridSpec{-1.0, -0.5, 1.0, 2.0, 129, 129};
      cfg.auto_u0 = cfg.auto_u_end = cfg.auto_n_u = false;
      if (opt.resolution > 0) cfg.grid.n_u = cfg.grid.n_v = opt.resolution;
    }
    cfg.stop = StopPolicy::run_to_end;
    const auto t0 = std::chrono::steady_clock::now();
    const CharacteristicData data = prepare(cfg);
    const Solution sol = evolve(data, StopPolicy::run_to_end);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    double max_m = 0.0, max_dr = 0.0;
    for (int i = 0; i < sol.n_slices; ++i)
      for (int j = 0; j < sol.grid.n_v; ++j) {
        const FieldPoint& p = sol.at(i, j);
        max_m = std::max(max_m, std::abs(p.mass));
        max_dr = std::max(max_dr, std::abs(p.r - 0.5 * (sol.v(j) - (sol.u(i) - sol.grid.u0))));
      }
    const bool pass = sol.status == RunStatus::completed && !sol.first_mots && max_m <= 1e-10 && max_dr <= 1e-10;
    json j{{"status", to_string(sol.status)},
           {"grid", grid_json(sol.grid)},
           {"max_abs_mass", max_m},
           {"max_abs_r_error", max_dr},
           {"mots_found", sol.first_mots.has_value()},
           {"seconds", seconds},
           {"pass", pass}};
    if (!opt.quiet) out << j.dump(2) << '\n';
    return static_cast<int>(pass ? exit_ok : exit_aborted);
  });
}

int cmd_criteria(const CommonOptions& opt, const CriteriaArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!a.eta0) throw ConfigError("eta0", "required");
    if (!a.delta0) throw ConfigError("delta0", "required");
    CriteriaInputs in;
    in.eta0 = *a.eta0;
    in.delta0 = *a.delta0;
    in.epsilon = a.epsilon;
    in.big_l = a.big_l;
    in.omega = a.omega;
    in.coupling = a.coupling;
    in.dv = a.dv;
    in.r2_u0 = a.r2_u0;
    in.sup_phi1_sq = a.sup_phi1_sq;
    in.supercharged = a.supercharged;
    in.minkowskian_cbar = a.minkowskian_cbar;
    const CriteriaReport rep = evaluate_criteria(in);
    out << to_json(rep).dump(2) << '\n';
    if (a.tables) {
      const fs::path dir(opt.out);
      ensure_writable(dir, {"e_table.csv", "g_table.csv"});
      std::vector<double> deltas, omegas;
      for (int k = 1; k <= 30; ++k) deltas.push_back(0.01 * k);
      for (int k = 1; k <= 6; ++k) omegas.push_back(0.1 * k);
      auto e = open_out(dir / "e_table.csv");
      write_e_table(e, deltas);
      auto g = open_out(dir / "g_table.csv");
      write_g_table(g, deltas, omegas, a.epsilon);
    }
    return static_cast<int>(exit_ok);
  });
}

int cmd_sweep(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.config.empty()) throw ConfigError("config", "--config is required");
    const fs::path path(opt.config);
    const SweepConfig sw = parse_sweep_config(load_json_file(path), path.parent_path());
    const int threads = opt.parallel > 0 ? opt.parallel : sw.parallelism;
    const fs::path dir(opt.out);
    ensure_writable(dir, {sw.table_path});

    struct Point {
      double a1 = 0.0, a2 = 0.0;
      RunConfig cfg;
    };
    std::vector<Point> points;
    const std::size_t n2 = sw.axis2 ? sw.axis2->values.size() : 1;
    for (double a1 : sw.axis1.values)
      for (std::size_t k = 0; k < n2; ++k) {
        Point p;
        p.a1 = a1;
        json j = with_field(sw.base, sw.axis1.path, a1);
        if (sw.axis2) {
          p.a2 = sw.axis2->values[k];
          j = with_field(j, sw.axis2->path, p.a2);
        }
        p.cfg = parse_run_config(j, sw.base_dir, false);
        if (opt.resolution > 0) override_resolution(p.cfg, opt.resolution);
        points.push_back(std::move(p));
      }

    struct Row {
      std::vector<double> numbers;
      std::string status;
      std::string verdicts[3];
      std::string monitors;
    };
    std::vector<Row> rows(points.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    auto worker = [&] {
      for (std::size_t k = next++; k < points.size(); k = next++) {
        Row& row = rows[k];
        std::vector<double> nums(11, nan);
        try {
          const RunOutcome r = execute(points[k].cfg);
          const CriteriaReport& c = r.criteria;
          const auto& m = r.solution.first_mots;
          nums = {r.data.eta0, r.data.delta0, r.data.epsilon, r.data.big_l, r.data.x_star,
                  c.uncharged.threshold, c.minkowskian.threshold, c.charged.threshold,
                  m ? m->u : nan, m ? m->v : nan, m ? m->x : nan};
          row.status = to_string(r.solution.status);
          row.verdicts[0] = c.uncharged.applicable ? (c.uncharged.verdict ? "1" : "0") : "na";
          row.verdicts[1] = c.minkowskian.applicable ? (c.minkowskian.verdict ? "1" : "0") : "na";
          row.verdicts[2] = c.charged.verdict ? "1" : "0";
          row.monitors = r.monitors.all_ok() ? "1" : "0";
        } catch (const DataError&) {
          row.status = "data_error";
        } catch (const ConfigError&) {
          row.status = "config_error";
        } catch (const DomainError&) {
          row.status = "domain_error";
        }
        row.numbers = std::move(nums);
        if (row.verdicts[0].empty()) row.verdicts[0] = row.verdicts[1] = row.verdicts[2] = row.monitors = "na";
        if (!opt.quiet) {
          std::lock_guard<std::mutex> lock(log_mutex);
          err << "point " << (k + 1) << "/" << points.size() << ": " << row.status << '\n';
        }
      }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    auto os = open_out(dir / sw.table_path);
    CsvWriter csv(os);
    std::vector<std::string> head{sw.axis1.path};
    if (sw.axis2) head.push_back(sw.axis2->path);
    for (const char* h : {"eta0", "delta0", "epsilon", "L", "x_star", "uncharged_threshold", "minkowskian_threshold",
                          "charged_threshold", "mots_u", "mots_v", "mots_x", "uncharged_verdict", "minkowskian_verdict",
                          "charged_verdict", "status", "monitors_ok"})
      head.emplace_back(h);
    csv.header(head);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::vector<std::string> cells{format_real(points[k].a1)};
      if (sw.axis2) cells.push_back(format_real(points[k].a2));
      for (double x : rows[k].numbers) cells.push_back(format_real(x));
      for (const auto& v : rows[k].verdicts) cells.push_back(v);
      cells.push_back(rows[k].status);
      cells.push_back(rows[k].monitors);
      csv.text_row(cells);
    }
    if (!opt.quiet) out << "wrote " << rows.size() << " rows to " << (dir / sw.table_path).string() << '\n';
    return static_cast<int>(exit_ok);
  });
}

}  // namespace collapse::cli
