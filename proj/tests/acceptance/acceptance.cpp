// Acceptance gate: one PASS/FAIL line per criterion; non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../support/families.hpp"
#include "../support/oracles.hpp"
#include "collapse/cli/commands.hpp"
#include "collapse/criteria.hpp"
#include "collapse/evolution.hpp"

using namespace collapse;

namespace {

// Pinned tolerances and budgets.
constexpr double kMinkTol = 1e-10;
constexpr double kMinkSeconds = 1.0;
constexpr double kOrderLo = 1.9, kOrderHi = 2.1;
constexpr double kConvSeconds = 60.0;
constexpr double kRatioLo = 3.5, kRatioHi = 4.5;
constexpr double kOracleAbs = 1e-12;
constexpr double kOracleRel = 1e-8;
constexpr double kOracleSeconds = 5.0;
constexpr double kDriftFactor = 5.0;
constexpr int kMinUnchargedPoints = 20, kMinMinkowskianPoints = 10, kMinChargedPoints = 10;
constexpr double kUnchargedSeconds = 600.0, kMinkowskianSeconds = 300.0, kChargedSeconds = 600.0;

struct Result {
  bool pass = true;
  std::string detail;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Monitor outcomes of every collapse run, reported by the monitor criterion.
struct MonitorTally {
  int runs = 0;
  int failed_runs = 0;
  std::string worst;
  void add(const family::Outcome& o, const family::Point& p) {
    ++runs;
    if (o.monitors.all_ok()) return;
    ++failed_runs;
    for (const auto& m : o.monitors.monitors)
      if (!m.ok() && worst.empty())
        worst = fmt("%s margin %.3g tol %.3g (%s)", m.name.c_str(), m.margin, m.tolerance, family::describe(p).c_str());
  }
} tally;

ProfileSpec gaussian(double a, double k) {
  ProfileSpec s;
  s.kind = ProfileKind::gaussian;
  s.amplitude = {a, 0.0};
  s.center = 1.5;
  s.width = 0.2;
  s.phase_rate = k;
  return s;
}

const GridSpec kConvGrid{-1.0, -0.6, 1.0, 2.0, 129, 129};

Result minkowski() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g{-1.0, -0.5, 1.0, 2.0, 129, 129};
  const CharacteristicData d = build_characteristic_data({}, {}, g, {});
  const Solution s = evolve(d, StopPolicy::run_to_end);
  double max_m = 0.0, max_dr = 0.0;
  for (int i = 0; i < s.n_slices; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      max_m = std::max(max_m, std::abs(s.at(i, j).mass));
      max_dr = std::max(max_dr, std::abs(s.at(i, j).r - 0.5 * (s.v(j) - (s.u(i) - g.u0))));
    }
  const double t = elapsed(t0);
  Result r;
  r.pass = s.n_slices == 129 && !s.first_mots && max_m <= kMinkTol && max_dr <= kMinkTol && t < kMinkSeconds;
  r.detail = fmt("max|m| %.2e, max|r-r_exact| %.2e, MOTS %s, %.3f s", max_m, max_dr, s.first_mots ? "yes" : "no", t);
  return r;
}

Result convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  for (double e : {0.0, 0.5}) {
    PhysicalParams p;
    p.coupling = e;
    const ConvergenceResult c = convergence_order(gaussian(0.05, e > 0 ? 3.0 : 0.0), {}, kConvGrid, p, 3);
    const double pr = c.order_r.back(), pp = c.order_phi.back();
    const bool ok = pr >= kOrderLo && pr <= kOrderHi && pp >= kOrderLo && pp <= kOrderHi;
    r.pass = r.pass && ok;
    r.detail += fmt("e=%.1f: p_r %.4f p_phi %.4f; ", e, pr, pp);
  }
  const double t = elapsed(t0);
  r.pass = r.pass && t < kConvSeconds;
  r.detail += fmt("n = 129/257/513, %.1f s", t);
  return r;
}

Result constraint_decay() {
  Result r;
  for (double e : {0.0, 0.5}) {
    PhysicalParams p;
    p.coupling = e;
    std::vector<ResidualSeries> res;
    for (int n : {129, 257, 513}) {
      GridSpec g = kConvGrid;
      g.n_u = g.n_v = n;
      res.push_back(evolve(build_characteristic_data(gaussian(0.05, e > 0 ? 3.0 : 0.0), {}, g, p),
                           StopPolicy::run_to_end)
                        .residuals);
    }
    auto check = [&](const char* name, auto get) {
      for (int k = 0; k + 1 < 3; ++k) {
        const double ratio = get(res[k]) / get(res[k + 1]);
        const bool ok = ratio >= kRatioLo && ratio <= kRatioHi;
        r.pass = r.pass && ok;
        r.detail += fmt("%s%s %.2f ", ok ? "" : "!", name, ratio);
      }
    };
    r.detail += fmt("e=%.1f: ", e);
    check("raych_u", [](const ResidualSeries& s) { return s.max_raychaudhuri_u; });
    check("raych_v", [](const ResidualSeries& s) { return s.max_raychaudhuri_v; });
    if (e > 0.0) {
      check("maxwell_u", [](const ResidualSeries& s) { return s.max_maxwell_u; });
    } else {
      // Real data: the charge residual is identically at rounding level.
      const bool ok = res[0].max_maxwell_u <= 1e-14;
      r.pass = r.pass && ok;
      r.detail += fmt("maxwell_u %.1e ", res[0].max_maxwell_u);
    }
    r.detail.back() = ';';
    r.detail += ' ';
  }
  r.detail += "n = 129/257/513";
  return r;
}

Result oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  double worst_abs = std::abs(big_e(0.5) - 1.0);
  for (double d : {0.05, 0.1, 0.2}) {
    const double xs = x_star(d);
    worst_abs = std::max(worst_abs, std::abs(std::exp(-big_g(xs, d, std::nullopt)) + big_f(xs, d, std::nullopt) -
                                             big_e(d)));
    // Same identity through the quadrature oracle.
    worst_abs = std::max(worst_abs, std::abs(std::exp(-oracle::big_g(xs, d, std::nullopt)) +
                                             oracle::big_f(xs, d, std::nullopt) - big_e(d)));
  }
  double worst_rel = 0.0;
  for (int iw = 1; iw <= 6; ++iw)
    for (int id = 1; id <= 30; ++id) {
      const double w = 0.1 * iw, d = 0.01 * id;
      const double ref = oracle::big_f(oracle::x_star(d), d, w);
      worst_rel = std::max(worst_rel, std::abs(g_omega(w, d) - ref) / std::abs(ref));
    }
  double worst_thr = 0.0;
  for (int iw = 1; iw <= 6; ++iw)
    for (int id = 1; id <= 30; ++id) {
      const double w = 0.1 * iw, d = 0.01 * id, xs = x_star(d);
      const double lhs = 9.0 * std::pow(d, 1.0 - w / 2.0) / (std::pow(2.0, 1.0 + w / 2.0) * (1.0 + d) * (1.0 + d));
      const double rhs = xs * xs / std::pow(xs * (1.0 + d) - d, 1.0 + w / 2.0);
      worst_thr = std::max(worst_thr, std::abs(lhs - rhs));
    }
  const double t = elapsed(t0);
  r.pass = worst_abs <= kOracleAbs && worst_rel <= kOracleRel && worst_thr <= kOracleAbs && t < kOracleSeconds;
  r.detail = fmt("E identities %.1e, g_omega rel %.1e, threshold identity %.1e, %.2f s", worst_abs, worst_rel,
                 worst_thr, t);
  return r;
}

std::vector<double> steps(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * k / (n - 1));
  return v;
}

Result uncharged_family() {
  const auto t0 = std::chrono::steady_clock::now();
  int qualifying = 0, counter = 0, skipped = 0;
  double worst_drift = 0.0;
  std::string first_counter;
  struct Set {
    double delta0;
    std::vector<double> amps;
  };
  for (const Set& set : {Set{0.05, steps(0.0145, 0.0235, 10)}, Set{0.1, steps(0.0268, 0.0322, 10)}}) {
    for (double a : set.amps) {
      family::Spec s;
      s.kind = ProfileKind::gaussian;
      s.amplitude = a;
      s.delta0 = set.delta0;
      const family::Point coarse = family::calibrate(s, 65);
      const family::Point fine = family::refine(coarse, 129);
      family::Outcome oc, of;
      try {
        oc = family::run(coarse);
        of = family::run(fine);
      } catch (const DataError&) {
        ++skipped;
        continue;
      }
      tally.add(oc, coarse);
      tally.add(of, fine);
      if (!oc.criteria.uncharged.verdict || !of.criteria.uncharged.verdict) {
        ++skipped;
        continue;
      }
      ++qualifying;
      const auto& mc = oc.solution.first_mots;
      const auto& mf = of.solution.first_mots;
      bool ok = mc && mf && mc->x >= oc.data.x_star && mf->x >= of.data.x_star;
      if (ok) {
        const double h = coarse.grid.hu();
        const double drift = std::abs(mc->u - mf->u);
        worst_drift = std::max(worst_drift, drift / h);
        ok = drift <= kDriftFactor * h;
      }
      if (!ok) {
        ++counter;
        if (first_counter.empty()) first_counter = family::describe(coarse);
      }
    }
  }
  const double t = elapsed(t0);
  Result r;
  r.pass = qualifying >= kMinUnchargedPoints && counter == 0 && t < kUnchargedSeconds;
  r.detail = fmt("%d points above E(delta0), %d counterexamples, %d skipped, max drift %.2f h, %.1f s", qualifying,
                 counter, skipped, worst_drift, t);
  if (!first_counter.empty()) r.detail += "; first: " + first_counter;
  return r;
}

Result minkowskian_family() {
  const auto t0 = std::chrono::steady_clock::now();
  int qualifying = 0, counter = 0, skipped = 0;
  std::string first_counter;
  struct Set {
    double delta0;
    std::vector<double> amps;
  };
  for (const Set& set : {Set{0.05, steps(0.014, 0.028, 8)}, Set{0.1, steps(0.028, 0.038, 6)}}) {
    for (double a : set.amps) {
      family::Spec s;
      s.kind = ProfileKind::bump;
      s.amplitude = a;
      s.delta0 = set.delta0;
      family::Point p;
      family::Outcome o;
      try {
        p = family::calibrate(s, 65);
        o = family::run(p);
      } catch (const DataError&) {
        ++skipped;
        continue;
      }
      tally.add(o, p);
      if (!o.criteria.minkowskian.applicable || !o.criteria.minkowskian.verdict) {
        ++skipped;
        continue;
      }
      ++qualifying;
      const auto& m = o.solution.first_mots;
      if (!(m && m->x >= o.data.x_star)) {
        ++counter;
        if (first_counter.empty()) first_counter = family::describe(p);
      }
    }
  }
  const double t = elapsed(t0);
  Result r;
  r.pass = qualifying >= kMinMinkowskianPoints && counter == 0 && t < kMinkowskianSeconds;
  r.detail = fmt("%d points above 4.5 delta0, %d counterexamples, %d skipped, %.1f s", qualifying, counter, skipped, t);
  if (!first_counter.empty()) r.detail += "; first: " + first_counter;
  return r;
}

Result charged_family() {
  const auto t0 = std::chrono::steady_clock::now();
  int qualifying = 0, counter = 0, skipped = 0;
  std::string first_counter;
  for (double e : {0.2, 0.5})
    for (double w : {0.3, 0.5}) {
      const std::vector<double> amps = w < 0.4 ? std::vector<double>{0.021, 0.023, 0.025}
                                               : std::vector<double>{0.0235, 0.0245, 0.0255};
      for (double a : amps) {
        family::Spec s;
        s.kind = ProfileKind::bump;
        s.amplitude = a;
        s.delta0 = 0.05;
        s.coupling = e;
        s.phase_rate = 20.0;
        s.omega = w;
        family::Point p;
        family::Outcome o;
        try {
          p = family::calibrate(s, 65);
          o = family::run(p);
        } catch (const DataError&) {
          ++skipped;
          continue;
        }
        tally.add(o, p);
        const ChargedCriterion& c = o.criteria.charged;
        const bool premises = c.width_ok && c.amplitude_ok && c.supercharged_ok && c.epsilon_ok && c.verdict;
        if (!premises) {
          ++skipped;
          continue;
        }
        ++qualifying;
        const auto& m = o.solution.first_mots;
        if (!(m && m->x >= o.data.x_star)) {
          ++counter;
          if (first_counter.empty()) first_counter = family::describe(p);
        }
      }
    }
  const double t = elapsed(t0);
  Result r;
  r.pass = qualifying >= kMinChargedPoints && counter == 0 && t < kChargedSeconds;
  r.detail = fmt("%d points meeting every hypothesis, %d counterexamples, %d skipped, %.1f s", qualifying, counter,
                 skipped, t);
  if (!first_counter.empty()) r.detail += "; first: " + first_counter;
  return r;
}

Result monitors() {
  Result r;
  r.pass = tally.runs > 0 && tally.failed_runs == 0;
  r.detail = fmt("%d runs, %d with a monitor below -10 h^2 scale", tally.runs, tally.failed_runs);
  if (!tally.worst.empty()) r.detail += "; first: " + tally.worst;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "collapse_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const nlohmann::json cfg = nlohmann::json::parse(R"({
    "schema_version": 1,
    "grid": {"v1": 1.0, "v2": 1.07, "n_v": 65},
    "params": {"coupling": 0.5, "omega": 0.3},
    "profile_c": {"kind": "bump", "amplitude": 0.022, "center": 1.035, "width": 0.035, "phase_rate": 20.0},
    "profile_cbar": {"kind": "gaussian", "amplitude": 0.001, "center": -0.7, "width": 0.1, "phase_rate": 5.0},
    "stop_policy": "stop_at_first_mots",
    "outputs": {"summary_path": "summary.json", "slices_path": "slices.csv",
                "signmap_path": "signmap.csv", "monitors_path": "monitors.json"}
  })");
  std::ofstream(dir / "config.json") << cfg.dump(2);
  Result r;
  std::ostringstream out, err;
  for (const char* run : {"a", "b"}) {
    cli::CommonOptions o;
    o.config = (dir / "config.json").string();
    o.out = (dir / run).string();
    o.quiet = true;
    const int code = cli::cmd_run(o, out, err);
    if (code != 0) {
      r.pass = false;
      r.detail = fmt("run exited with %d: %s", code, err.str().c_str());
      return r;
    }
  }
  int identical = 0;
  for (const char* f : {"summary.json", "slices.csv", "signmap.csv", "monitors.json"}) {
    const std::string a = slurp(dir / "a" / f), b = slurp(dir / "b" / f);
    if (!a.empty() && a == b) {
      ++identical;
    } else {
      r.pass = false;
      r.detail += fmt("%s differs; ", f);
    }
  }
  r.detail += fmt("%d of 4 outputs byte-identical", identical);
  fs::remove_all(dir);
  return r;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Result()> fn;
  };
  const std::vector<Entry> entries = {
      {1, "flat-space exactness", minkowski},
      {2, "self-convergence", convergence},
      {3, "constraint decay", constraint_decay},
      {4, "closed-form oracles", oracles},
      {5, "uncharged threshold sufficiency", uncharged_family},
      {6, "Minkowskian incoming-cone sufficiency", minkowskian_family},
      {7, "charged threshold sufficiency", charged_family},
      {8, "monitor suite", monitors},
      {9, "determinism", determinism},
  };
  int failures = 0;
  for (const Entry& e : entries) {
    Result r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    failures += !r.pass;
    std::printf("criterion %d %s  %s: %s\n", e.id, r.pass ? "PASS" : "FAIL", e.name, r.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
