#include "collapse/diagnostics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "collapse/criteria.hpp"

namespace collapse {

SliceDiagnostics slice_diagnostics(const Solution& sol, int i_u) {
  const int nv = sol.grid.n_v;
  const FieldPoint& p1 = sol.at(i_u, 0);
  const FieldPoint& p2 = sol.at(i_u, nv - 1);
  SliceDiagnostics d;
  d.m1 = p1.mass;
  d.m2 = p2.mass;
  d.eta = 2.0 * (p2.mass - p1.mass) / p2.r;
  d.delta = p2.r / p1.r - 1.0;
  d.x = p2.r / sol.r2_u0;
  for (int j = 0; j < nv; ++j) {
    const FieldPoint& p = sol.at(i_u, j);
    d.sup_q2_over_r2 = std::max(d.sup_q2_over_r2, p.q * p.q / (p.r * p.r));
  }
  return d;
}

bool MonitorReport::all_ok() const {
  return std::all_of(monitors.begin(), monitors.end(), [](const MonitorRecord& m) { return m.ok(); });
}

const MonitorRecord* MonitorReport::find(const std::string& name) const {
  for (const auto& m : monitors)
    if (m.name == name) return &m;
  return nullptr;
}

namespace {

class Monitor {
 public:
  Monitor(std::string name, std::string premise, double unit) : unit_(unit) {
    rec_.name = std::move(name);
    rec_.premise = std::move(premise);
  }

  void add(double bound, double quantity, double u, double v, int slice) {
    const double m = bound - quantity;
    ++rec_.points;
    rec_.premise_held = true;
    rec_.last_slice = std::max(rec_.last_slice, slice);
    if (m < rec_.margin || !std::isfinite(m)) {
      rec_.margin = m;
      rec_.u = u;
      rec_.v = v;
    }
    if (std::isfinite(bound)) rec_.scale = std::max(rec_.scale, std::abs(bound));
    if (std::isfinite(quantity)) rec_.scale = std::max(rec_.scale, std::abs(quantity));
  }

  // Extra absolute allowance, e.g. for rounding in difference quotients.
  void allow(double extra) { extra_ = std::max(extra_, extra); }

  MonitorRecord finish(double warn, double h) {
    rec_.scale = std::max(rec_.scale, 1e-8 * unit_);
    rec_.tolerance = warn * h * h * rec_.scale + extra_;
    return rec_;
  }

 private:
  MonitorRecord rec_;
  double unit_;
  double extra_ = 0.0;
};

}  // namespace

MonitorReport monitor_all(const Solution& sol, const CharacteristicData& data, const PhysicalParams& params) {
  MonitorReport rep;
  const GridSpec& g = sol.grid;
  const int nv = g.n_v;
  const double hu = g.hu(), hv = g.hv();
  rep.h = std::max(hu, hv) / (g.v2 - g.v1);
  const double warn = params.residual_warn_scale;
  const double w = params.omega;
  const double e = params.coupling;
  const double eps = data.epsilon;
  const double eta0 = data.eta0;
  const double d0 = data.delta0;
  const double xs = data.x_star;
  const double r2u0 = data.r2_u0;
  const bool uncharged = e == 0.0;

  const int n = sol.n_slices;
  rep.pre_mots_slices = sol.first_mots ? sol.first_mots->slice : n;
  rep.u_star_slices = 0;
  while (rep.u_star_slices < n && sol.series.x[rep.u_star_slices] >= xs) ++rep.u_star_slices;
  const int n_pre = rep.pre_mots_slices;
  const int n_star = std::min(n_pre, rep.u_star_slices);

  const CriteriaReport crit = evaluate_criteria(data, params);
  const ChargedCriterion& cc = crit.charged;
  const bool smallness = cc.width_ok && cc.width_alt_ok && cc.amplitude_ok && cc.amplitude_alt_ok;
  const bool nonsuper = !data.supercharged;
  const bool eta_hyp = eta0 >= 13.0 * eps / w + g_omega(w, d0);

  Monitor dur_mon("dur_lapse_bound", "before first MOTS", 1.0);
  Monitor mass("mass_nonnegative", "before first MOTS", r2u0);
  Monitor mixed("mixed_derivative_sign", "non-supercharged, before first MOTS, x >= x*", 1.0 / r2u0);
  Monitor dhalf("delta_half", "non-supercharged, before first MOTS, x >= x*", 1.0);
  Monitor dineq("delta_inequality", "non-supercharged, before first MOTS, x >= x*", 1.0);
  Monitor qpt_mon("charge_bound_pointwise",
              "smallness conditions, delta <= 1/2 so far, before first MOTS, x >= x*", 1.0);
  Monitor q_mon("charge_bound", "smallness conditions, non-supercharged, before first MOTS, x >= x*", 1.0);
  Monitor qs_mon("charge_bound_strong",
               "as charge_bound and eta_a >= 8 eps/omega at the point", 1.0);
  Monitor theta_mon("theta_bound",
              "smallness conditions, non-supercharged, eta >= 8 eps/omega, before first MOTS, x >= x*", 1.0);
  Monitor ratio_mon("lapse_ratio_bound",
              "smallness conditions, non-supercharged, eta >= 8 eps/omega, before first MOTS, x >= x*", 1.0);
  Monitor floor_mon("eta_floor",
              "eta0 >= 13 eps/omega + g_omega(delta0), smallness conditions, non-supercharged, "
              "before first MOTS, x >= x*",
              1.0);
  Monitor gch("gronwall_charged",
              "smallness conditions, non-supercharged, eta >= 8 eps/omega so far, before first MOTS, x >= x*",
              1.0);
  Monitor dur_u_mon("dur_lapse_bound_uncharged", "e = 0, before first MOTS", 1.0);
  Monitor mixed_u_mon("mixed_derivative_sign_uncharged", "e = 0, before first MOTS, x >= x*", 1.0 / r2u0);
  Monitor theta_u_mon("theta_bound_uncharged", "e = 0, before first MOTS, x >= x*", 1.0);
  Monitor ratio_u_mon("lapse_ratio_bound_uncharged", "e = 0, before first MOTS, x >= x*", 1.0);
  Monitor gun("gronwall_uncharged", "e = 0, before first MOTS, x >= x*", 1.0);

  double rmax = 0.0;
  for (int i = 0; i < n_pre; ++i)
    for (int j = 0; j < nv; ++j) rmax = std::max(rmax, sol.at(i, j).r);
  const double fd_round = 16.0 * DBL_EPSILON * rmax / (hu * hv);
  mixed.allow(fd_round);
  mixed_u_mon.allow(fd_round);

  // Pointwise monitors everywhere before the first MOTS.
  for (int i = 0; i < n_pre; ++i) {
    const double u = g.u(i);
    for (int j = 0; j < nv; ++j) {
      const FieldPoint& p = sol.at(i, j);
      const double o2 = p.lapse_sq();
      dur_mon.add(-(1.0 - eps) / 2.0, p.dur / o2, u, g.v(j), i);
      mass.add(p.mass, 0.0, u, g.v(j), i);
      if (uncharged) dur_u_mon.add(-0.5 * o2, p.dur, u, g.v(j), i);
    }
  }

  // Mixed derivative at cell centers with both slices inside [u0, u*].
  for (int i = 0; i + 1 < n_star; ++i)
    for (int j = 0; j + 1 < nv; ++j) {
      const double mix = (sol.at(i + 1, j + 1).r - sol.at(i + 1, j).r - sol.at(i, j + 1).r + sol.at(i, j).r) /
                         (hu * hv);
      const double uc = g.u(i) + 0.5 * hu, vc = g.v(j) + 0.5 * hv;
      if (nonsuper) mixed.add(0.0, mix, uc, vc, i + 1);
      if (uncharged) mixed_u_mon.add(0.0, mix, uc, vc, i + 1);
    }

  bool delta_half_so_far = true;
  bool eta_floor_so_far = true;
  for (int i = 0; i < n_star; ++i) {
    const double u = g.u(i);
    const FieldPoint& p1 = sol.at(i, 0);
    const FieldPoint& p2 = sol.at(i, nv - 1);
    const double x = sol.series.x[i];
    const double delta = sol.series.delta[i];
    const double eta = sol.series.eta[i];
    const double y = x * (1.0 + d0) - d0;

    if (nonsuper) {
      dhalf.add(0.5, delta, u, g.v2, i);
      dineq.add(d0 / y, delta, u, g.v2, i);
    }
    delta_half_so_far = delta_half_so_far && delta <= 0.5;
    const double eta_min = 8.0 * eps / w;
    eta_floor_so_far = eta_floor_so_far && eta >= eta_min;

    // Charge bounds along the slice.
    const double q1r1 = p1.q * p1.q / (p1.r * p1.r);
    for (int j = 1; j < nv; ++j) {
      const FieldPoint& pa = sol.at(i, j);
      const double eta_a = 2.0 * (pa.mass - p1.mass) / pa.r;
      const double qa = pa.q * pa.q / (pa.r * pa.r);
      if (smallness && delta_half_so_far) qpt_mon.add(0.25 * w * eta_a + 2.0 * q1r1, qa, u, g.v(j), i);
      if (smallness && nonsuper) {
        q_mon.add(0.25 * w * eta_a + 2.0 * eps, qa, u, g.v(j), i);
        if (eta_a >= eta_min) qs_mon.add(0.5 * w * eta_a, qa, u, g.v(j), i);
      }
    }

    const double o2_1 = p1.lapse_sq(), o2_2 = p2.lapse_sq();
    const double k1 = p1.dvr() / o2_1, k2 = p2.dvr() / o2_2;
    const double log_ratio = std::log(k2) - std::log(k1);
    if (smallness && nonsuper && eta >= eta_min) {
      const double theta = p2.r * std::abs(p2.du_phi) - p1.r * std::abs(p1.du_phi);
      const double bound = (1.0 + 0.5 * w) * (-p2.dur) / (8.0 * pi * k2) * (p2.mass - p1.mass) *
                           (1.0 / p1.r - 1.0 / p2.r);
      theta_mon.add(bound, theta * theta, u, g.v2, i);
      ratio_mon.add(-(1.0 - 0.5 * w) * eta, log_ratio, u, g.v2, i);
    }
    if (eta_hyp && smallness && nonsuper) floor_mon.add(eta, 12.0 * eps / w, u, g.v2, i);
    if (smallness && nonsuper && eta_floor_so_far && x <= 1.0) {
      const double bound = std::exp(big_g(x, d0, w)) * (eta0 - big_f(x, d0, w));
      gch.add(eta, bound, u, g.v2, i);
    }
    if (uncharged) {
      const cplx d1 = p1.du_phi - cplx(0.0, e * p1.a_u) * p1.phi;
      const cplx d2 = p2.du_phi - cplx(0.0, e * p2.a_u) * p2.phi;
      const double theta2 = std::norm(p2.r * d2 - p1.r * d1);
      const double bound = p2.dur / (8.0 * pi * k2) * (p2.mass - p1.mass) * (1.0 / p2.r - 1.0 / p1.r);
      theta_u_mon.add(bound, theta2, u, g.v2, i);
      ratio_u_mon.add(-eta, log_ratio, u, g.v2, i);
      if (x <= 1.0) {
        const double gb = std::exp(big_g(x, d0, std::nullopt)) * (eta0 - big_f(x, d0, std::nullopt));
        gun.add(eta, gb, u, g.v2, i);
      }
    }
  }

  for (Monitor* m : {&dur_mon, &mass, &mixed, &dhalf, &dineq, &qpt_mon, &q_mon, &qs_mon, &theta_mon, &ratio_mon,
                     &floor_mon, &gch})
    rep.monitors.push_back(m->finish(warn, rep.h));
  if (uncharged)
    for (Monitor* m : {&dur_u_mon, &mixed_u_mon, &theta_u_mon, &ratio_u_mon, &gun}) rep.monitors.push_back(m->finish(warn, rep.h));
  return rep;
}

nlohmann::json to_json(const MonitorReport& r) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& m : r.monitors) {
    nlohmann::json e;
    e["margin"] = std::isfinite(m.margin) ? nlohmann::json(m.margin) : nlohmann::json(nullptr);
    e["location"] = {{"u", m.u}, {"v", m.v}};
    e["premise"] = m.premise;
    e["premise_held"] = m.premise_held;
    e["points"] = m.points;
    e["tolerance"] = m.tolerance;
    e["ok"] = m.ok();
    j[m.name] = e;
  }
  return j;
}

}  // namespace collapse
