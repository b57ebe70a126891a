#include "collapse/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "collapse/constraints.hpp"

namespace collapse {

const char* to_string(StopPolicy p) {
  switch (p) {
    case StopPolicy::stop_at_first_mots: return "stop_at_first_mots";
    case StopPolicy::run_to_u_star: return "run_to_u_star";
    case StopPolicy::run_to_end: return "run_to_end";
  }
  return "stop_at_first_mots";
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::mots_found: return "mots_found";
    case RunStatus::trapped_found: return "trapped_found";
    case RunStatus::r_floor: return "r_floor";
    case RunStatus::aborted: return "aborted";
  }
  return "completed";
}

StopPolicy stop_policy_from_string(const std::string& s) {
  if (s == "stop_at_first_mots") return StopPolicy::stop_at_first_mots;
  if (s == "run_to_u_star") return StopPolicy::run_to_u_star;
  if (s == "run_to_end") return StopPolicy::run_to_end;
  throw ConfigError("stop_policy", "unknown stop policy '" + s + "'");
}

namespace {

constexpr double kMinLapseSq = 1e-300;

double w_source(const FieldPoint& p) {
  const double qr = p.q / p.r;
  return -0.25 * p.lapse_sq() * (1.0 - qr * qr);
}

cplx du_phi_plain(const FieldPoint& p, double e) {
  return p.du_phi - cplx(0.0, e * p.a_u) * p.phi;
}

bool finite(const FieldPoint& p) {
  return std::isfinite(p.r) && std::isfinite(p.dur) && std::isfinite(p.w) &&
         std::isfinite(p.ln_lapse) && std::isfinite(p.phi.real()) && std::isfinite(p.phi.imag()) &&
         std::isfinite(p.du_phi.real()) && std::isfinite(p.du_phi.imag()) &&
         std::isfinite(p.a_u) && std::isfinite(p.q);
}

// One pass of the cell update. SW = prev[j-1], S = prev[j], W = next[j-1];
// G holds the current guess at the unknown corner.
FieldPoint cell_pass(const FieldPoint& sw, const FieldPoint& s, const FieldPoint& w,
                     const FieldPoint& g, double hu, double hv, double e) {
  FieldPoint ne;

  // u-direction, S -> NE.
  ne.r = s.r + 0.5 * hu * (s.dur + g.dur);
  ne.w = s.w + 0.5 * hu * (w_source(s) + w_source(g));
  ne.phi = s.phi + 0.5 * hu * (du_phi_plain(s, e) + du_phi_plain(g, e));

  // Lapse: diamond rule with the source at the cell center.
  {
    const double rc = 0.25 * (sw.r + s.r + w.r + ne.r);
    const double lc = 0.25 * (sw.ln_lapse + s.ln_lapse + w.ln_lapse + g.ln_lapse);
    const double o2 = std::exp(2.0 * lc);
    const double qc = 0.25 * (sw.q + s.q + w.q + g.q);
    const double durc = 0.25 * (sw.dur + s.dur + w.dur + g.dur);
    const double dvrc = 0.25 * (sw.dvr() + s.dvr() + w.dvr() + ne.w / ne.r);
    const cplx dvphi = ((s.phi - sw.phi) + (ne.phi - w.phi)) / (2.0 * hv);
    const cplx duphi = 0.25 * (sw.du_phi + s.du_phi + w.du_phi + g.du_phi);
    const double rc2 = rc * rc;
    const double src = -4.0 * pi * std::real(duphi * std::conj(dvphi)) -
                       0.5 * o2 * qc * qc / (rc2 * rc2) + 0.25 * o2 / rc2 + durc * dvrc / rc2;
    ne.ln_lapse = w.ln_lapse + s.ln_lapse - sw.ln_lapse + hu * hv * src;
  }

  // v-direction, W -> NE, midpoint rule.
  const double o2m = 0.5 * (w.lapse_sq() + std::exp(2.0 * ne.ln_lapse));
  const double rm = 0.5 * (w.r + ne.r);
  const cplx phim = 0.5 * (w.phi + ne.phi);
  const cplx dvphi = (ne.phi - w.phi) / hv;

  ne.q = w.q - hv * 4.0 * pi * e * rm * rm * std::imag(std::conj(phim) * dvphi);
  const double qm = 0.5 * (w.q + ne.q);
  ne.a_u = w.a_u - hv * qm * o2m / (2.0 * rm * rm);
  const double qrm = qm / rm;
  const double rdur = w.r * w.dur - hv * 0.25 * o2m * (1.0 - qrm * qrm);
  ne.dur = rdur / ne.r;
  const double durm = 0.5 * (w.dur + ne.dur);
  const cplx rdu_phi =
      w.r * w.du_phi + hv * (-dvphi * durm - cplx(0.0, e) * qm * phim * o2m / (4.0 * rm));
  ne.du_phi = rdu_phi / ne.r;
  return ne;
}

}  // namespace

StepResult step_slice(const std::vector<FieldPoint>& prev, const FieldPoint& cbar_point, double hu,
                      double hv, const PhysicalParams& params) {
  const std::size_t nv = prev.size();
  const double e = params.coupling;
  StepResult res;
  res.slice.resize(nv);
  res.slice[0] = cbar_point;
  for (std::size_t j = 1; j < nv; ++j) {
    const FieldPoint& sw = prev[j - 1];
    const FieldPoint& s = prev[j];
    const FieldPoint& w = res.slice[j - 1];
    const FieldPoint predicted = cell_pass(sw, s, w, s, hu, hv, e);
    FieldPoint ne = cell_pass(sw, s, w, predicted, hu, hv, e);
    // A failed step whose linear extrapolation crosses r = r_floor counts as
    // reaching the floor.
    const bool crossing = s.r + hu * s.dur < params.r_floor || w.r + hv * w.dvr() < params.r_floor;
    const double o2 = ne.lapse_sq();
    const bool broken = !finite(ne) || !(o2 >= kMinLapseSq) || !std::isfinite(o2);
    if (broken || ne.r < params.r_floor) {
      res.status = ne.r < params.r_floor || crossing ? StepStatus::r_floor : StepStatus::aborted;
      res.failed_column = static_cast<int>(j);
      res.slice.resize(j);
      return res;
    }
    ne.mass = hawking_mass(ne.r, ne.dur, ne.dvr(), o2);
    res.slice[j] = ne;
  }
  if (cbar_point.r < params.r_floor) res.status = StepStatus::r_floor;
  return res;
}

double default_mots_tolerance(const CharacteristicData& data) {
  const double h = 1.0 / (data.grid.n_v - 1);
  return 10.0 * h * h * data.cone_c.at_strip(data.grid.n_v - 1).dvr();
}

namespace {

class Marcher {
 public:
  Marcher(const CharacteristicData& data, const EvolveOptions& opt) : data_(data), opt_(opt) {
    sol_.grid = data.grid;
    sol_.params = data.params;
    sol_.r2_u0 = data.r2_u0;
    sol_.x_star = data.x_star;
    sol_.mots_tolerance = opt.mots_tolerance >= 0.0 ? opt.mots_tolerance : default_mots_tolerance(data);
    sol_.fields.reserve(static_cast<std::size_t>(data.grid.n_u) * data.grid.n_v);
  }

  Solution run_from_start() {
    std::vector<FieldPoint> slice0(data_.grid.n_v);
    for (int j = 0; j < data_.grid.n_v; ++j) slice0[j] = data_.cone_c.at_strip(j);
    if (!append(slice0)) return finish();
    return march();
  }

  Solution run_from(const Checkpoint& cp) {
    const int nv = data_.grid.n_v;
    if (cp.grid.n_v != nv || cp.grid.v1 != data_.grid.v1 || cp.grid.v2 != data_.grid.v2 ||
        cp.grid.u0 != data_.grid.u0 || cp.grid.hu() != data_.grid.hu())
      throw ConfigError("checkpoint", "grid does not match the characteristic data");
    if (cp.n_slices < 1 || cp.n_slices > data_.grid.n_u)
      throw ConfigError("checkpoint", "slice count out of range");
    for (int i = 0; i < cp.n_slices; ++i) {
      std::vector<FieldPoint> s(cp.fields.begin() + static_cast<std::ptrdiff_t>(i) * nv,
                                cp.fields.begin() + static_cast<std::ptrdiff_t>(i + 1) * nv);
      if (!append(s)) return finish();
    }
    return march();
  }

 private:
  Solution march() {
    const double hu = data_.grid.hu();
    const double hv = data_.grid.hv();
    const int limit = std::min<int>(data_.grid.n_u, static_cast<int>(data_.cone_cbar.points.size()));
    while (sol_.n_slices < limit) {
      if (opt_.max_slices >= 0 && sol_.n_slices >= opt_.max_slices) {
        halted_ = true;
        break;
      }
      const int i = sol_.n_slices;
      std::vector<FieldPoint> prev(sol_.fields.end() - data_.grid.n_v, sol_.fields.end());
      StepResult step = step_slice(prev, data_.cone_cbar.points[i], hu, hv, sol_.params);
      if (step.status == StepStatus::aborted) {
        sol_.status = RunStatus::aborted;
        sol_.failed_slice = i;
        stopped_ = true;
        break;
      }
      if (step.status == StepStatus::r_floor) {
        sol_.status = RunStatus::r_floor;
        stopped_ = true;
        break;
      }
      if (!append(step.slice)) {
        halted_ = true;
        break;
      }
    }
    if (!stopped_ && !halted_ && sol_.n_slices == limit && limit < data_.grid.n_u) {
      sol_.status = RunStatus::r_floor;
      stopped_ = true;
    }
    return finish();
  }

  // Stores a slice and applies detection and stop rules. Returns false when
  // the run should stop.
  bool append(const std::vector<FieldPoint>& slice) {
    const int i = sol_.n_slices;
    const int nv = data_.grid.n_v;
    sol_.fields.insert(sol_.fields.end(), slice.begin(), slice.end());
    ++sol_.n_slices;

    const FieldPoint& p1 = slice.front();
    const FieldPoint& p2 = slice.back();
    const double x = p2.r / data_.r2_u0;
    sol_.series.u.push_back(data_.grid.u(i));
    sol_.series.eta.push_back(2.0 * (p2.mass - p1.mass) / p2.r);
    sol_.series.delta.push_back(p2.r / p1.r - 1.0);
    sol_.series.x.push_back(x);
    sol_.series.m1.push_back(p1.mass);
    sol_.series.m2.push_back(p2.mass);

    const double tol = sol_.mots_tolerance;
    bool trapped = false;
    for (int j = 0; j < nv; ++j) {
      const PointClass c = classify_point(slice[j], tol);
      if (c == PointClass::trapped) trapped = true;
      if (c == PointClass::regular || sol_.first_mots) continue;
      MotsRecord rec;
      rec.slice = i;
      rec.j = j;
      rec.v = data_.grid.v(j);
      double t = 1.0;
      if (i > 0) {
        const double wp = sol_.at(i - 1, j).w;
        const double wc = slice[j].w;
        if (wp > wc) t = std::clamp(wp / (wp - wc), 0.0, 1.0);
        rec.u = data_.grid.u(i - 1) + t * (data_.grid.u(i) - data_.grid.u(i - 1));
        rec.x = sol_.series.x[i - 1] + t * (x - sol_.series.x[i - 1]);
      } else {
        rec.u = data_.grid.u(0);
        rec.x = x;
      }
      if (!candidate_ || rec.u < candidate_->u) candidate_ = rec;
    }
    if (candidate_ && !sol_.first_mots) sol_.first_mots = candidate_;
    if (trapped && sol_.first_trapped_slice < 0) sol_.first_trapped_slice = i;

    if (opt_.on_slice) opt_.on_slice(i, data_.grid.u(i), slice);

    if (opt_.stop == StopPolicy::stop_at_first_mots && sol_.first_mots) return false;
    if (opt_.stop == StopPolicy::run_to_u_star && x <= data_.x_star) return false;
    return true;
  }

  Solution finish() {
    if (!stopped_) {
      if (sol_.first_trapped_slice >= 0)
        sol_.status = RunStatus::trapped_found;
      else if (sol_.first_mots)
        sol_.status = RunStatus::mots_found;
      else
        sol_.status = RunStatus::completed;
    }
    sol_.residuals = constraint_residuals(sol_);
    return std::move(sol_);
  }

  const CharacteristicData& data_;
  const EvolveOptions& opt_;
  Solution sol_;
  std::optional<MotsRecord> candidate_;
  bool stopped_ = false;
  bool halted_ = false;
};

}  // namespace

Solution evolve(const CharacteristicData& data, const EvolveOptions& options) {
  return Marcher(data, options).run_from_start();
}

Solution evolve(const CharacteristicData& data, StopPolicy stop) {
  EvolveOptions opt;
  opt.stop = stop;
  return evolve(data, opt);
}

Solution resume(const CharacteristicData& data, const Checkpoint& cp, const EvolveOptions& options) {
  return Marcher(data, options).run_from(cp);
}

double ConvergenceResult::order() const {
  if (order_r.empty() || order_phi.empty()) return std::nan("");
  return std::fmin(order_r.back(), order_phi.back());
}

ConvergenceResult convergence_order(const ProfileSpec& profile_c, const ProfileSpec& profile_cbar,
                                    const GridSpec& grid, const PhysicalParams& params, int levels) {
  if (levels < 3) throw ConfigError("levels", "need at least 3 levels");
  ConvergenceResult out;
  std::vector<Solution> sols;
  for (int k = 0; k < levels; ++k) {
    GridSpec g = grid;
    g.n_u = (grid.n_u - 1) * (1 << k) + 1;
    g.n_v = (grid.n_v - 1) * (1 << k) + 1;
    const CharacteristicData d = build_characteristic_data(profile_c, profile_cbar, g, params);
    sols.push_back(evolve(d, StopPolicy::run_to_end));
    if (sols.back().status == RunStatus::aborted)
      throw DataError("convergence run aborted at level " + std::to_string(k));
    out.resolutions.push_back(g.n_v);
  }
  // Coarse slices present at every level.
  int common = sols[0].n_slices;
  for (int k = 1; k < levels; ++k) common = std::min(common, (sols[k].n_slices - 1) / (1 << k) + 1);

  double scale = 0.0;
  for (int i = 0; i < common; ++i)
    for (int j = 0; j < grid.n_v; ++j) scale = std::max(scale, sols[0].at(i, j).r);

  for (int k = 0; k + 1 < levels; ++k) {
    double dr = 0.0, dp = 0.0;
    const int fa = 1 << k, fb = 1 << (k + 1);
    for (int i = 0; i < common; ++i)
      for (int j = 0; j < grid.n_v; ++j) {
        const FieldPoint& a = sols[k].at(i * fa, j * fa);
        const FieldPoint& b = sols[k + 1].at(i * fb, j * fb);
        dr = std::max(dr, std::abs(a.r - b.r));
        dp = std::max(dp, std::abs(a.phi - b.phi));
      }
    if (!std::isfinite(dr) || !std::isfinite(dp)) throw DataError("non-finite convergence norm");
    out.diff_r.push_back(dr);
    out.diff_phi.push_back(dp);
  }
  const double floor = 1e-13 * std::max(scale, 1.0);
  out.exact = true;
  for (std::size_t k = 0; k < out.diff_r.size(); ++k)
    if (out.diff_r[k] > floor || out.diff_phi[k] > floor) out.exact = false;
  for (std::size_t k = 0; k + 1 < out.diff_r.size(); ++k) {
    out.order_r.push_back(std::log2(out.diff_r[k] / out.diff_r[k + 1]));
    out.order_phi.push_back(std::log2(out.diff_phi[k] / out.diff_phi[k + 1]));
  }
  return out;
}

}  // namespace collapse
