#include "collapse/criteria.hpp"

#include <cmath>
#include <limits>

#include "collapse/csv.hpp"

namespace collapse {

namespace {

void check_omega(double omega) {
  if (!(omega > 0.0 && omega < 2.0 / 3.0)) throw DomainError("omega must lie in (0, 2/3)");
}

double shifted(double x, double d) {
  const double y = x * (1.0 + d) - d;
  if (!(y > 0.0)) throw DomainError("x must exceed delta0/(1+delta0)");
  if (!(x <= 1.0 + 1e-15)) throw DomainError("x must not exceed 1");
  return y;
}

nlohmann::json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

double big_e(double x) {
  if (!(x > 0.0)) throw DomainError("E(x) requires x > 0");
  return x / ((1.0 + x) * (1.0 + x)) * (std::log(1.0 / (2.0 * x)) + 5.0 - x);
}

double g_omega(double omega, double x) {
  check_omega(omega);
  if (!(x >= 0.0)) throw DomainError("g_omega(x) requires x >= 0");
  const double a = 1.0 + 0.5 * omega;
  const double b = 1.0 - 0.5 * omega;
  const double coef = std::pow(2.0, b) / omega + 1.0 / (std::pow(2.0, a) * a);
  return (a / b) / ((1.0 + x) * (1.0 + x)) *
         (coef * std::pow(x, b) - (2.0 / omega) * x - x * x / a);
}

double big_g(double x, double delta0, std::optional<double> omega) {
  const double y = shifted(x, delta0);
  if (omega) {
    check_omega(*omega);
    return (1.0 + 0.5 * *omega) * std::log(y) - 2.0 * std::log(x);
  }
  return std::log(y) - 2.0 * std::log(x);
}

double big_f(double x, double delta0, std::optional<double> omega) {
  const double y = shifted(x, delta0);
  const double d = delta0;
  const double pre = d / ((1.0 + d) * (1.0 + d));
  if (omega) {
    check_omega(*omega);
    const double w = *omega;
    const double a = 1.0 + 0.5 * w;
    const double b = 1.0 - 0.5 * w;
    return (a / b) * pre *
           ((2.0 / w) * (std::pow(y, -0.5 * w) - 1.0) + (d / a) * (std::pow(y, -a) - 1.0));
  }
  return pre * (std::log(1.0 / y) + d * (1.0 / y - 1.0));
}

double x_star(double delta0) { return 3.0 * delta0 / (1.0 + delta0); }

ChargedCriterion charged_criterion(const CriteriaInputs& in) {
  ChargedCriterion t;
  const double inf = std::numeric_limits<double>::infinity();
  const double e = in.coupling;
  const double e2 = e * e;
  const double dv = in.dv;
  const double w = in.omega;
  t.epsilon_ok = in.epsilon < 1.0;
  const double one_m = t.epsilon_ok ? 1.0 - in.epsilon : 0.0;

  t.width_rhs = w / 4.0;
  t.amplitude_rhs = 4.0 * w;
  if (t.epsilon_ok) {
    t.width_lhs = 9.0 * e2 / (4.0 * one_m * one_m) * dv * dv + 12.0 * pi * in.big_l * e / one_m * dv;
    t.width_alt_lhs = 9.0 * e2 / (4.0 * one_m * one_m) * dv * dv + 12.0 * pi * in.big_l * e2 / one_m * dv;
    t.amplitude_lhs = 45.0 * pi * e2 * dv * dv / (pi * one_m * one_m) +
                          160.0 * pi * e2 * in.r2_u0 * (dv / one_m) * in.sup_phi1_sq;
    t.amplitude_alt_lhs = 9.0 * dv * dv / (16.0 * pi * one_m) + 2.0 * in.r2_u0 * dv * in.sup_phi1_sq;
    t.amplitude_alt_rhs = e > 0.0 ? w * one_m / (320.0 * e2 * pi) : inf;
  } else {
    t.width_lhs = t.width_alt_lhs = t.amplitude_lhs = t.amplitude_alt_lhs = inf;
    t.amplitude_alt_rhs = 0.0;
  }
  t.width_ok = t.width_lhs <= t.width_rhs;
  t.width_alt_ok = t.width_alt_lhs <= t.width_rhs;
  t.amplitude_ok = t.amplitude_lhs <= t.amplitude_rhs;
  t.amplitude_alt_ok = t.amplitude_alt_lhs <= t.amplitude_alt_rhs;
  t.supercharged_ok = !in.supercharged;

  const double g = g_omega(w, in.delta0);
  t.threshold_charge = 13.0 * in.epsilon / w + g;
  t.threshold_shape = 9.0 * std::pow(in.delta0, 1.0 - 0.5 * w) /
                          (std::pow(2.0, 1.0 + 0.5 * w) * (1.0 + in.delta0) * (1.0 + in.delta0)) +
                      g;
  t.threshold = std::max(t.threshold_charge, t.threshold_shape);
  t.margin = in.eta0 - t.threshold;
  t.verdict = t.width_ok && t.amplitude_ok && t.supercharged_ok && t.epsilon_ok && in.eta0 > t.threshold;
  return t;
}

CriteriaReport evaluate_criteria(const CriteriaInputs& in) {
  CriteriaReport r;
  r.inputs = in;
  r.uncharged.applicable = in.coupling == 0.0;
  r.uncharged.threshold = big_e(in.delta0);
  r.uncharged.margin = in.eta0 - r.uncharged.threshold;
  r.uncharged.verdict = in.eta0 > r.uncharged.threshold;
  r.minkowskian.applicable = in.minkowskian_cbar && in.coupling == 0.0;
  r.minkowskian.threshold = 4.5 * in.delta0;
  r.minkowskian.margin = in.eta0 - r.minkowskian.threshold;
  r.minkowskian.verdict = in.eta0 > r.minkowskian.threshold;
  r.charged = charged_criterion(in);
  return r;
}

CriteriaInputs criteria_inputs(const CharacteristicData& data, const PhysicalParams& params) {
  CriteriaInputs in;
  in.eta0 = data.eta0;
  in.delta0 = data.delta0;
  in.epsilon = data.epsilon;
  in.big_l = data.big_l;
  in.omega = params.omega;
  in.coupling = params.coupling;
  in.dv = data.grid.v2 - data.grid.v1;
  in.r2_u0 = data.r2_u0;
  in.sup_phi1_sq = data.sup_phi1_sq;
  in.supercharged = data.supercharged;
  in.minkowskian_cbar = data.minkowskian_cbar;
  return in;
}

CriteriaReport evaluate_criteria(const CharacteristicData& data, const PhysicalParams& params) {
  return evaluate_criteria(criteria_inputs(data, params));
}

nlohmann::json to_json(const CriteriaReport& r) {
  const auto& in = r.inputs;
  const auto& t = r.charged;
  nlohmann::json j;
  j["inputs"] = {{"eta0", num(in.eta0)},
                 {"delta0", num(in.delta0)},
                 {"epsilon", num(in.epsilon)},
                 {"L", num(in.big_l)},
                 {"omega", num(in.omega)},
                 {"coupling", num(in.coupling)},
                 {"dv", num(in.dv)},
                 {"r2_u0", num(in.r2_u0)},
                 {"sup_phi1_sq", num(in.sup_phi1_sq)},
                 {"supercharged", in.supercharged},
                 {"minkowskian_cbar", in.minkowskian_cbar}};
  j["uncharged"] = {{"applicable", r.uncharged.applicable},
                {"threshold", num(r.uncharged.threshold)},
                {"margin", num(r.uncharged.margin)},
                {"verdict", r.uncharged.verdict}};
  j["minkowskian"] = {{"applicable", r.minkowskian.applicable},
                {"threshold", num(r.minkowskian.threshold)},
                {"margin", num(r.minkowskian.margin)},
                {"verdict", r.minkowskian.verdict}};
  j["charged"] = {{"width", {{"lhs", num(t.width_lhs)}, {"rhs", num(t.width_rhs)},
                           {"margin", num(t.width_rhs - t.width_lhs)}, {"ok", t.width_ok}}},
                {"width_alt", {{"lhs", num(t.width_alt_lhs)}, {"rhs", num(t.width_rhs)},
                                     {"margin", num(t.width_rhs - t.width_alt_lhs)}, {"ok", t.width_alt_ok}}},
                {"amplitude", {{"lhs", num(t.amplitude_lhs)}, {"rhs", num(t.amplitude_rhs)},
                                   {"margin", num(t.amplitude_rhs - t.amplitude_lhs)},
                                   {"ok", t.amplitude_ok}}},
                {"amplitude_alt", {{"lhs", num(t.amplitude_alt_lhs)}, {"rhs", num(t.amplitude_alt_rhs)},
                                 {"margin", num(t.amplitude_alt_rhs - t.amplitude_alt_lhs)},
                                 {"ok", t.amplitude_alt_ok}}},
                {"supercharged_ok", t.supercharged_ok},
                {"epsilon_ok", t.epsilon_ok},
                {"threshold_charge", num(t.threshold_charge)},
                {"threshold_shape", num(t.threshold_shape)},
                {"threshold", num(t.threshold)},
                {"margin", num(t.margin)},
                {"verdict", t.verdict}};
  return j;
}

void write_e_table(std::ostream& os, const std::vector<double>& deltas) {
  CsvWriter csv(os);
  csv.header({"delta0", "E", "threshold_minkowskian"});
  for (double d : deltas) csv.row({d, big_e(d), 4.5 * d});
}

void write_g_table(std::ostream& os, const std::vector<double>& deltas, const std::vector<double>& omegas,
                   double epsilon) {
  CsvWriter csv(os);
  csv.header({"delta0", "omega", "g_omega", "threshold_charge", "threshold_shape", "threshold"});
  for (double d : deltas)
    for (double w : omegas) {
      CriteriaInputs in;
      in.delta0 = d;
      in.omega = w;
      in.epsilon = epsilon;
      const ChargedCriterion t = charged_criterion(in);
      csv.row({d, w, g_omega(w, d), t.threshold_charge, t.threshold_shape, t.threshold});
    }
}

}  // namespace collapse
