#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <vector>

#include "collapse/initial_data.hpp"

namespace collapse {

/// E(x) = x/(1+x)^2 [ln(1/(2x)) + 5 - x], x > 0.
double big_e(double x);

/// g_w(x) for w in (0, 2/3), x >= 0.
double g_omega(double omega, double x);

/// Closed forms of G and F on (delta0/(1+delta0), 1]. With omega set they are
/// the charged forms, otherwise the uncharged ones. With y = x(1+d) - d:
///   charged    G = ln(y^{1+w/2}/x^2)
///              F = c d/(1+d)^2 [(2/w)(y^{-w/2} - 1) + d/(1+w/2)(y^{-1-w/2} - 1)],
///                  c = (1+w/2)/(1-w/2)
///   uncharged  G = ln(y/x^2),  F = d/(1+d)^2 [ln(1/y) + d(1/y - 1)]
double big_g(double x, double delta0, std::optional<double> omega);
double big_f(double x, double delta0, std::optional<double> omega);

/// x* = 3 d / (1 + d).
double x_star(double delta0);

struct CriteriaInputs {
  double eta0 = 0.0;
  double delta0 = 0.0;
  double epsilon = 0.0;
  double big_l = 0.0;
  double omega = 0.5;
  double coupling = 0.0;
  double dv = 0.0;            // v2 - v1
  double r2_u0 = 0.0;
  double sup_phi1_sq = 0.0;
  bool supercharged = false;
  bool minkowskian_cbar = false;
};

struct UnchargedCriterion {
  bool applicable = false;    // e = 0
  double threshold = 0.0;     // E(delta0)
  double margin = 0.0;
  bool verdict = false;
};

struct MinkowskianCriterion {
  bool applicable = false;    // Minkowskian incoming data and e = 0
  double threshold = 0.0;     // 4.5 delta0
  double margin = 0.0;
  bool verdict = false;
};

struct ChargedCriterion {
  // Smallness of v2 - v1 (gates the verdict).
  double width_lhs = 0.0, width_rhs = 0.0;
  bool width_ok = false;
  // Same with the L e^2 coefficient found in the charge estimate.
  double width_alt_lhs = 0.0;
  bool width_alt_ok = false;
  double amplitude_lhs = 0.0, amplitude_rhs = 0.0;
  bool amplitude_ok = false;
  // Form used inside the charge estimate; rhs is +inf when e = 0.
  double amplitude_alt_lhs = 0.0, amplitude_alt_rhs = 0.0;
  bool amplitude_alt_ok = false;
  bool supercharged_ok = false;
  bool epsilon_ok = false;
  double threshold_charge = 0.0;  // 13 eps/w + g_w(d)
  double threshold_shape = 0.0;   // 9 d^{1-w/2} / (2^{1+w/2}(1+d)^2) + g_w(d)
  double threshold = 0.0;
  double margin = 0.0;
  bool verdict = false;
};

struct CriteriaReport {
  CriteriaInputs inputs;
  UnchargedCriterion uncharged;
  MinkowskianCriterion minkowskian;
  ChargedCriterion charged;
};

ChargedCriterion charged_criterion(const CriteriaInputs& in);
CriteriaReport evaluate_criteria(const CriteriaInputs& in);
CriteriaInputs criteria_inputs(const CharacteristicData& data, const PhysicalParams& params);
CriteriaReport evaluate_criteria(const CharacteristicData& data, const PhysicalParams& params);

/// Infinite and NaN values serialize as null.
nlohmann::json to_json(const CriteriaReport& r);

/// CSV tables: (delta0, E) and (delta0, omega, g_omega, both thresholds at eps = 0).
void write_e_table(std::ostream& os, const std::vector<double>& deltas);
void write_g_table(std::ostream& os, const std::vector<double>& deltas, const std::vector<double>& omegas,
                   double epsilon = 0.0);

}  // namespace collapse
