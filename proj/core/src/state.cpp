#include "collapse/state.hpp"

namespace collapse {

void PhysicalParams::validate() const {
  if (!(coupling >= 0.0) || !std::isfinite(coupling))
    throw ConfigError("coupling", "must be finite and >= 0");
  if (!(omega > 0.0 && omega < 2.0 / 3.0))
    throw ConfigError("omega", "must lie in (0, 2/3)");
  if (!std::isfinite(r_floor) || r_floor < 0.0)
    throw ConfigError("r_floor", "must be finite and >= 0 (0 selects the default)");
  if (!(residual_warn_scale > 0.0) || !std::isfinite(residual_warn_scale))
    throw ConfigError("residual_warn_scale", "must be finite and > 0");
}

void GridSpec::validate() const {
  if (!std::isfinite(u0)) throw ConfigError("u0", "must be finite");
  if (!(u_end > u0) || !std::isfinite(u_end)) throw ConfigError("u_end", "must exceed u0");
  if (!(v1 > 0.0) || !std::isfinite(v1)) throw ConfigError("v1", "must be > 0");
  if (!(v2 > v1) || !std::isfinite(v2)) throw ConfigError("v2", "must exceed v1");
  if (n_u < 2) throw ConfigError("n_u", "must be >= 2");
  if (n_v < 2) throw ConfigError("n_v", "must be >= 2");
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::regular: return "regular";
    case PointClass::mots: return "mots";
    case PointClass::trapped: return "trapped";
  }
  return "regular";
}

double hawking_mass(double r, double dur, double dvr, double omega_sq) {
  if (!(r > 0.0)) throw DomainError("hawking_mass: r must be positive");
  if (!(omega_sq > 0.0)) throw DomainError("hawking_mass: Omega^2 must be positive");
  return 0.5 * r * (1.0 + 4.0 * dur * dvr / omega_sq);
}

double hawking_mass(const FieldPoint& p) {
  return hawking_mass(p.r, p.dur, p.dvr(), p.lapse_sq());
}

PointClass classify_point(const FieldPoint& p, double tol) {
  const double dvr = p.w / p.r;
  if (p.dur < 0.0) {
    if (dvr < -tol) return PointClass::trapped;
    if (std::abs(dvr) <= tol) return PointClass::mots;
  }
  return PointClass::regular;
}

double f_uv_from_charge(double q, double r, double omega_sq) {
  if (!(r > 0.0)) throw DomainError("f_uv_from_charge: r must be positive");
  if (!(omega_sq > 0.0)) throw DomainError("f_uv_from_charge: Omega^2 must be positive");
  return q * omega_sq / (2.0 * r * r);
}

double charge_from_f_uv(double f_uv, double r, double omega_sq) {
  if (!(r > 0.0)) throw DomainError("charge_from_f_uv: r must be positive");
  if (!(omega_sq > 0.0)) throw DomainError("charge_from_f_uv: Omega^2 must be positive");
  return 2.0 * r * r * f_uv / omega_sq;
}

}  // namespace collapse
