#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace collapse {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Raised when a pointwise formula is evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when prescribed data cannot be turned into a valid configuration
/// (already trapped, non-monotone radius, epsilon >= 1, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid grid or parameter settings. `field` names the offender.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct PhysicalParams {
  double coupling = 0.0;             // e, scalar/Maxwell coupling
  double omega = 0.5;                // margin parameter, open interval (0, 2/3)
  double r_floor = 0.0;              // <= 0 selects 1e-3 * r(u0, v2)
  double residual_warn_scale = 10.0; // monitor tolerance multiplier

  void validate() const;
};

struct GridSpec {
  double u0 = 0.0;
  double u_end = 1.0;
  double v1 = 1.0;
  double v2 = 2.0;
  int n_u = 2;
  int n_v = 2;

  double hu() const { return (u_end - u0) / (n_u - 1); }
  double hv() const { return (v2 - v1) / (n_v - 1); }
  double u(int i) const { return i == n_u - 1 ? u_end : u0 + i * hu(); }
  double v(int j) const { return j == n_v - 1 ? v2 : v1 + j * hv(); }

  void validate() const;
};

/// Full state at one grid point. `w` is r * dv r; `du_phi` is the gauge
/// covariant derivative D_u phi = du phi + i e A_u phi.
struct FieldPoint {
  double r = 0.0;
  double dur = 0.0;
  double w = 0.0;
  double ln_lapse = 0.0;
  cplx phi{};
  cplx du_phi{};
  double a_u = 0.0;
  double q = 0.0;
  double mass = 0.0;

  double dvr() const { return w / r; }
  double lapse_sq() const { return std::exp(2.0 * ln_lapse); }
};

enum class PointClass { regular, mots, trapped };

const char* to_string(PointClass c);

/// m = (r/2)(1 + 4 dur dvr / Omega^2).
double hawking_mass(double r, double dur, double dvr, double omega_sq);

/// Recomputes the cached mass from the other fields.
double hawking_mass(const FieldPoint& p);

/// Trapped if dv r < -tol and du r < 0, MOTS if |dv r| <= tol and du r < 0.
PointClass classify_point(const FieldPoint& p, double tol);

/// F_uv = Q Omega^2 / (2 r^2).
double f_uv_from_charge(double q, double r, double omega_sq);

/// Q = 2 r^2 F_uv / Omega^2.
double charge_from_f_uv(double f_uv, double r, double omega_sq);

}  // namespace collapse
