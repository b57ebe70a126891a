#include "collapse/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace collapse {

namespace {

// Outgoing state: r, dv r, r du r, Q, A_u, Re(r D_u phi), Im(r D_u phi).
using OutState = std::array<double, 7>;
// Incoming state: r, du r, r dv r, Q.
using InState = std::array<double, 4>;

template <std::size_t N>
std::array<double, N> axpy(const std::array<double, N>& y, double a, const std::array<double, N>& k) {
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * k[i];
  return out;
}

template <std::size_t N, class F>
std::array<double, N> rk4_step(F&& f, double s, const std::array<double, N>& y, double h) {
  const auto k1 = f(s, y);
  const auto k2 = f(s + 0.5 * h, axpy(y, 0.5 * h, k1));
  const auto k3 = f(s + 0.5 * h, axpy(y, 0.5 * h, k2));
  const auto k4 = f(s + h, axpy(y, h, k3));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double safe_ratio(double num, double r) { return r > 0.0 ? num / r : 0.0; }

}  // namespace

OutgoingCone build_outgoing_cone(const Profile& profile, const GridSpec& grid,
                                 const PhysicalParams& params, cplx du_phi_corner) {
  grid.validate();
  const double e = params.coupling;
  const double hv = grid.hv();

  // Lattice below v1, stepping down by hv; the first step from the axis is
  // partial with length in (hv/4, 5hv/4].
  int k_below = static_cast<int>(std::floor(grid.v1 / hv - 0.25));
  if (k_below < 0) k_below = 0;

  OutgoingCone cone;
  cone.v.reserve(k_below + grid.n_v + 1);
  cone.v.push_back(0.0);
  for (int k = k_below; k >= 1; --k) cone.v.push_back(grid.v1 - k * hv);
  cone.strip_offset = static_cast<int>(cone.v.size());
  for (int j = 0; j < grid.n_v; ++j) cone.v.push_back(grid.v(j));

  auto rhs = [&](double v, const OutState& y) {
    const double r = y[0];
    const cplx phi = profile.value(v);
    const cplx dphi = profile.derivative(v);
    const double q = y[3];
    const double q_over_r = safe_ratio(q, r);
    const double dur = r > 0.0 ? y[2] / r : -0.5;
    const cplx pi_src = -dphi * dur - cplx(0.0, e) * q_over_r * phi / 4.0;
    OutState d;
    d[0] = y[1];
    d[1] = -4.0 * pi * r * std::norm(dphi);
    d[2] = -0.25 * (1.0 - q_over_r * q_over_r);
    d[3] = -4.0 * pi * e * r * r * std::imag(std::conj(phi) * dphi);
    d[4] = r > 0.0 ? -q / (2.0 * r * r) : 0.0;
    d[5] = pi_src.real();
    d[6] = pi_src.imag();
    return d;
  };

  std::vector<OutState> ys;
  ys.reserve(cone.v.size());
  OutState y{0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0};
  ys.push_back(y);
  for (std::size_t k = 1; k < cone.v.size(); ++k) {
    y = rk4_step(rhs, cone.v[k - 1], y, cone.v[k] - cone.v[k - 1]);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]))
      throw DataError("outgoing cone integration produced non-finite values");
    if (!(y[1] > 0.0)) throw DataError("data already trapped on C");
    if (!(y[0] > ys.back()[0])) throw DataError("outgoing cone radius is not increasing");
    ys.push_back(y);
  }

  const OutState& corner = ys[cone.strip_offset];
  const double a_shift = corner[4];
  const cplx pi_shift = corner[0] * du_phi_corner - cplx(corner[5], corner[6]);

  cone.points.resize(ys.size());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const auto& s = ys[k];
    FieldPoint& p = cone.points[k];
    p.r = s[0];
    p.w = s[0] * s[1];
    p.dur = s[0] > 0.0 ? s[2] / s[0] : -0.5;
    p.ln_lapse = 0.0;
    p.phi = profile.value(cone.v[k]);
    p.a_u = s[4] - a_shift;
    p.q = s[3];
    const cplx big_pi = cplx(s[5], s[6]) + pi_shift;
    p.du_phi = s[0] > 0.0 ? big_pi / s[0] : cplx{};
    p.mass = s[0] > 0.0 ? hawking_mass(p.r, p.dur, s[1], 1.0) : 0.0;
  }
  return cone;
}

IncomingCone build_incoming_cone(const Profile& profile, const FieldPoint& corner,
                                 const GridSpec& grid, const PhysicalParams& params,
                                 double r_floor) {
  grid.validate();
  const double e = params.coupling;
  const cplx p0 = profile.value(grid.u0);
  auto phi_at = [&](double u) { return corner.phi + (profile.value(u) - p0); };

  auto rhs = [&](double u, const InState& y) {
    const double r = y[0];
    const cplx phi = phi_at(u);
    const cplx dphi = profile.derivative(u);
    const double q_over_r = y[3] / r;
    InState d;
    d[0] = y[1];
    d[1] = -4.0 * pi * r * std::norm(dphi);
    d[2] = -0.25 * (1.0 - q_over_r * q_over_r);
    d[3] = 4.0 * pi * e * r * r * std::imag(std::conj(phi) * dphi);
    return d;
  };

  auto make_point = [&](double u, const InState& s) {
    FieldPoint p;
    p.r = s[0];
    p.dur = s[1];
    p.w = s[2];
    p.ln_lapse = 0.0;
    p.phi = phi_at(u);
    p.du_phi = profile.derivative(u);
    p.a_u = 0.0;
    p.q = s[3];
    p.mass = hawking_mass(p.r, p.dur, p.dvr(), 1.0);
    return p;
  };

  IncomingCone cone;
  cone.u.reserve(grid.n_u);
  cone.points.reserve(grid.n_u);
  InState y{corner.r, corner.dur, corner.w, corner.q};
  cone.u.push_back(grid.u0);
  cone.points.push_back(make_point(grid.u0, y));
  cone.points.front().phi = corner.phi;
  for (int i = 1; i < grid.n_u; ++i) {
    const double u_prev = grid.u(i - 1);
    const double u = grid.u(i);
    const InState next = rk4_step(rhs, u_prev, y, u - u_prev);
    if (!std::isfinite(next[0]) || !std::isfinite(next[2]))
      throw DataError("incoming cone integration produced non-finite values");
    if (next[0] < r_floor || !(next[0] > 0.0)) {
      cone.truncated = true;
      break;
    }
    if (!(next[2] > 0.0)) throw DataError("data already trapped on C-bar");
    y = next;
    cone.u.push_back(u);
    cone.points.push_back(make_point(u, y));
  }
  cone.u_reached = cone.u.back();
  return cone;
}

CharacteristicData derive_scalars(const OutgoingCone& cone_c, const IncomingCone& cone_cbar,
                                  const GridSpec& grid) {
  CharacteristicData d;
  d.cone_c = cone_c;
  d.cone_cbar = cone_cbar;
  d.grid = grid;
  if (cone_cbar.points.size() < 2) throw DataError("incoming cone shorter than two grid points");

  const FieldPoint& p1 = cone_c.at_strip(0);
  const FieldPoint& p2 = cone_c.at_strip(grid.n_v - 1);
  d.r2_u0 = p2.r;
  d.eta0 = 2.0 * (p2.mass - p1.mass) / p2.r;
  d.delta0 = p2.r / p1.r - 1.0;
  d.x_star = 3.0 * d.delta0 / (1.0 + d.delta0);

  double eps = 0.0;
  for (const auto& p : cone_c.points)
    if (p.r > 0.0) eps = std::max(eps, p.q * p.q / (p.r * p.r));
  double big_l = 0.0, sup_phi = 0.0;
  bool super = false;
  for (const auto& p : cone_cbar.points) {
    eps = std::max(eps, p.q * p.q / (p.r * p.r));
    big_l = std::max(big_l, p.r * std::norm(p.phi));
    sup_phi = std::max(sup_phi, std::norm(p.phi));
    if (p.mass < std::abs(p.q) - 1e-12 * p.r) super = true;
  }
  d.epsilon = eps;
  d.big_l = big_l;
  d.sup_phi1_sq = sup_phi;
  d.supercharged = super;
  if (!(eps < 1.0)) throw DataError("epsilon = sup Q^2/r^2 must be < 1");
  return d;
}

double default_u_end(const OutgoingCone& cone_c, const GridSpec& grid) {
  double eps = 0.0;
  for (const auto& p : cone_c.points)
    if (p.r > 0.0) eps = std::max(eps, p.q * p.q / (p.r * p.r));
  eps = std::min(eps, 0.5);
  return grid.u0 + 2.0 * cone_c.at_strip(0).r / (1.0 - eps);
}

CharacteristicData build_characteristic_data(const ProfileSpec& profile_c,
                                             const ProfileSpec& profile_cbar,
                                             const GridSpec& grid, const PhysicalParams& params) {
  grid.validate();
  params.validate();
  const Profile pc(profile_c);
  const Profile pcbar(profile_cbar);
  const OutgoingCone cone_c = build_outgoing_cone(pc, grid, params, pcbar.derivative(grid.u0));
  PhysicalParams resolved = params;
  if (!(resolved.r_floor > 0.0)) resolved.r_floor = 1e-3 * cone_c.at_strip(grid.n_v - 1).r;
  const IncomingCone cone_cbar =
      build_incoming_cone(pcbar, cone_c.at_strip(0), grid, resolved, resolved.r_floor);
  CharacteristicData d = derive_scalars(cone_c, cone_cbar, grid);
  d.params = resolved;
  const FieldPoint& corner = cone_c.at_strip(0);
  d.minkowskian_cbar = profile_cbar.identically_zero() && corner.phi == cplx{} &&
                       corner.q == 0.0 && std::abs(corner.mass) <= 1e-12 * corner.r;
  return d;
}

}  // namespace collapse
