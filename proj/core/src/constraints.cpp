#include "collapse/constraints.hpp"

#include <algorithm>
#include <cmath>

namespace collapse {

ResidualSeries constraint_residuals(const Solution& sol) {
  ResidualSeries out;
  const int nv = sol.grid.n_v;
  const double hu = sol.grid.hu();
  const double hv = sol.grid.hv();
  const double e = sol.params.coupling;
  // u-stencils start at slice 2 so that only evolved slices enter: slice 0
  // carries the fourth-order cone data, whose error differs from the scheme.
  for (int i = 2; i + 1 < sol.n_slices; ++i) {
    double s3 = 0.0, s4 = 0.0, s8 = 0.0, smu = 0.0, smv = 0.0;
    for (int j = 1; j + 1 < nv; ++j) {
      const FieldPoint& c = sol.at(i, j);
      const FieldPoint& n = sol.at(i + 1, j);
      const FieldPoint& s = sol.at(i - 1, j);
      const FieldPoint& ea = sol.at(i, j + 1);
      const FieldPoint& we = sol.at(i, j - 1);
      const double inv_o2 = 1.0 / c.lapse_sq();
      const cplx dv_phi = (ea.phi - we.phi) / (2.0 * hv);
      const double qr2 = c.q * c.q / (c.r * c.r);

      const double du_x = (n.dur / n.lapse_sq() - s.dur / s.lapse_sq()) / (2.0 * hu);
      const double r3 = du_x + 4.0 * pi * c.r * inv_o2 * std::norm(c.du_phi);

      const double dv_y = (ea.dvr() / ea.lapse_sq() - we.dvr() / we.lapse_sq()) / (2.0 * hv);
      const double r4 = dv_y + 4.0 * pi * c.r * inv_o2 * std::norm(dv_phi);

      const double du_q = (n.q - s.q) / (2.0 * hu);
      const double r8 = du_q - 4.0 * pi * e * c.r * c.r * std::imag(std::conj(c.phi) * c.du_phi);

      const double du_m = (n.mass - s.mass) / (2.0 * hu);
      const double rmu = du_m + 8.0 * pi * c.r * c.r * inv_o2 * c.dvr() * std::norm(c.du_phi) -
                         0.5 * qr2 * c.dur;
      const double dv_m = (ea.mass - we.mass) / (2.0 * hv);
      const double rmv = dv_m + 8.0 * pi * c.r * c.r * inv_o2 * c.dur * std::norm(dv_phi) -
                         0.5 * qr2 * c.dvr();

      s3 = std::max(s3, std::abs(r3));
      s4 = std::max(s4, std::abs(r4));
      s8 = std::max(s8, std::abs(r8));
      smu = std::max(smu, std::abs(rmu));
      smv = std::max(smv, std::abs(rmv));
    }
    out.slice.push_back(i);
    out.u.push_back(sol.u(i));
    out.raychaudhuri_u.push_back(s3);
    out.raychaudhuri_v.push_back(s4);
    out.maxwell_u.push_back(s8);
    out.mass_u.push_back(smu);
    out.mass_v.push_back(smv);
    out.max_raychaudhuri_u = std::max(out.max_raychaudhuri_u, s3);
    out.max_raychaudhuri_v = std::max(out.max_raychaudhuri_v, s4);
    out.max_maxwell_u = std::max(out.max_maxwell_u, s8);
    out.max_mass_u = std::max(out.max_mass_u, smu);
    out.max_mass_v = std::max(out.max_mass_v, smv);
  }
  return out;
}

}  // namespace collapse
