#pragma once

#include <vector>

#include "collapse/profile.hpp"
#include "collapse/state.hpp"

namespace collapse {

/// Data on the outgoing cone u = u0, from the axis v = 0 up to v2. The node
/// set is {0} followed by a uniform lattice aligned with the strip, so
/// points[strip_offset + j] sits at grid.v(j).
struct OutgoingCone {
  std::vector<double> v;
  std::vector<FieldPoint> points;
  int strip_offset = 0;

  const FieldPoint& at_strip(int j) const { return points[strip_offset + j]; }
};

/// Data on the incoming cone v = v1, from u0 to u_reached. `truncated` is set
/// when r fell below r_floor before u_end.
struct IncomingCone {
  std::vector<double> u;
  std::vector<FieldPoint> points;
  bool truncated = false;
  double u_reached = 0.0;
};

struct CharacteristicData {
  OutgoingCone cone_c;
  IncomingCone cone_cbar;
  GridSpec grid;           // as requested; cone_cbar may hold fewer than n_u points
  PhysicalParams params;   // r_floor resolved
  double eta0 = 0.0;
  double delta0 = 0.0;
  double epsilon = 0.0;
  double big_l = 0.0;
  double sup_phi1_sq = 0.0;
  bool supercharged = false;
  double x_star = 0.0;
  double r2_u0 = 0.0;
  bool minkowskian_cbar = false;
};

/// Integrates the v-constraints along u = u0 from the axis with classical RK4.
/// `du_phi_corner` is du phi(u0, v1) from the incoming profile; it anchors
/// r D_u phi at v1. A_u is shifted to vanish at v1.
OutgoingCone build_outgoing_cone(const Profile& profile, const GridSpec& grid,
                                 const PhysicalParams& params, cplx du_phi_corner = {});

/// Integrates the u-constraints along v = v1 with classical RK4 in the gauge
/// A_u = 0. The profile is offset so phi is continuous at the corner:
/// phi(u) = corner.phi + p(u) - p(u0). `r_floor` <= 0 disables truncation.
IncomingCone build_incoming_cone(const Profile& profile, const FieldPoint& corner,
                                 const GridSpec& grid, const PhysicalParams& params,
                                 double r_floor);

/// Computes eta0, delta0, epsilon, L, the supercharged flag and x*.
/// Throws DataError when epsilon >= 1.
CharacteristicData derive_scalars(const OutgoingCone& cone_c, const IncomingCone& cone_cbar,
                                  const GridSpec& grid);

/// Builds both cones and the derived scalars. A non-positive params.r_floor
/// is replaced by 1e-3 * r(u0, v2).
CharacteristicData build_characteristic_data(const ProfileSpec& profile_c,
                                             const ProfileSpec& profile_cbar,
                                             const GridSpec& grid, const PhysicalParams& params);

/// End of the u-range used when none is configured: the incoming cone reaches
/// r = 0 near u0 + 2 r(u0, v1) / (1 - epsilon_C); truncation at r_floor
/// shortens it further.
double default_u_end(const OutgoingCone& cone_c, const GridSpec& grid);

}  // namespace collapse
