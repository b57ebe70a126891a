#pragma once

#include "collapse/evolution.hpp"

namespace collapse {

/// Centered-difference residuals at interior points of the stored region
/// (slices 2 .. n-2, columns 1 .. n_v-2):
///   raychaudhuri_u:  du(Omega^-2 du r) + 4 pi r Omega^-2 |D_u phi|^2
///   raychaudhuri_v:  dv(Omega^-2 dv r) + 4 pi r Omega^-2 |dv phi|^2
///   maxwell_u:  du Q - 4 pi e r^2 Im(conj(phi) D_u phi)
///   mass_u: du m + 8 pi r^2 Omega^-2 dv r |D_u phi|^2 - Q^2 du r / (2 r^2)
///   mass_v: dv m + 8 pi r^2 Omega^-2 du r |dv phi|^2 - Q^2 dv r / (2 r^2)
ResidualSeries constraint_residuals(const Solution& sol);

}  // namespace collapse
