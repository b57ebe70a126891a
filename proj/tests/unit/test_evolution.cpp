#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "../support/families.hpp"
#include "collapse/constraints.hpp"
#include "collapse/evolution.hpp"

using namespace collapse;

namespace {
GridSpec strip(int n_u, int n_v) { return GridSpec{-1.0, -0.6, 1.0, 2.0, n_u, n_v}; }

ProfileSpec gaussian(double a, double k = 0.0) {
  ProfileSpec s;
  s.kind = ProfileKind::gaussian;
  s.amplitude = {a, 0.0};
  s.center = 1.5;
  s.width = 0.2;
  s.phase_rate = k;
  return s;
}

bool same_bits(const Solution& a, const Solution& b) {
  return a.n_slices == b.n_slices && a.fields.size() == b.fields.size() &&
         std::memcmp(a.fields.data(), b.fields.data(), a.fields.size() * sizeof(FieldPoint)) == 0;
}

family::Point supercritical(int n_v = 65) {
  family::Spec s;
  s.kind = ProfileKind::bump;
  s.amplitude = 0.02;
  s.delta0 = 0.05;
  return family::calibrate(s, n_v);
}
}  // namespace

TEST(Evolution, MinkowskiIsReproducedExactly) {
  const GridSpec g{-1.0, -0.5, 1.0, 2.0, 129, 129};
  const CharacteristicData d = build_characteristic_data({}, {}, g, {});
  const Solution s = evolve(d, StopPolicy::run_to_end);
  ASSERT_EQ(s.status, RunStatus::completed);
  ASSERT_EQ(s.n_slices, 129);
  EXPECT_FALSE(s.first_mots);
  for (int i = 0; i < s.n_slices; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      const FieldPoint& p = s.at(i, j);
      EXPECT_NEAR(p.r, 0.5 * (s.v(j) - (s.u(i) - g.u0)), 1e-13);
      EXPECT_NEAR(p.mass, 0.0, 1e-13);
      EXPECT_NEAR(p.ln_lapse, 0.0, 1e-13);
    }
  EXPECT_LE(s.residuals.max_raychaudhuri_u, 1e-12);
  EXPECT_LE(s.residuals.max_raychaudhuri_v, 1e-12);
  EXPECT_LE(s.residuals.max_mass_u, 1e-12);
  EXPECT_LE(s.residuals.max_mass_v, 1e-12);
}

TEST(Evolution, SecondOrderSelfConvergence) {
  for (double e : {0.0, 0.5}) {
    PhysicalParams p;
    p.coupling = e;
    const ConvergenceResult c = convergence_order(gaussian(0.05, e > 0 ? 3.0 : 0.0), {}, strip(33, 33), p, 3);
    ASSERT_EQ(c.resolutions.size(), 3u);
    EXPECT_EQ(c.resolutions[2], 129);
    EXPECT_NEAR(c.order(), 2.0, 0.15) << "e = " << e;
    EXPECT_FALSE(c.exact);
  }
}

TEST(Evolution, ConvergenceOfFlatDataIsExact) {
  const ConvergenceResult c = convergence_order({}, {}, strip(17, 17), {}, 3);
  EXPECT_TRUE(c.exact);
}

TEST(Evolution, ConvergenceNeedsThreeLevels) {
  EXPECT_THROW(convergence_order({}, {}, strip(17, 17), {}, 2), ConfigError);
}

TEST(Evolution, RepeatedRunsAreBitIdentical) {
  PhysicalParams p;
  p.coupling = 0.5;
  const CharacteristicData d = build_characteristic_data(gaussian(0.05, 3.0), {}, strip(65, 65), p);
  EXPECT_TRUE(same_bits(evolve(d, StopPolicy::run_to_end), evolve(d, StopPolicy::run_to_end)));
}

TEST(Evolution, StopsAtFirstMots) {
  const family::Point pt = supercritical();
  const CharacteristicData d = build_characteristic_data(pt.profile_c, pt.profile_cbar, pt.grid, pt.params);
  const Solution stop = evolve(d, StopPolicy::stop_at_first_mots);
  ASSERT_EQ(stop.status, RunStatus::mots_found);
  ASSERT_TRUE(stop.first_mots);
  EXPECT_EQ(stop.n_slices, stop.first_mots->slice + 1);
  EXPECT_GE(stop.first_mots->x, d.x_star);
  EXPECT_LE(stop.at(stop.first_mots->slice, stop.first_mots->j).dvr(), stop.mots_tolerance);

  const Solution full = evolve(d, StopPolicy::run_to_end);
  EXPECT_GT(full.n_slices, stop.n_slices);
  EXPECT_GE(full.first_trapped_slice, stop.first_mots->slice);
  EXPECT_EQ(full.first_mots->slice, stop.first_mots->slice);
  EXPECT_NE(full.status, RunStatus::aborted);
  // Prefix of the longer run is the shorter run.
  EXPECT_EQ(std::memcmp(full.fields.data(), stop.fields.data(), stop.fields.size() * sizeof(FieldPoint)), 0);
}

TEST(Evolution, RunToUStarStopsAfterXStar) {
  const family::Point pt = supercritical();
  const CharacteristicData d = build_characteristic_data(pt.profile_c, pt.profile_cbar, pt.grid, pt.params);
  const Solution s = evolve(d, StopPolicy::run_to_u_star);
  ASSERT_GT(s.n_slices, 1);
  EXPECT_GE(s.series.x[s.n_slices - 2], d.x_star);
}

TEST(Evolution, SliceSeriesStartsAtInitialScalars) {
  PhysicalParams p;
  p.coupling = 0.5;
  const CharacteristicData d = build_characteristic_data(gaussian(0.05, 3.0), {}, strip(33, 33), p);
  const Solution s = evolve(d, StopPolicy::run_to_end);
  EXPECT_DOUBLE_EQ(s.series.eta[0], d.eta0);
  EXPECT_DOUBLE_EQ(s.series.delta[0], d.delta0);
  EXPECT_DOUBLE_EQ(s.series.x[0], 1.0);
  for (int i = 1; i < s.n_slices; ++i) EXPECT_LT(s.series.x[i], s.series.x[i - 1]);
}

TEST(Evolution, ObserverSeesEverySlice) {
  const CharacteristicData d = build_characteristic_data(gaussian(0.03), {}, strip(17, 17), {});
  EvolveOptions o;
  o.stop = StopPolicy::run_to_end;
  int calls = 0;
  o.on_slice = [&](int slice, double u, const std::vector<FieldPoint>& f) {
    EXPECT_EQ(slice, calls);
    EXPECT_DOUBLE_EQ(u, d.grid.u(slice));
    EXPECT_EQ(static_cast<int>(f.size()), 17);
    ++calls;
  };
  const Solution s = evolve(d, o);
  EXPECT_EQ(calls, s.n_slices);
}

TEST(Evolution, MaxSlicesLimitsTheRun) {
  const CharacteristicData d = build_characteristic_data(gaussian(0.03), {}, strip(33, 17), {});
  EvolveOptions o;
  o.stop = StopPolicy::run_to_end;
  o.max_slices = 10;
  EXPECT_EQ(evolve(d, o).n_slices, 10);
}

TEST(Evolution, RunningPastTheAxisEndsAtTheFloor) {
  GridSpec g = strip(129, 33);
  g.u_end = 0.5;
  const CharacteristicData d = build_characteristic_data({}, {}, g, {});
  const Solution s = evolve(d, StopPolicy::run_to_end);
  EXPECT_EQ(s.status, RunStatus::r_floor);
  EXPECT_LT(s.n_slices, 129);
}

TEST(StepSlice, FlatCellIsExact) {
  const GridSpec g{-1.0, -0.5, 1.0, 2.0, 9, 9};
  const CharacteristicData d = build_characteristic_data({}, {}, g, {});
  std::vector<FieldPoint> prev(d.cone_c.points.begin() + d.cone_c.strip_offset, d.cone_c.points.end());
  const StepResult r = step_slice(prev, d.cone_cbar.points[1], g.hu(), g.hv(), d.params);
  ASSERT_EQ(r.status, StepStatus::ok);
  for (int j = 0; j < g.n_v; ++j) {
    EXPECT_NEAR(r.slice[j].r, 0.5 * (g.v(j) - g.hu()), 1e-15);
    EXPECT_NEAR(r.slice[j].dur, -0.5, 1e-15);
  }
}

TEST(StepSlice, NonFiniteInputAborts) {
  const GridSpec g{-1.0, -0.5, 1.0, 2.0, 9, 9};
  const CharacteristicData d = build_characteristic_data({}, {}, g, {});
  std::vector<FieldPoint> prev(d.cone_c.points.begin() + d.cone_c.strip_offset, d.cone_c.points.end());
  prev[4].w = std::nan("");
  const StepResult r = step_slice(prev, d.cone_cbar.points[1], g.hu(), g.hv(), d.params);
  EXPECT_EQ(r.status, StepStatus::aborted);
  EXPECT_EQ(r.failed_column, 4);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  PhysicalParams p;
  p.coupling = 0.5;
  const CharacteristicData d = build_characteristic_data(gaussian(0.05, 3.0), {}, strip(33, 33), p);
  const Solution s = evolve(d, StopPolicy::run_to_end);
  const auto path = std::filesystem::temp_directory_path() / "collapse_cp_roundtrip.txt";
  write_checkpoint(path.string(), make_checkpoint(s));
  const Checkpoint cp = read_checkpoint(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(cp.n_slices, s.n_slices);
  EXPECT_EQ(cp.grid.n_v, s.grid.n_v);
  EXPECT_EQ(cp.params.coupling, 0.5);
  ASSERT_EQ(cp.fields.size(), s.fields.size());
  EXPECT_EQ(std::memcmp(cp.fields.data(), s.fields.data(), s.fields.size() * sizeof(FieldPoint)), 0);
}

TEST(Checkpoint, ResumeMatchesUninterruptedRun) {
  PhysicalParams p;
  p.coupling = 0.5;
  const CharacteristicData d = build_characteristic_data(gaussian(0.05, 3.0), {}, strip(65, 33), p);
  const Solution full = evolve(d, StopPolicy::run_to_end);
  EvolveOptions o;
  o.stop = StopPolicy::run_to_end;
  o.max_slices = 20;
  const Solution part = evolve(d, o);
  const auto path = std::filesystem::temp_directory_path() / "collapse_cp_resume.txt";
  write_checkpoint(path.string(), make_checkpoint(part));
  EvolveOptions rest;
  rest.stop = StopPolicy::run_to_end;
  const Solution resumed = resume(d, read_checkpoint(path.string()), rest);
  std::filesystem::remove(path);
  EXPECT_TRUE(same_bits(full, resumed));
  EXPECT_EQ(full.status, resumed.status);
}

TEST(Checkpoint, RejectsMismatchedGrid) {
  const CharacteristicData d = build_characteristic_data({}, {}, strip(17, 17), {});
  Checkpoint cp = make_checkpoint(evolve(d, StopPolicy::run_to_end));
  cp.grid.n_v = 9;
  EXPECT_THROW(resume(d, cp), ConfigError);
  EXPECT_THROW(read_checkpoint("/nonexistent/cp.txt"), ConfigError);
}

TEST(Constraints, ResidualsConvergeAtSecondOrder) {
  PhysicalParams p;
  p.coupling = 0.5;
  double prev3 = 0.0, prev4 = 0.0, prev8 = 0.0;
  for (int n : {65, 129}) {
    const CharacteristicData d = build_characteristic_data(gaussian(0.05, 3.0), {}, strip(n, n), p);
    const ResidualSeries r = evolve(d, StopPolicy::run_to_end).residuals;
    if (prev3 > 0.0) {
      EXPECT_NEAR(prev3 / r.max_raychaudhuri_u, 4.0, 0.5);
      EXPECT_NEAR(prev4 / r.max_raychaudhuri_v, 4.0, 0.5);
      EXPECT_NEAR(prev8 / r.max_maxwell_u, 4.0, 0.5);
    }
    prev3 = r.max_raychaudhuri_u;
    prev4 = r.max_raychaudhuri_v;
    prev8 = r.max_maxwell_u;
  }
}

TEST(Constraints, MaxwellResidualVanishesForRealData) {
  PhysicalParams p;
  p.coupling = 0.5;
  const CharacteristicData d = build_characteristic_data(gaussian(0.05), {}, strip(33, 33), p);
  EXPECT_LE(evolve(d, StopPolicy::run_to_end).residuals.max_maxwell_u, 1e-14);
}

TEST(Constraints, SeriesCoverInteriorSlices) {
  const CharacteristicData d = build_characteristic_data(gaussian(0.05), {}, strip(33, 33), {});
  const Solution s = evolve(d, StopPolicy::run_to_end);
  const ResidualSeries r = constraint_residuals(s);
  ASSERT_FALSE(r.slice.empty());
  EXPECT_EQ(r.slice.front(), 2);
  EXPECT_EQ(r.slice.back(), s.n_slices - 2);
  EXPECT_EQ(r.raychaudhuri_u.size(), r.slice.size());
}
