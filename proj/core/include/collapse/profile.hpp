#pragma once

#include <memory>
#include <string>
#include <vector>

#include "collapse/state.hpp"

namespace collapse {

enum class ProfileKind { zero, gaussian, bump, sampled };

const char* to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string& s);

/// Free scalar-field data along one null cone, as a function of the cone's
/// null coordinate s.
///   gaussian: A exp(-(s-c)^2/w^2) e^{i k s}
///   bump:     A exp(1 - 1/(1-z^2)) e^{i k s}, z = (s-c)/w, zero for |z| >= 1
///   sampled:  cubic B-spline through uniformly spaced (s, Re, Im) samples
struct ProfileSpec {
  ProfileKind kind = ProfileKind::zero;
  cplx amplitude{0.0, 0.0};
  double center = 0.0;
  double width = 1.0;
  double phase_rate = 0.0;
  std::vector<double> sample_coords;
  std::vector<cplx> sample_values;

  void validate(const std::string& where) const;
  bool identically_zero() const;
};

/// Reads a sampled profile from CSV with columns (coord, re, im). A header
/// line is allowed. Coordinates must be uniformly spaced.
ProfileSpec read_profile_csv(const std::string& path);

/// Evaluator for a ProfileSpec; cheap to copy.
class Profile {
 public:
  Profile() = default;
  explicit Profile(ProfileSpec spec);

  cplx value(double s) const;
  cplx derivative(double s) const;
  const ProfileSpec& spec() const { return spec_; }

 private:
  struct Spline;
  ProfileSpec spec_;
  std::shared_ptr<const Spline> spline_;
};

}  // namespace collapse
