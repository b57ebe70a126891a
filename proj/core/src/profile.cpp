#include "collapse/profile.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

namespace collapse {

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::zero: return "zero";
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::bump: return "bump";
    case ProfileKind::sampled: return "sampled";
  }
  return "zero";
}

ProfileKind profile_kind_from_string(const std::string& s) {
  if (s == "zero") return ProfileKind::zero;
  if (s == "gaussian") return ProfileKind::gaussian;
  if (s == "bump") return ProfileKind::bump;
  if (s == "sampled" || s == "custom-sampled") return ProfileKind::sampled;
  throw ConfigError("kind", "unknown profile kind '" + s + "'");
}

void ProfileSpec::validate(const std::string& where) const {
  if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
    throw ConfigError(where + ".amplitude", "must be finite");
  if (!std::isfinite(center)) throw ConfigError(where + ".center", "must be finite");
  if (!std::isfinite(phase_rate)) throw ConfigError(where + ".phase_rate", "must be finite");
  if ((kind == ProfileKind::gaussian || kind == ProfileKind::bump) && !(width > 0.0))
    throw ConfigError(where + ".width", "must be > 0");
  if (kind == ProfileKind::sampled) {
    if (sample_coords.size() < 4 || sample_coords.size() != sample_values.size())
      throw ConfigError(where + ".samples", "need at least 4 (coord, re, im) rows");
    const double h = sample_coords[1] - sample_coords[0];
    if (!(h > 0.0)) throw ConfigError(where + ".samples", "coordinates must increase");
    for (std::size_t k = 1; k < sample_coords.size(); ++k) {
      const double hk = sample_coords[k] - sample_coords[k - 1];
      if (std::abs(hk - h) > 1e-9 * std::max(1.0, std::abs(h)))
        throw ConfigError(where + ".samples", "coordinates must be uniformly spaced");
    }
  }
}

bool ProfileSpec::identically_zero() const {
  if (kind == ProfileKind::zero) return true;
  if (kind == ProfileKind::sampled) {
    for (const auto& z : sample_values)
      if (z != cplx{}) return false;
    return true;
  }
  return amplitude == cplx{};
}

ProfileSpec read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("samples", "cannot open profile file '" + path + "'");
  ProfileSpec spec;
  spec.kind = ProfileKind::sampled;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    double s, re, im;
    if (!(ls >> s >> re >> im)) {
      if (spec.sample_coords.empty()) continue;  // header
      throw ConfigError("samples", path + ":" + std::to_string(lineno) + ": expected coord,re,im");
    }
    spec.sample_coords.push_back(s);
    spec.sample_values.emplace_back(re, im);
  }
  spec.validate("profile");
  return spec;
}

struct Profile::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> re;
  boost::math::interpolators::cardinal_cubic_b_spline<double> im;
  double lo, hi;
};

namespace {

std::vector<double> component(const std::vector<cplx>& v, bool imag) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& z : v) out.push_back(imag ? z.imag() : z.real());
  return out;
}

}  // namespace

Profile::Profile(ProfileSpec spec) : spec_(std::move(spec)) {
  spec_.validate("profile");
  if (spec_.kind == ProfileKind::sampled) {
    const auto& c = spec_.sample_coords;
    const double h = (c.back() - c.front()) / static_cast<double>(c.size() - 1);
    auto re = component(spec_.sample_values, false);
    auto im = component(spec_.sample_values, true);
    using S = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    spline_ = std::make_shared<const Spline>(Spline{S(re.begin(), re.end(), c.front(), h),
                                                   S(im.begin(), im.end(), c.front(), h),
                                                   c.front(), c.back()});
  }
}

cplx Profile::value(double s) const {
  switch (spec_.kind) {
    case ProfileKind::zero: return {};
    case ProfileKind::gaussian: {
      const double z = (s - spec_.center) / spec_.width;
      return spec_.amplitude * std::exp(-z * z) * std::polar(1.0, spec_.phase_rate * s);
    }
    case ProfileKind::bump: {
      const double z = (s - spec_.center) / spec_.width;
      if (std::abs(z) >= 1.0) return {};
      return spec_.amplitude * std::exp(1.0 - 1.0 / (1.0 - z * z)) *
             std::polar(1.0, spec_.phase_rate * s);
    }
    case ProfileKind::sampled: {
      const double eps = 1e-12 * std::max(1.0, std::abs(spline_->hi));
      if (s < spline_->lo - eps || s > spline_->hi + eps)
        throw DomainError("sampled profile evaluated outside its coordinate range");
      return {spline_->re(s), spline_->im(s)};
    }
  }
  return {};
}

cplx Profile::derivative(double s) const {
  switch (spec_.kind) {
    case ProfileKind::zero: return {};
    case ProfileKind::gaussian: {
      const double z = (s - spec_.center) / spec_.width;
      const cplx f = spec_.amplitude * std::exp(-z * z) * std::polar(1.0, spec_.phase_rate * s);
      return f * cplx(-2.0 * z / spec_.width, spec_.phase_rate);
    }
    case ProfileKind::bump: {
      const double z = (s - spec_.center) / spec_.width;
      if (std::abs(z) >= 1.0) return {};
      const double d = 1.0 - z * z;
      const cplx f = spec_.amplitude * std::exp(1.0 - 1.0 / d) * std::polar(1.0, spec_.phase_rate * s);
      return f * cplx(-2.0 * z / (d * d * spec_.width), spec_.phase_rate);
    }
    case ProfileKind::sampled: {
      const double eps = 1e-12 * std::max(1.0, std::abs(spline_->hi));
      if (s < spline_->lo - eps || s > spline_->hi + eps)
        throw DomainError("sampled profile evaluated outside its coordinate range");
      return {spline_->re.prime(s), spline_->im.prime(s)};
    }
  }
  return {};
}

}  // namespace collapse
