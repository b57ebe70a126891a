#include "collapse/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace collapse::cli {

namespace {

using nlohmann::json;

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

// Strict view of a JSON object: every key must be consumed.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_.empty() ? "config" : where_, "must be an object");
  }

  const json* find(const std::string& key) {
    known_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(join(where_, key), "must be a number");
    return v->get<double>();
  }

  std::optional<int> integer(const std::string& key) {
    auto x = number(key);
    if (!x) return std::nullopt;
    if (*x != std::floor(*x) || std::abs(*x) > 1e9) throw ConfigError(join(where_, key), "must be an integer");
    return static_cast<int>(*x);
  }

  std::optional<std::string> text(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(join(where_, key), "must be a string");
    return v->get<std::string>();
  }

  const json* object(const std::string& key) {
    const json* v = find(key);
    if (v && !v->is_object()) throw ConfigError(join(where_, key), "must be an object");
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!known_.count(it.key())) throw ConfigError(join(where_, it.key()), "unknown field");
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> known_;
};

template <class F>
void prefixed(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    const std::string field = e.field();
    const std::string msg = std::string(e.what()).substr(field.size() + 2);
    throw ConfigError(field.rfind(prefix, 0) == 0 ? field : prefix + field, msg);
  }
}

ProfileSpec parse_profile(const json& j, const std::string& where, const std::filesystem::path& base_dir) {
  Fields f(j, where);
  ProfileSpec p;
  const auto kind = f.text("kind");
  if (!kind) throw ConfigError(where + ".kind", "required");
  prefixed(where + ".", [&] { p.kind = profile_kind_from_string(*kind); });
  const double re = f.number("amplitude").value_or(0.0);
  const double im = f.number("amplitude_im").value_or(0.0);
  p.amplitude = cplx(re, im);
  p.center = f.number("center").value_or(p.center);
  p.width = f.number("width").value_or(p.width);
  p.phase_rate = f.number("phase_rate").value_or(p.phase_rate);
  const auto samples = f.text("samples_path");
  f.finish();
  if (p.kind == ProfileKind::sampled) {
    if (!samples) throw ConfigError(where + ".samples_path", "required for sampled profiles");
    std::filesystem::path path(*samples);
    if (path.is_relative()) path = base_dir / path;
    ProfileSpec s;
    prefixed(where + ".", [&] { s = read_profile_csv(path.string()); });
    p.sample_coords = std::move(s.sample_coords);
    p.sample_values = std::move(s.sample_values);
  } else if (samples) {
    throw ConfigError(where + ".samples_path", "only valid for sampled profiles");
  }
  p.validate(where);
  return p;
}

const std::set<std::string>& numeric_fields() {
  static const std::set<std::string> fields = [] {
    std::set<std::string> s = {"grid.u0",        "grid.u_end",   "grid.v1",
                               "grid.v2",        "grid.n_u",     "grid.n_v",
                               "params.coupling", "params.omega", "params.r_floor",
                               "params.residual_warn_scale", "mots_tolerance"};
    for (const char* cone : {"profile_c", "profile_cbar"})
      for (const char* leaf : {"amplitude", "amplitude_im", "center", "width", "phase_rate"})
        s.insert(std::string(cone) + "." + leaf);
    return s;
  }();
  return fields;
}

SweepAxis parse_axis(const json& j, const std::string& where) {
  Fields f(j, where);
  SweepAxis a;
  const auto path = f.text("path");
  if (!path) throw ConfigError(where + ".path", "required");
  if (!is_numeric_field(*path)) throw ConfigError(where + ".path", "'" + *path + "' is not a numeric config field");
  a.path = *path;
  const json* values = f.find("values");
  if (!values || !values->is_array()) throw ConfigError(where + ".values", "must be an array of numbers");
  for (const auto& v : *values) {
    if (!v.is_number()) throw ConfigError(where + ".values", "must be an array of numbers");
    a.values.push_back(v.get<double>());
  }
  if (a.values.empty()) throw ConfigError(where + ".values", "must not be empty");
  f.finish();
  return a;
}

void check_version(Fields& f) {
  const auto v = f.integer("schema_version");
  if (!v) throw ConfigError("schema_version", "required");
  if (*v != schema_version)
    throw ConfigError("schema_version", "unsupported version " + std::to_string(*v) + " (expected " +
                                            std::to_string(schema_version) + ")");
}

}  // namespace

std::vector<std::string> OutputPaths::requested() const {
  std::vector<std::string> out;
  for (const auto* p : {&summary, &slices, &signmap, &monitors, &checkpoint})
    if (!p->empty()) out.push_back(*p);
  return out;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  try {
    return json::parse(in, nullptr, true, false);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", path.string() + ": " + e.what());
  }
}

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir, bool require_version) {
  Fields f(j, "");
  RunConfig cfg;
  if (require_version) {
    check_version(f);
  } else if (f.find("schema_version")) {
    check_version(f);
  }

  const json* grid = f.object("grid");
  if (!grid) throw ConfigError("grid", "required");
  {
    Fields g(*grid, "grid");
    const auto v1 = g.number("v1");
    const auto v2 = g.number("v2");
    const auto n_v = g.integer("n_v");
    if (!v1) throw ConfigError("grid.v1", "required");
    if (!v2) throw ConfigError("grid.v2", "required");
    if (!n_v) throw ConfigError("grid.n_v", "required");
    cfg.grid.v1 = *v1;
    cfg.grid.v2 = *v2;
    cfg.grid.n_v = *n_v;
    const auto u0 = g.number("u0");
    const auto u_end = g.number("u_end");
    const auto n_u = g.integer("n_u");
    cfg.auto_u0 = !u0;
    cfg.auto_u_end = !u_end;
    cfg.auto_n_u = !n_u;
    cfg.grid.u0 = u0.value_or(-*v1);
    cfg.grid.u_end = u_end.value_or(cfg.grid.u0 + 1.0);
    cfg.grid.n_u = n_u.value_or(2);
    g.finish();
    prefixed("grid.", [&] { cfg.grid.validate(); });
  }

  if (const json* params = f.object("params")) {
    Fields p(*params, "params");
    cfg.params.coupling = p.number("coupling").value_or(cfg.params.coupling);
    cfg.params.omega = p.number("omega").value_or(cfg.params.omega);
    cfg.params.r_floor = p.number("r_floor").value_or(cfg.params.r_floor);
    cfg.params.residual_warn_scale = p.number("residual_warn_scale").value_or(cfg.params.residual_warn_scale);
    p.finish();
  }
  prefixed("params.", [&] { cfg.params.validate(); });

  const json* pc = f.object("profile_c");
  if (!pc) throw ConfigError("profile_c", "required");
  cfg.profile_c = parse_profile(*pc, "profile_c", base_dir);
  if (const json* pb = f.object("profile_cbar")) cfg.profile_cbar = parse_profile(*pb, "profile_cbar", base_dir);

  if (const auto stop = f.text("stop_policy")) cfg.stop = stop_policy_from_string(*stop);
  cfg.mots_tolerance = f.number("mots_tolerance").value_or(-1.0);

  if (const json* outputs = f.object("outputs")) {
    Fields o(*outputs, "outputs");
    cfg.outputs.summary = o.text("summary_path").value_or(cfg.outputs.summary);
    cfg.outputs.slices = o.text("slices_path").value_or("");
    cfg.outputs.signmap = o.text("signmap_path").value_or("");
    cfg.outputs.monitors = o.text("monitors_path").value_or("");
    cfg.outputs.checkpoint = o.text("checkpoint_path").value_or("");
    o.finish();
    if (cfg.outputs.summary.empty()) throw ConfigError("outputs.summary_path", "must not be empty");
    auto paths = cfg.outputs.requested();
    std::sort(paths.begin(), paths.end());
    if (std::adjacent_find(paths.begin(), paths.end()) != paths.end())
      throw ConfigError("outputs", "paths must be distinct");
  }
  f.finish();
  return cfg;
}

void override_resolution(RunConfig& cfg, int n) {
  if (n < 2) throw ConfigError("resolution", "must be >= 2");
  if (!cfg.auto_n_u) {
    const double ratio = static_cast<double>(cfg.grid.n_u - 1) / (cfg.grid.n_v - 1);
    cfg.grid.n_u = static_cast<int>(std::lround(ratio * (n - 1))) + 1;
  }
  cfg.grid.n_v = n;
}

CharacteristicData prepare(RunConfig& cfg) {
  GridSpec& g = cfg.grid;
  if (cfg.auto_u_end || cfg.auto_n_u) {
    const Profile cbar(cfg.profile_cbar);
    const OutgoingCone cone = build_outgoing_cone(Profile(cfg.profile_c), g, cfg.params, cbar.derivative(g.u0));
    if (cfg.auto_u_end) g.u_end = default_u_end(cone, g);
    if (cfg.auto_n_u) {
      g.n_u = std::max(2, static_cast<int>(std::ceil((g.u_end - g.u0) / g.hv() - 1e-9)) + 1);
      if (cfg.auto_u_end) g.u_end = g.u0 + (g.n_u - 1) * g.hv();
    }
  }
  prefixed("grid.", [&] { g.validate(); });
  return build_characteristic_data(cfg.profile_c, cfg.profile_cbar, g, cfg.params);
}

SweepConfig parse_sweep_config(const json& j, const std::filesystem::path& base_dir) {
  Fields f(j, "");
  check_version(f);
  SweepConfig s;
  s.base_dir = base_dir;
  const json* base = f.object("base");
  if (!base) throw ConfigError("base", "required");
  s.base = *base;
  prefixed("base.", [&] { parse_run_config(s.base, base_dir, false); });
  const json* a1 = f.object("axis1");
  if (!a1) throw ConfigError("axis1", "required");
  s.axis1 = parse_axis(*a1, "axis1");
  if (const json* a2 = f.object("axis2")) s.axis2 = parse_axis(*a2, "axis2");
  if (s.axis2 && s.axis2->path == s.axis1.path) throw ConfigError("axis2.path", "must differ from axis1.path");
  s.parallelism = f.integer("parallelism").value_or(1);
  if (s.parallelism < 1) throw ConfigError("parallelism", "must be >= 1");
  if (const json* outputs = f.object("outputs")) {
    Fields o(*outputs, "outputs");
    s.table_path = o.text("table_path").value_or(s.table_path);
    o.finish();
    if (s.table_path.empty()) throw ConfigError("outputs.table_path", "must not be empty");
  }
  f.finish();
  return s;
}

bool is_numeric_field(const std::string& path) { return numeric_fields().count(path) > 0; }

json with_field(const json& base, const std::string& path, double value) {
  if (!is_numeric_field(path)) throw ConfigError(path, "not a numeric config field");
  json out = base;
  json* node = &out;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    json& child = (*node)[parts[k]];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw ConfigError(path, "parent is not an object");
    node = &child;
  }
  const std::string& leaf = parts.back();
  if (leaf == "n_u" || leaf == "n_v") {
    if (value != std::floor(value)) throw ConfigError(path, "must be an integer");
    (*node)[leaf] = static_cast<long>(value);
  } else {
    (*node)[leaf] = value;
  }
  return out;
}

}  // namespace collapse::cli
