#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "collapse/evolution.hpp"

namespace collapse {

namespace {

constexpr const char* kFormat = "collapse-checkpoint";
constexpr int kVersion = 1;
constexpr int kColumns = 11;

}  // namespace

Checkpoint make_checkpoint(const Solution& sol, int n_slices) {
  if (n_slices < 0 || n_slices > sol.n_slices) n_slices = sol.n_slices;
  Checkpoint cp;
  cp.grid = sol.grid;
  cp.params = sol.params;
  cp.n_slices = n_slices;
  cp.fields.assign(sol.fields.begin(),
                   sol.fields.begin() + static_cast<std::ptrdiff_t>(n_slices) * sol.grid.n_v);
  return cp;
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("checkpoint", "cannot write '" + path + "'");
  nlohmann::json h;
  h["format"] = kFormat;
  h["version"] = kVersion;
  h["grid"] = {{"u0", cp.grid.u0}, {"u_end", cp.grid.u_end}, {"v1", cp.grid.v1},
               {"v2", cp.grid.v2}, {"n_u", cp.grid.n_u},     {"n_v", cp.grid.n_v}};
  h["params"] = {{"coupling", cp.params.coupling},
                 {"omega", cp.params.omega},
                 {"r_floor", cp.params.r_floor},
                 {"residual_warn_scale", cp.params.residual_warn_scale}};
  h["n_slices"] = cp.n_slices;
  h["columns"] = {"r", "dur", "w", "ln_lapse", "re_phi", "im_phi", "re_du_phi", "im_du_phi", "a_u", "q", "mass"};
  out << h.dump() << '\n';
  char buf[64];
  for (const FieldPoint& p : cp.fields) {
    const double vals[kColumns] = {p.r,          p.dur,          p.w,           p.ln_lapse,
                                   p.phi.real(), p.phi.imag(),   p.du_phi.real(), p.du_phi.imag(),
                                   p.a_u,        p.q,            p.mass};
    for (int c = 0; c < kColumns; ++c) {
      std::snprintf(buf, sizeof buf, "%a", vals[c]);
      out << buf << (c + 1 == kColumns ? '\n' : ' ');
    }
  }
  if (!out) throw ConfigError("checkpoint", "write failed for '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("checkpoint", "cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("checkpoint", std::string("bad header: ") + ex.what());
  }
  if (h.value("format", "") != kFormat || h.value("version", 0) != kVersion)
    throw ConfigError("checkpoint", "unsupported checkpoint format");
  Checkpoint cp;
  const auto& g = h.at("grid");
  cp.grid.u0 = g.at("u0").get<double>();
  cp.grid.u_end = g.at("u_end").get<double>();
  cp.grid.v1 = g.at("v1").get<double>();
  cp.grid.v2 = g.at("v2").get<double>();
  cp.grid.n_u = g.at("n_u").get<int>();
  cp.grid.n_v = g.at("n_v").get<int>();
  const auto& p = h.at("params");
  cp.params.coupling = p.at("coupling").get<double>();
  cp.params.omega = p.at("omega").get<double>();
  cp.params.r_floor = p.at("r_floor").get<double>();
  cp.params.residual_warn_scale = p.at("residual_warn_scale").get<double>();
  cp.n_slices = h.at("n_slices").get<int>();

  const std::size_t count = static_cast<std::size_t>(cp.n_slices) * cp.grid.n_v;
  cp.fields.resize(count);
  std::string tok;
  for (std::size_t k = 0; k < count; ++k) {
    double vals[kColumns];
    for (int c = 0; c < kColumns; ++c) {
      if (!(in >> tok)) throw ConfigError("checkpoint", "truncated field table");
      char* end = nullptr;
      vals[c] = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') throw ConfigError("checkpoint", "bad number '" + tok + "'");
    }
    FieldPoint& fp = cp.fields[k];
    fp.r = vals[0];
    fp.dur = vals[1];
    fp.w = vals[2];
    fp.ln_lapse = vals[3];
    fp.phi = {vals[4], vals[5]};
    fp.du_phi = {vals[6], vals[7]};
    fp.a_u = vals[8];
    fp.q = vals[9];
    fp.mass = vals[10];
  }
  return cp;
}

}  // namespace collapse
