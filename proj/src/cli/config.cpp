#include "necrosim/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "necrosim/errors.hpp"

namespace necrosim::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& target, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("wrong type for '") + key + "' in " + where);
  }
}

std::string scheme_name(RadialScheme s) { return s == RadialScheme::kChebyshev ? "chebyshev" : "fd2"; }

RadialScheme scheme_from(const std::string& s) {
  if (s == "chebyshev") return RadialScheme::kChebyshev;
  if (s == "fd2") return RadialScheme::kFiniteDifference;
  throw ConfigError("scheme must be 'chebyshev' or 'fd2'");
}

}  // namespace

void RunConfig::validate() const {
  geometry.validate();
  if (!(psi0 > 0) || !std::isfinite(psi0)) throw ConfigError("psi0 must be positive");
  if (!derive_stationary && (!std::isfinite(A) || !std::isfinite(G))) throw ConfigError("A and G must be finite");
  DiscretizationParams params;
  params.modes = modes;
  params.radial_points = radial_points;
  params.scheme = scheme;
  params.validate();
  if (!(t_end >= 0) || !(dt > 0) || !(output_every >= 0)) throw ConfigError("time settings need t_end >= 0, dt > 0, output_every >= 0");
  if (m_max < 1) throw ConfigError("m_max must be at least 1");
  for (const SeedSpec& s : seeds) {
    if (s.interface != 1 && s.interface != 2) throw ConfigError("seed interface must be 1 or 2");
    if (s.mode < 0 || s.mode > modes) throw ConfigError("seed mode must lie in [0, modes]");
    if (!std::isfinite(s.amplitude) || !std::isfinite(s.phase)) throw ConfigError("seed values must be finite");
  }
  if (amplitude_bound) {
    const double a = *amplitude_bound;
    if (!(a > 0) || !(a < geometry.max_amplitude_bound())) throw ConfigError("amplitude_bound must lie in (0, (R1-R2)/(R1+R2))");
  }
  for (double p : sweep_psi0) {
    if (!(p > 0) || !std::isfinite(p)) throw ConfigError("sweep psi0 values must be positive");
  }
}

std::string to_json_string(const RunConfig& c) {
  json seeds = json::array();
  for (const SeedSpec& s : c.seeds) {
    seeds.push_back({{"interface", s.interface}, {"mode", s.mode}, {"amplitude", s.amplitude}, {"phase", s.phase}});
  }
  json bio = {{"derive_stationary", c.derive_stationary}, {"psi0", c.psi0}};
  if (!c.derive_stationary) {
    bio["A"] = c.A;
    bio["G"] = c.G;
  }
  json j = {
      {"geometry", {{"R1", c.geometry.R1}, {"R2", c.geometry.R2}}},
      {"bio", bio},
      {"discretization", {{"modes", c.modes}, {"radial_points", c.radial_points}, {"scheme", scheme_name(c.scheme)}}},
      {"time", {{"t_end", c.t_end}, {"dt", c.dt}, {"output_every", c.output_every}}},
      {"seeds", seeds},
      {"spectrum", {{"m_max", c.m_max}}},
      {"sweep", {{"psi0", c.sweep_psi0}}},
      {"output", {{"dir", c.output_dir}}},
  };
  if (c.amplitude_bound) j["amplitude_bound"] = *c.amplitude_bound;
  return j.dump(2);
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"geometry", "bio", "discretization", "time", "seeds", "spectrum", "sweep", "output", "amplitude_bound"},
                 "config");
  RunConfig c;
  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    reject_unknown(g, {"R1", "R2"}, "geometry");
    read(g, "R1", c.geometry.R1, "geometry");
    read(g, "R2", c.geometry.R2, "geometry");
  }
  if (j.contains("bio")) {
    const json& b = j["bio"];
    reject_unknown(b, {"derive_stationary", "A", "G", "psi0"}, "bio");
    read(b, "psi0", c.psi0, "bio");
    const bool explicit_ag = b.contains("A") || b.contains("G");
    c.derive_stationary = !explicit_ag;
    read(b, "derive_stationary", c.derive_stationary, "bio");
    if (!c.derive_stationary && !(b.contains("A") && b.contains("G"))) throw ConfigError("bio needs both A and G");
    read(b, "A", c.A, "bio");
    read(b, "G", c.G, "bio");
    if (c.derive_stationary) c.A = c.G = 0.0;
  }
  if (j.contains("discretization")) {
    const json& d = j["discretization"];
    reject_unknown(d, {"modes", "radial_points", "scheme"}, "discretization");
    read(d, "modes", c.modes, "discretization");
    read(d, "radial_points", c.radial_points, "discretization");
    std::string scheme = scheme_name(c.scheme);
    read(d, "scheme", scheme, "discretization");
    c.scheme = scheme_from(scheme);
  }
  if (j.contains("time")) {
    const json& t = j["time"];
    reject_unknown(t, {"t_end", "dt", "output_every"}, "time");
    read(t, "t_end", c.t_end, "time");
    read(t, "dt", c.dt, "time");
    read(t, "output_every", c.output_every, "time");
  }
  if (j.contains("seeds")) {
    if (!j["seeds"].is_array()) throw ConfigError("seeds must be an array");
    for (const json& s : j["seeds"]) {
      reject_unknown(s, {"interface", "mode", "amplitude", "phase"}, "seed");
      SeedSpec seed;
      read(s, "interface", seed.interface, "seed");
      read(s, "mode", seed.mode, "seed");
      read(s, "amplitude", seed.amplitude, "seed");
      read(s, "phase", seed.phase, "seed");
      c.seeds.push_back(seed);
    }
  }
  if (j.contains("spectrum")) {
    reject_unknown(j["spectrum"], {"m_max"}, "spectrum");
    read(j["spectrum"], "m_max", c.m_max, "spectrum");
  }
  if (j.contains("sweep")) {
    reject_unknown(j["sweep"], {"psi0"}, "sweep");
    read(j["sweep"], "psi0", c.sweep_psi0, "sweep");
  }
  if (j.contains("output")) {
    reject_unknown(j["output"], {"dir"}, "output");
    read(j["output"], "dir", c.output_dir, "output");
  }
  if (j.contains("amplitude_bound")) {
    double a = 0.0;
    read(j, "amplitude_bound", a, "config");
    c.amplitude_bound = a;
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

SeedSpec parse_seed(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() < 3 || parts.size() > 4) throw ConfigError("seed must be interface:mode:amplitude[:phase]");
  try {
    SeedSpec s;
    s.interface = std::stoi(parts[0]);
    s.mode = std::stoi(parts[1]);
    s.amplitude = std::stod(parts[2]);
    if (parts.size() == 4) s.phase = std::stod(parts[3]);
    return s;
  } catch (const std::exception&) {
    throw ConfigError("seed must be interface:mode:amplitude[:phase]");
  }
}

}  // namespace necrosim::cli
