#pragma once

#include <optional>
#include <string>
#include <vector>

#include "necrosim/annulus.hpp"
#include "necrosim/stationary.hpp"

namespace necrosim::cli {

/// One cosine seed added to an interface: amplitude * cos(mode * theta + phase).
struct SeedSpec {
  int interface = 1;
  int mode = 1;
  double amplitude = 0.0;
  double phase = 0.0;
  bool operator==(const SeedSpec&) const = default;
};

struct RunConfig {
  GeometryParams geometry;
  /// When set, (A, G) are taken from the stationary solve and the explicit values are ignored.
  bool derive_stationary = true;
  double A = 0.0;
  double G = 0.0;
  double psi0 = 1.0;
  int modes = 64;
  int radial_points = 48;
  RadialScheme scheme = RadialScheme::kChebyshev;
  double t_end = 0.1;
  double dt = 1e-3;
  double output_every = 0.0;
  std::vector<SeedSpec> seeds;
  std::optional<double> amplitude_bound;
  int m_max = 64;
  /// psi0 values visited by the sweep command.
  std::vector<double> sweep_psi0;
  std::string output_dir = "necrosim_out";

  /// Throws ConfigError on any violated precondition.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

std::string to_json_string(const RunConfig& config);
/// Parses and validates; unknown keys and wrong types are ConfigErrors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Parses "interface:mode:amplitude[:phase]".
SeedSpec parse_seed(const std::string& text);

}  // namespace necrosim::cli
