#pragma once

#include <string>
#include <vector>

#include "necrosim/stationary.hpp"

namespace necrosim {

struct VerifyOptions {
  GeometryParams geometry;
  double psi0 = 1.0;
  int modes = 32;
  int radial_points = 48;
  /// Negative-path hook: the Wronskian check multiplies K by (1 + 1e-9).
  bool perturb_bessel_k = false;
};

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Runs the invariant suite: Bessel identities, stationary oracles, solver oracle,
/// Phi stationarity, symmetries and Jacobian-vs-symbol.
VerificationReport run_verification(const VerifyOptions& options);

}  // namespace necrosim
