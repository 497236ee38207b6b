#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "necrosim/interfaces.hpp"
#include "necrosim/linearization.hpp"
#include "necrosim/phi.hpp"

namespace necrosim {

struct StepDiagnostics {
  double dt = 0.0;
  int steps = 0;
  int rejected = 0;
  SolveDiagnostics nutrient;
  SolveDiagnostics pressure;
};

/// Interfaces at a time together with Phi evaluated there.
struct EvolutionState {
  double time = 0.0;
  InterfacePair interfaces;
  FourierSeries velocity1;
  FourierSeries velocity2;
  StepDiagnostics diagnostics;
};

/// Evaluates Phi at the given interfaces and packages the state.
EvolutionState make_state(const PhiModel& model, const InterfacePair& interfaces, double time = 0.0);

/// One first-order IMEX step: the principal symbol is implicit, Phi - principal is explicit.
/// Throws InterfaceCollision (admissibility lost) or NumericalBlowup (non-finite values).
EvolutionState step(const PhiModel& model, const EvolutionState& state, double dt);
/// Convenience form with the default discretisation at the interface truncation.
EvolutionState step(const EvolutionState& state, double dt, const GeometryParams& geom, const BioParams& bio);

struct EvolveOptions {
  double t_end = 0.1;
  double dt = 1e-3;
  /// Snapshot spacing in time; 0 records every accepted step.
  double output_every = 0.0;
  /// A step is rejected when ||Phi_new|| > factor * ||Phi_old|| + floor.
  double rejection_factor = 10.0;
  double rejection_floor = 1e-6;
  double min_dt = 1e-12;
  long max_steps = 10'000'000;
};

enum class Termination { kCompleted, kInterfaceCollision, kNumericalBlowup, kSolverFailure, kStepLimit };

std::string to_string(Termination t);

struct Trajectory {
  std::vector<EvolutionState> snapshots;
  Termination termination = Termination::kCompleted;
  std::string message;
  double final_time = 0.0;
  long steps = 0;
  long rejected = 0;
  /// Largest sup norm of rho_1, rho_2 minus their initial values over recorded snapshots.
  double max_drift = 0.0;
};

using SnapshotCallback = std::function<void(const EvolutionState&)>;

/// Integrates to t_end or the first error; errors end the run with a partial trajectory.
Trajectory evolve(const PhiModel& model, const InterfacePair& initial, const EvolveOptions& options,
                  const SnapshotCallback& on_snapshot = {});

/// Least-squares slope of ln sqrt(|rho1_m|^2 + |rho2_m|^2) over snapshots with t in [t_from, t_to].
double mode_decay_rate(const Trajectory& trajectory, int m, double t_from, double t_to);

}  // namespace necrosim
