#include "necrosim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "necrosim/errors.hpp"

namespace necrosim {
namespace {

bool all_finite(const FourierSeries& f) {
  for (const Complex& c : f.coefficients()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

double velocity_norm(const EvolutionState& s) { return std::max(s.velocity1.l2_norm(), s.velocity2.l2_norm()); }

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kCompleted: return "Completed";
    case Termination::kInterfaceCollision: return "InterfaceCollision";
    case Termination::kNumericalBlowup: return "NumericalBlowup";
    case Termination::kSolverFailure: return "SolverFailure";
    case Termination::kStepLimit: return "StepLimit";
  }
  return "Unknown";
}

EvolutionState make_state(const PhiModel& model, const InterfacePair& interfaces, double time) {
  const int M = model.modes();
  EvolutionState s;
  s.time = time;
  s.interfaces = {interfaces.rho1.resized(M), interfaces.rho2.resized(M), interfaces.amplitude_bound};
  const PhiEvaluation phi = model(s.interfaces);
  s.velocity1 = phi.phi1;
  s.velocity2 = phi.phi2;
  s.diagnostics.nutrient = phi.nutrient;
  s.diagnostics.pressure = phi.pressure;
  return s;
}

EvolutionState step(const PhiModel& model, const EvolutionState& state, double dt) {
  if (!(dt > 0)) throw DomainError("time step must be positive");
  const int M = model.modes();
  InterfacePair next = InterfacePair::zero(M);
  next.amplitude_bound = state.interfaces.amplitude_bound;
  const FourierSeries r1 = state.interfaces.rho1.resized(M);
  const FourierSeries r2 = state.interfaces.rho2.resized(M);
  const FourierSeries f1 = state.velocity1.resized(M);
  const FourierSeries f2 = state.velocity2.resized(M);

  for (int m = 0; m <= M; ++m) {
    const Eigen::Matrix2d P = principal_symbol(model.geometry(), m).matrix;
    const Eigen::Matrix2d A = Eigen::Matrix2d::Identity() - dt * P;
    const Eigen::Vector2cd x(r1[m], r2[m]);
    const Eigen::Vector2cd f(f1[m], f2[m]);
    const Eigen::Vector2cd rhs = x + dt * (f - P.cast<Complex>() * x);
    const Eigen::Vector2cd y = A.cast<Complex>().partialPivLu().solve(rhs);
    next.rho1.coefficient(m) = y(0);
    next.rho2.coefficient(m) = y(1);
  }
  next.rho1.coefficient(0) = Complex(next.rho1[0].real(), 0.0);
  next.rho2.coefficient(0) = Complex(next.rho2[0].real(), 0.0);

  const double t_new = state.time + dt;
  if (!all_finite(next.rho1) || !all_finite(next.rho2)) {
    std::ostringstream os;
    os << "non-finite interface coefficients at t = " << t_new;
    throw NumericalBlowup(os.str());
  }
  next.check_admissible(model.geometry());

  EvolutionState out = make_state(model, next, t_new);
  if (!all_finite(out.velocity1) || !all_finite(out.velocity2)) {
    std::ostringstream os;
    os << "non-finite normal velocity at t = " << t_new;
    throw NumericalBlowup(os.str());
  }
  out.diagnostics.dt = dt;
  out.diagnostics.steps = state.diagnostics.steps + 1;
  out.diagnostics.rejected = state.diagnostics.rejected;
  return out;
}

EvolutionState step(const EvolutionState& state, double dt, const GeometryParams& geom, const BioParams& bio) {
  DiscretizationParams params;
  params.modes = std::max(state.interfaces.max_mode(), 1);
  const PhiModel model(geom, params, bio);
  return step(model, state, dt);
}

Trajectory evolve(const PhiModel& model, const InterfacePair& initial, const EvolveOptions& options,
                  const SnapshotCallback& on_snapshot) {
  if (!(options.t_end >= 0) || !(options.dt > 0) || !(options.output_every >= 0)) {
    throw ConfigError("evolve requires t_end >= 0, dt > 0 and output_every >= 0");
  }
  Trajectory traj;
  auto record = [&](const EvolutionState& s) {
    traj.snapshots.push_back(s);
    if (on_snapshot) on_snapshot(traj.snapshots.back());
  };
  auto fail = [&](Termination t, const std::string& what) {
    traj.termination = t;
    traj.message = what;
  };

  EvolutionState state;
  try {
    state = make_state(model, initial, 0.0);
  } catch (const InterfaceCollision& e) {
    fail(Termination::kInterfaceCollision, e.what());
    return traj;
  } catch (const SolverFailure& e) {
    fail(Termination::kSolverFailure, e.what());
    return traj;
  }
  state.diagnostics.dt = options.dt;
  record(state);

  const double t_end = options.t_end;
  const double t_tol = 1e-12 * std::max(1.0, t_end);
  double next_output = options.output_every > 0 ? options.output_every : 0.0;
  double dt = options.dt;
  int accepted_run = 0;
  bool last_recorded = true;

  while (state.time < t_end - t_tol) {
    double h = std::min(dt, t_end - state.time);
    if (options.output_every > 0 && next_output - state.time > t_tol) h = std::min(h, next_output - state.time);

    EvolutionState candidate;
    try {
      candidate = step(model, state, h);
    } catch (const InterfaceCollision& e) {
      fail(Termination::kInterfaceCollision, e.what());
      break;
    } catch (const DegenerateInterface& e) {
      fail(Termination::kInterfaceCollision, e.what());
      break;
    } catch (const NumericalBlowup& e) {
      fail(Termination::kNumericalBlowup, e.what());
      break;
    } catch (const SolverFailure& e) {
      fail(Termination::kSolverFailure, e.what());
      break;
    }

    if (velocity_norm(candidate) > options.rejection_factor * velocity_norm(state) + options.rejection_floor) {
      ++traj.rejected;
      accepted_run = 0;
      dt = h / 2;
      if (dt < options.min_dt) {
        std::ostringstream os;
        os << "time step fell below " << options.min_dt << " at t = " << state.time;
        fail(Termination::kNumericalBlowup, os.str());
        break;
      }
      continue;
    }

    candidate.diagnostics.rejected = static_cast<int>(traj.rejected);
    state = std::move(candidate);
    ++traj.steps;
    last_recorded = false;
    if (++accepted_run >= 8 && dt < options.dt) {
      dt = std::min(2 * dt, options.dt);
      accepted_run = 0;
    }

    if (options.output_every == 0) {
      record(state);
      last_recorded = true;
    } else if (state.time >= next_output - t_tol) {
      record(state);
      last_recorded = true;
      while (next_output <= state.time + t_tol) next_output += options.output_every;
    }
    if (traj.steps >= options.max_steps) {
      fail(Termination::kStepLimit, "maximum number of steps reached");
      break;
    }
  }
  if (!last_recorded) record(state);
  traj.final_time = state.time;

  const InterfacePair& first = traj.snapshots.front().interfaces;
  for (const EvolutionState& s : traj.snapshots) {
    traj.max_drift = std::max({traj.max_drift, (s.interfaces.rho1 - first.rho1).sup_norm(),
                               (s.interfaces.rho2 - first.rho2).sup_norm()});
  }
  return traj;
}

double mode_decay_rate(const Trajectory& trajectory, int m, double t_from, double t_to) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (const EvolutionState& s : trajectory.snapshots) {
    if (s.time < t_from - 1e-14 || s.time > t_to + 1e-14) continue;
    const double amp = std::hypot(std::abs(s.interfaces.rho1[m]), std::abs(s.interfaces.rho2[m]));
    if (!(amp > 0)) continue;
    const double y = std::log(amp);
    st += s.time;
    sy += y;
    stt += s.time * s.time;
    sty += s.time * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace necrosim
