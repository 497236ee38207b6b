#include <doctest.h>

#include <cmath>

#include "necrosim/errors.hpp"
#include "necrosim/evolution.hpp"

using namespace necrosim;

namespace {

const GeometryParams kGeom{2, 1};

DiscretizationParams params(int M) {
  DiscretizationParams p;
  p.modes = M;
  return p;
}

BioParams stationary_bio() { return solve_stationary(kGeom, 1.0).bio(1.0); }

double sup_rho(const EvolutionState& s) { return std::max(s.interfaces.rho1.sup_norm(), s.interfaces.rho2.sup_norm()); }

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("stationary annulus: 100 IMEX steps stay below 1e-7") {
    const PhiModel model(kGeom, params(32), stationary_bio());
    EvolutionState s = make_state(model, InterfacePair::zero(32));
    for (int n = 0; n < 100; ++n) s = step(model, s, 1e-3);
    CHECK(s.time == doctest::Approx(0.1));
    CHECK(sup_rho(s) < 1e-7);
  }

  TEST_CASE("stationary annulus: trajectory constant within 1e-6 up to t = 1") {
    const PhiModel model(kGeom, params(16), stationary_bio());
    EvolveOptions o;
    o.t_end = 1.0;
    o.dt = 1e-3;
    o.output_every = 0.1;
    const Trajectory tr = evolve(model, InterfacePair::zero(16), o);
    CHECK(tr.termination == Termination::kCompleted);
    CHECK(tr.final_time == doctest::Approx(1.0));
    CHECK(tr.max_drift < 1e-6);
    CHECK(tr.snapshots.size() == 11);
  }

  TEST_CASE("zero perturbation with non-stationary (A, G) stays radial") {
    const PhiModel model(kGeom, params(16), BioParams{1.0, 1.0, 1.0});
    EvolveOptions o;
    o.t_end = 0.05;
    o.dt = 1e-3;
    const Trajectory tr = evolve(model, InterfacePair::zero(16), o);
    const InterfacePair& last = tr.snapshots.back().interfaces;
    CHECK(std::abs(last.rho1[0]) > 1e-4);
    for (int m = 1; m <= 16; ++m) {
      CHECK(std::abs(last.rho1[m]) < 1e-10);
      CHECK(std::abs(last.rho2[m]) < 1e-10);
    }
  }

  TEST_CASE("even data stays even") {
    const PhiModel model(kGeom, params(16), stationary_bio());
    InterfacePair rho = InterfacePair::zero(16);
    rho.rho1 = FourierSeries::cosine(16, 2, 0.01) + FourierSeries::cosine(16, 5, 0.003);
    rho.rho2 = FourierSeries::cosine(16, 3, 0.005);
    EvolveOptions o;
    o.t_end = 0.02;
    o.dt = 1e-3;
    const Trajectory tr = evolve(model, rho, o);
    for (const EvolutionState& s : tr.snapshots) {
      for (int m = 0; m <= 16; ++m) {
        CHECK(std::abs(s.interfaces.rho1[m].imag()) < 1e-10);
        CHECK(std::abs(s.interfaces.rho2[m].imag()) < 1e-10);
      }
    }
  }

  TEST_CASE("single-mode decay at m = 8 matches the dominant eigenvalue within 10%") {
    const PhiModel model(kGeom, params(32), stationary_bio());
    InterfacePair rho = InterfacePair::zero(32);
    rho.rho1 = FourierSeries::cosine(32, 8, 1e-4);
    EvolveOptions o;
    o.t_end = 0.01;
    o.dt = 1e-4;
    const Trajectory tr = evolve(model, rho, o);
    const double rate = mode_decay_rate(tr, 8, 0.0, 0.01);
    const double lambda = linearized_symbol(model, 8).dominant_eigenvalue().real();
    CHECK(rate / lambda == doctest::Approx(1.0).epsilon(0.10));
  }

  TEST_CASE("first-order convergence under dt halving") {
    const PhiModel model(kGeom, params(16), stationary_bio());
    InterfacePair rho = InterfacePair::zero(16);
    rho.rho1 = FourierSeries::cosine(16, 2, 0.01) + FourierSeries::cosine(16, 3, 0.005, 0.4);
    rho.rho2 = FourierSeries::cosine(16, 1, 0.01);
    std::vector<InterfacePair> finals;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      EvolveOptions o;
      o.t_end = 0.1;
      o.dt = dt;
      finals.push_back(evolve(model, rho, o).snapshots.back().interfaces);
    }
    const double e1 = (finals[0].rho1 - finals[1].rho1).sup_norm() + (finals[0].rho2 - finals[1].rho2).sup_norm();
    const double e2 = (finals[1].rho1 - finals[2].rho1).sup_norm() + (finals[1].rho2 - finals[2].rho2).sup_norm();
    CHECK(e1 / e2 > 1.7);
    CHECK(e1 / e2 < 2.4);
  }

  TEST_CASE("large seeds end cleanly with InterfaceCollision") {
    const PhiModel model(kGeom, params(16), BioParams{1.0, 1.0, 1.0});
    InterfacePair rho = InterfacePair::zero(16);
    rho.rho1 = FourierSeries::cosine(16, 2, 0.35);
    EvolveOptions o;
    o.t_end = 0.1;
    const Trajectory start = evolve(model, rho, o);
    CHECK(start.termination == Termination::kInterfaceCollision);
    CHECK_FALSE(start.message.empty());

    // Grows past the bound during the run: the trajectory is kept up to the failure.
    rho.rho1 = FourierSeries::constant(16, 0.25);
    o.t_end = 10.0;
    o.dt = 1e-2;
    const Trajectory tr = evolve(model, rho, o);
    if (tr.termination == Termination::kInterfaceCollision) CHECK(!tr.snapshots.empty());
    CHECK(tr.termination != Termination::kNumericalBlowup);
  }

  TEST_CASE("step errors") {
    const PhiModel model(kGeom, params(8), BioParams{1.0, 1.0, 1.0});
    const EvolutionState s = make_state(model, InterfacePair::zero(8));
    CHECK_THROWS_AS(step(model, s, 0.0), DomainError);
    EvolveOptions bad;
    bad.dt = -1;
    CHECK_THROWS_AS(evolve(model, InterfacePair::zero(8), bad), ConfigError);
  }

  TEST_CASE("step rejection shrinks dt until the floor") {
    const PhiModel model(kGeom, params(8), BioParams{1.0, 1.0, 1.0});
    EvolveOptions o;
    o.t_end = 0.1;
    o.dt = 1e-3;
    o.rejection_factor = 1e-3;
    o.rejection_floor = 0.0;
    o.min_dt = 1e-5;
    const Trajectory tr = evolve(model, InterfacePair::zero(8), o);
    CHECK(tr.rejected > 0);
    CHECK(tr.termination == Termination::kNumericalBlowup);
  }

  TEST_CASE("snapshots and callbacks") {
    const PhiModel model(kGeom, params(8), stationary_bio());
    EvolveOptions o;
    o.t_end = 0.05;
    o.dt = 4e-3;
    o.output_every = 0.01;
    std::vector<double> times;
    const Trajectory tr = evolve(model, InterfacePair::zero(8), o, [&](const EvolutionState& s) { times.push_back(s.time); });
    REQUIRE(times.size() == 6);
    for (int k = 0; k <= 5; ++k) CHECK(times[k] == doctest::Approx(0.01 * k));
    CHECK(tr.snapshots.size() == times.size());
    CHECK(std::isnan(mode_decay_rate(Trajectory{}, 1, 0, 1)));
  }

  TEST_CASE("convenience step uses the interface truncation") {
    const BioParams bio = stationary_bio();
    const PhiModel model(kGeom, params(8), bio);
    const EvolutionState s = make_state(model, InterfacePair::zero(8));
    const EvolutionState a = step(model, s, 1e-3);
    const EvolutionState b = step(s, 1e-3, kGeom, bio);
    CHECK(a.interfaces.rho1.max_coefficient_difference(b.interfaces.rho1) < 1e-14);
  }
}
