#pragma once

#include <memory>

#include "necrosim/annulus.hpp"
#include "necrosim/fourier.hpp"
#include "necrosim/interfaces.hpp"
#include "necrosim/stationary.hpp"

namespace necrosim {

/// kappa(rho) = ((1+rho)^2 + 2 rho'^2 - (1+rho) rho'') / ((1+rho)^2 + rho'^2)^{3/2}.
struct CurvatureTrace {
  FourierSeries kappa;
};

/// Curvature of r = 1 + rho(theta), evaluated on the transform grid and truncated.
/// Throws DegenerateInterface if 1 + rho <= 0 at a grid point.
CurvatureTrace curvature(const FourierSeries& rho, const AngularTransform& transform);
CurvatureTrace curvature(const FourierSeries& rho);

/// Normal velocities (Phi_1, Phi_2) of the two interfaces plus solver diagnostics.
struct PhiEvaluation {
  FourierSeries phi1;
  FourierSeries phi2;
  SolveDiagnostics nutrient;
  SolveDiagnostics pressure;

  const FourierSeries& operator[](int i) const { return i == 0 ? phi1 : phi2; }
};

/// Phi(rho1, rho2) for fixed discretisation and model constants.
///
/// Phi_i = (1/R_i) C_i v - (1/R_i) C_i q - AG (1 + rho_i) / 2, where v solves the
/// transformed nutrient problem (data G, G - psi0) and q the transformed
/// pressure problem with curvature data. Immutable; evaluations may run
/// concurrently.
class PhiModel {
 public:
  PhiModel(std::shared_ptr<const AnnulusDiscretization> disc, const BioParams& bio);
  PhiModel(const GeometryParams& geom, const DiscretizationParams& params, const BioParams& bio);

  const AnnulusDiscretization& discretization() const { return *disc_; }
  const GeometryParams& geometry() const { return disc_->geometry(); }
  const BioParams& bio() const { return bio_; }
  int modes() const { return disc_->modes(); }

  PhiEvaluation operator()(const InterfacePair& rho) const;

  /// Dirichlet data of the pressure problem for the given interfaces.
  BoundaryData pressure_data(const InterfacePair& rho) const;

 private:
  std::shared_ptr<const AnnulusDiscretization> disc_;
  BioParams bio_;
  RadialLift nutrient_lift_;
  RadialLift pressure_lift_;
};

PhiEvaluation assemble_phi(const AnnulusDiscretization& disc, const BioParams& bio, const InterfacePair& rho);
/// Uses the default discretisation with M equal to the interface truncation.
PhiEvaluation assemble_phi(const GeometryParams& geom, const BioParams& bio, const InterfacePair& rho);

}  // namespace necrosim
