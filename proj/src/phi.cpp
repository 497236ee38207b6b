#include "necrosim/phi.hpp"

#include <cmath>

#include "necrosim/errors.hpp"
#include "necrosim/specfun.hpp"

namespace necrosim {
namespace {

// kappa on the transform grid from rho, rho', rho'' on the same grid.
std::vector<double> curvature_grid(const FourierSeries& rho, const AngularTransform& at) {
  const FourierSeries f = rho.resized(at.max_mode());
  const std::vector<double> h = at.to_grid(f);
  const std::vector<double> h1 = at.to_grid(f.derivative(1));
  const std::vector<double> h2 = at.to_grid(f.derivative(2));
  std::vector<double> k(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double s = 1.0 + h[j];
    if (!(s > 0)) throw DegenerateInterface("1 + rho must stay positive along the interface");
    const double n2 = s * s + h1[j] * h1[j];
    k[j] = (s * s + 2.0 * h1[j] * h1[j] - s * h2[j]) / (n2 * std::sqrt(n2));
  }
  return k;
}

}  // namespace

CurvatureTrace curvature(const FourierSeries& rho, const AngularTransform& transform) {
  if (rho.max_mode() > transform.max_mode()) throw ContractError("series truncation exceeds the transform");
  return {transform.from_grid(curvature_grid(rho, transform))};
}

CurvatureTrace curvature(const FourierSeries& rho) {
  return curvature(rho, AngularTransform(std::max(rho.max_mode(), 1)));
}

PhiModel::PhiModel(std::shared_ptr<const AnnulusDiscretization> disc, const BioParams& bio)
    : disc_(std::move(disc)), bio_(bio) {
  if (!disc_) throw ContractError("PhiModel needs a discretisation");
  if (!(bio.psi0 > 0)) throw ConfigError("psi0 must be positive");
  if (!std::isfinite(bio.A) || !std::isfinite(bio.G)) throw ConfigError("A and G must be finite");

  // Radial base profiles in quad precision, rounded once.
  const RadialProfiles p = radial_profiles(disc_->geometry(), bio.A, bio.G, bio.psi0);
  for (double r : disc_->radial().nodes()) {
    const quad rq = r;
    const quad psi = p.nutrient(rq);
    const quad dpsi = p.nutrient_derivative(rq);
    nutrient_lift_.value.push_back(static_cast<double>(psi));
    nutrient_lift_.first.push_back(static_cast<double>(dpsi));
    nutrient_lift_.second.push_back(static_cast<double>(psi - dpsi / rq));
    pressure_lift_.value.push_back(static_cast<double>(p.pressure(rq)));
    pressure_lift_.first.push_back(static_cast<double>(p.a_log / rq));
    pressure_lift_.second.push_back(static_cast<double>(-p.a_log / (rq * rq)));
  }
}

PhiModel::PhiModel(const GeometryParams& geom, const DiscretizationParams& params, const BioParams& bio)
    : PhiModel(std::make_shared<const AnnulusDiscretization>(geom, params), bio) {}

BoundaryData PhiModel::pressure_data(const InterfacePair& rho) const {
  const AngularTransform& at = disc_->angular();
  const double R1 = geometry().R1;
  const double R2 = geometry().R2;
  const double AG = bio_.A * bio_.G;
  const std::vector<double> k1 = curvature_grid(rho.rho1, at);
  const std::vector<double> k2 = curvature_grid(rho.rho2, at);
  const std::vector<double> h1 = at.to_grid(rho.rho1.resized(at.max_mode()));
  const std::vector<double> h2 = at.to_grid(rho.rho2.resized(at.max_mode()));
  std::vector<double> outer(h1.size()), inner(h1.size());
  for (std::size_t j = 0; j < h1.size(); ++j) {
    outer[j] = k1[j] / R1 - AG * R1 * R1 / 4 * (1 + h1[j]) * (1 + h1[j]);
    inner[j] = -k2[j] / R2 - AG * R2 * R2 / 4 * (1 + h2[j]) * (1 + h2[j]) - bio_.psi0;
  }
  return {at.from_grid(outer), at.from_grid(inner)};
}

PhiEvaluation PhiModel::operator()(const InterfacePair& rho) const {
  const AnnulusDiscretization& disc = *disc_;
  const int M = disc.modes();
  const DiffeoCoefficients diffeo = build_diffeo(disc, rho);

  const BoundaryData nutrient_data{FourierSeries::constant(M, bio_.G), FourierSeries::constant(M, bio_.G - bio_.psi0)};
  const AnnulusField v = solve_transformed(disc, diffeo, EquationKind::kHelmholtz, nutrient_data, &nutrient_lift_);
  const AnnulusField q = solve_transformed(disc, diffeo, EquationKind::kLaplace, pressure_data(rho), &pressure_lift_);

  PhiEvaluation out;
  out.nutrient = v.diagnostics;
  out.pressure = q.diagnostics;
  const double AG = bio_.A * bio_.G;
  for (int i = 0; i < 2; ++i) {
    const Boundary b = i == 0 ? Boundary::kOuter : Boundary::kInner;
    const double Ri = i == 0 ? geometry().R1 : geometry().R2;
    FourierSeries phi = boundary_gradient(disc, v, diffeo, b) - boundary_gradient(disc, q, diffeo, b);
    phi *= 1.0 / Ri;
    phi -= (AG / 2) * (FourierSeries::constant(M, 1.0) + rho[i].resized(M));
    (i == 0 ? out.phi1 : out.phi2) = std::move(phi);
  }
  return out;
}

PhiEvaluation assemble_phi(const AnnulusDiscretization& disc, const BioParams& bio, const InterfacePair& rho) {
  return PhiModel(std::make_shared<const AnnulusDiscretization>(disc), bio)(rho);
}

PhiEvaluation assemble_phi(const GeometryParams& geom, const BioParams& bio, const InterfacePair& rho) {
  DiscretizationParams params;
  params.modes = std::max(rho.max_mode(), 1);
  return PhiModel(geom, params, bio)(rho);
}

}  // namespace necrosim
