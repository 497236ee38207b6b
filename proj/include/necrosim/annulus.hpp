#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "necrosim/fourier.hpp"
#include "necrosim/interfaces.hpp"
#include "necrosim/stationary.hpp"

namespace necrosim {

enum class RadialScheme { kChebyshev, kFiniteDifference };
enum class EquationKind { kLaplace, kHelmholtz };
enum class Boundary { kOuter, kInner };

/// Radial nodes in [R2, R1] (ascending: node 0 is R2, the last node is R1)
/// with first- and second-derivative matrices.
class RadialGrid {
 public:
  RadialGrid(double inner, double outer, int points, RadialScheme scheme);

  int size() const { return static_cast<int>(nodes_.size()); }
  RadialScheme scheme() const { return scheme_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const Eigen::MatrixXd& first_derivative() const { return d1_; }
  const Eigen::MatrixXd& second_derivative() const { return d2_; }
  int node_index(Boundary b) const { return b == Boundary::kOuter ? size() - 1 : 0; }

 private:
  RadialScheme scheme_;
  std::vector<double> nodes_;
  Eigen::MatrixXd d1_;
  Eigen::MatrixXd d2_;
};

struct DiscretizationParams {
  int modes = 64;          ///< angular truncation M
  int radial_points = 48;  ///< Nr, boundary nodes included
  RadialScheme scheme = RadialScheme::kChebyshev;
  int angular_points = 0;  ///< padded grid size; 0 selects the dealiased default
  double tolerance = 1e-13;
  int restart = 60;
  int max_iterations = 600;

  void validate() const;
  bool operator==(const DiscretizationParams&) const = default;
};

/// Geometry plus angular and radial discretisation; immutable and shareable.
class AnnulusDiscretization {
 public:
  explicit AnnulusDiscretization(const GeometryParams& geom, const DiscretizationParams& params = {});

  const GeometryParams& geometry() const { return geom_; }
  const DiscretizationParams& params() const { return params_; }
  const RadialGrid& radial() const { return radial_; }
  const AngularTransform& angular() const { return angular_; }
  int modes() const { return params_.modes; }
  int radial_points() const { return radial_.size(); }
  int angular_points() const { return angular_.grid_size(); }

 private:
  GeometryParams geom_;
  DiscretizationParams params_;
  RadialGrid radial_;
  AngularTransform angular_;
};

/// Dirichlet traces on the outer (r = R1) and inner (r = R2) circles.
struct BoundaryData {
  FourierSeries outer;
  FourierSeries inner;
};

/// Radial function with exact derivatives at the radial nodes.
struct RadialLift {
  std::vector<double> value;
  std::vector<double> first;
  std::vector<double> second;
};

struct SolveDiagnostics {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Field on the reference annulus: values(m, k) is the mode-m coefficient at radial node k.
struct AnnulusField {
  GeometryParams geometry;
  Eigen::MatrixXcd values;
  /// Radial part carried analytically (added into values); used for exact radial derivatives.
  std::optional<RadialLift> lift;
  SolveDiagnostics diagnostics;

  int max_mode() const { return static_cast<int>(values.rows()) - 1; }
  int radial_points() const { return static_cast<int>(values.cols()); }
  FourierSeries trace(int node) const;
};

/// Coefficients of the pulled-back Laplacian
///   c_rr v_rr + c_r v_r + c_tt v_tt + c_rt v_rt
/// on the padded angular grid (rows) times radial nodes (columns), plus the
/// boundary quantities needed by the normal-gradient traces.
struct DiffeoCoefficients {
  GeometryParams geometry;
  int max_mode = 0;
  Eigen::MatrixXd c_rr, c_r, c_tt, c_rt;
  /// Angular means of c_rr, c_r, c_tt per radial node (preconditioner).
  Eigen::VectorXd mean_rr, mean_r, mean_tt;
  /// On the angular grid; matrix columns are (outer, inner).
  Eigen::VectorXd beta;       ///< dR/dr of the radial map
  Eigen::MatrixXd gamma;      ///< dr/dtheta at fixed physical radius
  Eigen::MatrixXd radius;     ///< physical radius R_i (1 + rho_i)
  Eigen::MatrixXd rho_prime;  ///< rho_i'
};

/// Closed-form per-mode solution of w'' + w'/r - (m/r)^2 w = 0 with w(R1) = outer, w(R2) = inner.
class LaplaceModeSolution {
 public:
  LaplaceModeSolution(const GeometryParams& geom, int m, Complex outer, Complex inner);
  Complex value(double r) const;
  Complex derivative(double r) const;
  /// (alpha, beta) with w = alpha r^|m| + beta r^-|m| (m != 0) or alpha + beta ln r (m = 0).
  std::pair<Complex, Complex> coefficients() const;

 private:
  double R1_, R2_;
  int m_;
  Complex outer_, inner_;
};

/// Closed-form per-mode solution of v'' + v'/r - (1 + (m/r)^2) v = 0 with v(R1) = outer, v(R2) = inner.
class HelmholtzModeSolution {
 public:
  HelmholtzModeSolution(const GeometryParams& geom, int m, Complex outer, Complex inner);
  Complex value(double r) const;
  Complex derivative(double r) const;
  /// (alpha, beta) with v = alpha I_m + beta K_m. May throw RangeError for large m.
  std::pair<Complex, Complex> coefficients() const;

 private:
  // v = outer u1 + inner u2; both written through I(r)/I(R1) and K(r)/K(R2).
  Complex combine(double i_ratio, double k_ratio) const;
  double R1_, R2_;
  int m_;
  Complex outer_, inner_;
  double i21_;   // I(R2) / I(R1)
  double k12_;   // K(R1) / K(R2)
  double denom_; // 1 - i21 k12
};

LaplaceModeSolution laplace_mode_solution(const GeometryParams& geom, int m, Complex outer, Complex inner);
HelmholtzModeSolution helmholtz_mode_solution(const GeometryParams& geom, int m, Complex outer, Complex inner);

/// Pull-back coefficients of the Laplacian under the radial-interpolation map.
/// Throws InterfaceCollision when ||rho_i||_inf >= a.
DiffeoCoefficients build_diffeo(const AnnulusDiscretization& disc, const InterfacePair& rho);

/// Solves (pulled-back Delta - sigma) v = 0 with sigma = 1 (Helmholtz) or 0 (Laplace)
/// and Dirichlet data. If `lift` is given it must satisfy the same equation at
/// rho = 0 up to rounding; only the deviation from it is discretised.
AnnulusField solve_transformed(const AnnulusDiscretization& disc, const DiffeoCoefficients& diffeo,
                               EquationKind kind, const BoundaryData& data,
                               const RadialLift* lift = nullptr);
AnnulusField solve_transformed(const AnnulusDiscretization& disc, const InterfacePair& rho, EquationKind kind,
                               const BoundaryData& data);

/// Applies (pulled-back Delta - sigma) to a field; rows are modes, columns radial nodes.
/// Boundary columns of the result are zero.
Eigen::MatrixXcd apply_operator(const AnnulusDiscretization& disc, const DiffeoCoefficients& diffeo,
                                EquationKind kind, const AnnulusField& field);

/// <grad(v o Theta^-1) | grad N_i> o Theta on the circle R_i S^1, as Fourier coefficients.
FourierSeries boundary_gradient(const AnnulusDiscretization& disc, const AnnulusField& field,
                                const DiffeoCoefficients& diffeo, Boundary which);

/// Samples a radial function f and its derivatives at the radial nodes.
template <class F, class DF, class D2F>
RadialLift make_lift(const RadialGrid& grid, F f, DF df, D2F d2f) {
  RadialLift lift;
  for (double r : grid.nodes()) {
    lift.value.push_back(f(r));
    lift.first.push_back(df(r));
    lift.second.push_back(d2f(r));
  }
  return lift;
}

}  // namespace necrosim
