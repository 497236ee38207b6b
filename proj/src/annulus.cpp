#include "necrosim/annulus.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gmres.hpp"
#include "necrosim/errors.hpp"
#include "necrosim/specfun.hpp"

namespace necrosim {
namespace {

void build_chebyshev(double inner, double outer, int n, std::vector<double>& nodes, Eigen::MatrixXd& d1) {
  const double pi = std::numbers::pi;
  const double len = outer - inner;
  std::vector<double> theta(n);
  std::vector<double> w(n);
  nodes.resize(n);
  for (int k = 0; k < n; ++k) {
    theta[k] = pi * k / (n - 1);
    const double s = std::sin(theta[k] / 2);
    nodes[k] = inner + len * s * s;
    w[k] = (k % 2 == 0 ? 1.0 : -1.0) * ((k == 0 || k == n - 1) ? 0.5 : 1.0);
  }
  nodes.front() = inner;
  nodes.back() = outer;
  d1 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // r_i - r_j without cancellation.
      const double diff = len * std::sin((theta[i] + theta[j]) / 2) * std::sin((theta[i] - theta[j]) / 2);
      d1(i, j) = (w[j] / w[i]) / diff;
      diag -= d1(i, j);
    }
    d1(i, i) = diag;
  }
}

void build_finite_difference(double inner, double outer, int n, std::vector<double>& nodes, Eigen::MatrixXd& d1,
                             Eigen::MatrixXd& d2) {
  const double h = (outer - inner) / (n - 1);
  nodes.resize(n);
  for (int k = 0; k < n; ++k) nodes[k] = inner + h * k;
  nodes.back() = outer;
  d1 = Eigen::MatrixXd::Zero(n, n);
  d2 = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n - 1; ++k) {
    d1(k, k - 1) = -0.5 / h;
    d1(k, k + 1) = 0.5 / h;
    d2(k, k - 1) = 1.0 / (h * h);
    d2(k, k) = -2.0 / (h * h);
    d2(k, k + 1) = 1.0 / (h * h);
  }
  // One-sided second-order boundary rows.
  const int e = n - 1;
  d1(0, 0) = -1.5 / h;
  d1(0, 1) = 2.0 / h;
  d1(0, 2) = -0.5 / h;
  d1(e, e) = 1.5 / h;
  d1(e, e - 1) = -2.0 / h;
  d1(e, e - 2) = 0.5 / h;
  const double h2 = h * h;
  d2(0, 0) = 2.0 / h2;
  d2(0, 1) = -5.0 / h2;
  d2(0, 2) = 4.0 / h2;
  d2(0, 3) = -1.0 / h2;
  d2(e, e) = 2.0 / h2;
  d2(e, e - 1) = -5.0 / h2;
  d2(e, e - 2) = 4.0 / h2;
  d2(e, e - 3) = -1.0 / h2;
}

double sigma_of(EquationKind kind) { return kind == EquationKind::kHelmholtz ? 1.0 : 0.0; }

void check_compatible(const AnnulusDiscretization& disc, const DiffeoCoefficients& diffeo) {
  const GeometryParams& g = disc.geometry();
  if (diffeo.geometry.R1 != g.R1 || diffeo.geometry.R2 != g.R2 || diffeo.max_mode != disc.modes() ||
      diffeo.c_rr.rows() != disc.angular_points() || diffeo.c_rr.cols() != disc.radial_points()) {
    throw ContractError("diffeomorphism coefficients were built for a different discretisation");
  }
}

void check_compatible(const AnnulusDiscretization& disc, const AnnulusField& field) {
  const GeometryParams& g = disc.geometry();
  if (field.geometry.R1 != g.R1 || field.geometry.R2 != g.R2 || field.max_mode() != disc.modes() ||
      field.radial_points() != disc.radial_points()) {
    throw ContractError("field was computed on a different discretisation");
  }
}

// Interior rows of (pulled-back Delta) applied to W, where W holds every radial column.
// Returns (M+1) x (Nr-2).
Eigen::MatrixXcd apply_laplacian_interior(const AnnulusDiscretization& disc, const DiffeoCoefficients& diffeo,
                                          const Eigen::MatrixXcd& W) {
  const int nr = disc.radial_points();
  const int ni = nr - 2;
  const int M = disc.modes();
  const Eigen::MatrixXd d1 = disc.radial().first_derivative().middleRows(1, ni);
  const Eigen::MatrixXd d2 = disc.radial().second_derivative().middleRows(1, ni);

  const Eigen::MatrixXcd wr = W * d1.transpose();
  const Eigen::MatrixXcd wrr = W * d2.transpose();
  Eigen::MatrixXcd wtt = W.middleCols(1, ni);
  Eigen::MatrixXcd wrt = wr;
  for (int m = 0; m <= M; ++m) {
    wtt.row(m) *= -double(m) * m;
    wrt.row(m) *= Complex(0.0, m);
  }
  const AngularTransform& at = disc.angular();
  const Eigen::MatrixXd grid = diffeo.c_rr.middleCols(1, ni).cwiseProduct(at.to_grid(wrr)) +
                               diffeo.c_r.middleCols(1, ni).cwiseProduct(at.to_grid(wr)) +
                               diffeo.c_tt.middleCols(1, ni).cwiseProduct(at.to_grid(wtt)) +
                               diffeo.c_rt.middleCols(1, ni).cwiseProduct(at.to_grid(wrt));
  return at.from_grid(grid);
}

// Interior rows of (pulled-back Delta - sigma) applied to a radial lift (mode 0 only).
Eigen::MatrixXcd apply_to_lift_interior(const AnnulusDiscretization& disc, const DiffeoCoefficients& diffeo,
                                        double sigma, const RadialLift& lift) {
  const int ni = disc.radial_points() - 2;
  const int n = disc.angular_points();
  Eigen::MatrixXd grid(n, ni);
  for (int k = 0; k < ni; ++k) {
    grid.col(k) = diffeo.c_rr.col(k + 1) * lift.second[k + 1] + diffeo.c_r.col(k + 1) * lift.first[k + 1];
  }
  Eigen::MatrixXcd out = disc.angular().from_grid(grid);
  for (int k = 0; k < ni; ++k) out(0, k) -= sigma * lift.value[k + 1];
  return out;
}

// Real packing of interior unknowns: per radial column, Re c_0, then (Re, Im) of c_1..c_M.
Eigen::VectorXd pack(const Eigen::MatrixXcd& U) {
  const Eigen::Index M = U.rows() - 1;
  Eigen::VectorXd x((2 * M + 1) * U.cols());
  Eigen::Index p = 0;
  for (Eigen::Index k = 0; k < U.cols(); ++k) {
    x(p++) = U(0, k).real();
    for (Eigen::Index m = 1; m <= M; ++m) {
      x(p++) = U(m, k).real();
      x(p++) = U(m, k).imag();
    }
  }
  return x;
}

Eigen::MatrixXcd unpack(const Eigen::VectorXd& x, int M, int cols) {
  Eigen::MatrixXcd U(M + 1, cols);
  Eigen::Index p = 0;
  for (int k = 0; k < cols; ++k) {
    U(0, k) = Complex(x(p++), 0.0);
    for (int m = 1; m <= M; ++m) {
      const double re = x(p++);
      U(m, k) = Complex(re, x(p++));
    }
  }
  return U;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grids

RadialGrid::RadialGrid(double inner, double outer, int points, RadialScheme scheme) : scheme_(scheme) {
  if (!(inner < outer)) throw ContractError("radial grid requires inner < outer");
  if (points < 4) throw ContractError("radial grid needs at least 4 points");
  if (scheme == RadialScheme::kChebyshev) {
    build_chebyshev(inner, outer, points, nodes_, d1_);
    d2_ = d1_ * d1_;
  } else {
    build_finite_difference(inner, outer, points, nodes_, d1_, d2_);
  }
}

void DiscretizationParams::validate() const {
  if (modes < 1) throw ConfigError("angular truncation M must be at least 1");
  if (radial_points < 4) throw ConfigError("radial_points must be at least 4");
  if (angular_points != 0 && angular_points < 2 * modes + 2) throw ConfigError("angular_points must be >= 2M + 2");
  if (!(tolerance > 0)) throw ConfigError("solver tolerance must be positive");
  if (restart < 1 || max_iterations < 1) throw ConfigError("restart and max_iterations must be positive");
}

AnnulusDiscretization::AnnulusDiscretization(const GeometryParams& geom, const DiscretizationParams& params)
    : geom_((geom.validate(), geom)),
      params_((params.validate(), params)),
      radial_(geom.R2, geom.R1, params.radial_points, params.scheme),
      angular_(params.modes, params.angular_points) {}

FourierSeries AnnulusField::trace(int node) const {
  if (node < 0 || node >= radial_points()) throw ContractError("radial node out of range");
  std::vector<Complex> c(values.rows());
  for (Eigen::Index m = 0; m < values.rows(); ++m) c[m] = values(m, node);
  return FourierSeries(std::move(c));
}

// ---------------------------------------------------------------------------
// Closed-form mode solutions

LaplaceModeSolution::LaplaceModeSolution(const GeometryParams& geom, int m, Complex outer, Complex inner)
    : R1_(geom.R1), R2_(geom.R2), m_(std::abs(m)), outer_(outer), inner_(inner) {
  geom.validate();
}

Complex LaplaceModeSolution::value(double r) const {
  if (m_ == 0) {
    const double L = std::log(R1_ / R2_);
    return outer_ * (std::log(r / R2_) / L) + inner_ * (std::log(R1_ / r) / L);
  }
  const double k = m_;
  const double den = 1.0 - std::pow(R2_ / R1_, 2 * k);
  const double f_out = std::pow(r / R1_, k) * (1.0 - std::pow(R2_ / r, 2 * k)) / den;
  const double f_in = std::pow(R2_ / r, k) * (1.0 - std::pow(r / R1_, 2 * k)) / den;
  return outer_ * f_out + inner_ * f_in;
}

Complex LaplaceModeSolution::derivative(double r) const {
  if (m_ == 0) {
    const double L = std::log(R1_ / R2_);
    return (outer_ - inner_) / (r * L);
  }
  const double k = m_;
  const double den = 1.0 - std::pow(R2_ / R1_, 2 * k);
  const double f_out = (k / r) * std::pow(r / R1_, k) * (1.0 + std::pow(R2_ / r, 2 * k)) / den;
  const double f_in = -(k / r) * std::pow(R2_ / r, k) * (1.0 + std::pow(r / R1_, 2 * k)) / den;
  return outer_ * f_out + inner_ * f_in;
}

std::pair<Complex, Complex> LaplaceModeSolution::coefficients() const {
  if (m_ == 0) {
    const double L = std::log(R1_ / R2_);
    return {(inner_ * std::log(R1_) - outer_ * std::log(R2_)) / L, (outer_ - inner_) / L};
  }
  const double k = m_;
  const double den = 1.0 - std::pow(R2_ / R1_, 2 * k);
  const double r1k = std::pow(R1_, k);
  const double r2k = std::pow(R2_, k);
  const Complex alpha = outer_ / (r1k * den) - inner_ * r2k / (r1k * r1k * den);
  const Complex beta = -outer_ * r2k * r2k / (r1k * den) + inner_ * r2k / den;
  return {alpha, beta};
}

HelmholtzModeSolution::HelmholtzModeSolution(const GeometryParams& geom, int m, Complex outer, Complex inner)
    : R1_(geom.R1), R2_(geom.R2), m_(std::abs(m)), outer_(outer), inner_(inner) {
  geom.validate();
  i21_ = specfun::ratio(specfun::scaled_i(m_, R2_), specfun::scaled_i(m_, R1_));
  k12_ = specfun::ratio(specfun::scaled_k(m_, R1_), specfun::scaled_k(m_, R2_));
  denom_ = 1.0 - i21_ * k12_;
}

Complex HelmholtzModeSolution::combine(double i_ratio, double k_ratio) const {
  const double u1 = (i_ratio - k_ratio * i21_) / denom_;
  const double u2 = (k_ratio - i_ratio * k12_) / denom_;
  return outer_ * u1 + inner_ * u2;
}

Complex HelmholtzModeSolution::value(double r) const {
  const double ir = specfun::ratio(specfun::scaled_i(m_, r), specfun::scaled_i(m_, R1_));
  const double kr = specfun::ratio(specfun::scaled_k(m_, r), specfun::scaled_k(m_, R2_));
  return combine(ir, kr);
}

Complex HelmholtzModeSolution::derivative(double r) const {
  const double ir = specfun::ratio(specfun::scaled_i_prime(m_, r), specfun::scaled_i(m_, R1_));
  const double kr = -specfun::ratio(specfun::scaled_k_prime(m_, r), specfun::scaled_k(m_, R2_));
  return combine(ir, kr);
}

std::pair<Complex, Complex> HelmholtzModeSolution::coefficients() const {
  const double i_r1 = specfun::bessel_i(m_, R1_);
  const double k_r2 = specfun::bessel_k(m_, R2_);
  return {(outer_ - inner_ * k12_) / (i_r1 * denom_), (inner_ - outer_ * i21_) / (k_r2 * denom_)};
}

LaplaceModeSolution laplace_mode_solution(const GeometryParams& geom, int m, Complex outer, Complex inner) {
  return {geom, m, outer, inner};
}

HelmholtzModeSolution helmholtz_mode_solution(const GeometryParams& geom, int m, Complex outer, Complex inner) {
  return {geom, m, outer, inner};
}

// ---------------------------------------------------------------------------
// Pull-back coefficients

DiffeoCoefficients build_diffeo(const AnnulusDiscretization& disc, const InterfacePair& rho) {
  const GeometryParams& g = disc.geometry();
  const int M = disc.modes();
  if (rho.max_mode() > M) throw ContractError("interface truncation exceeds the discretisation");
  rho.check_admissible(g);

  const AngularTransform& at = disc.angular();
  const int n = at.grid_size();
  const int nr = disc.radial_points();
  const double R1 = g.R1;
  const double R2 = g.R2;
  const double span = R1 - R2;

  std::array<std::vector<double>, 2> h, h1, h2;
  for (int i = 0; i < 2; ++i) {
    const FourierSeries f = rho[i].resized(M);
    h[i] = at.to_grid(f);
    h1[i] = at.to_grid(f.derivative(1));
    h2[i] = at.to_grid(f.derivative(2));
  }

  DiffeoCoefficients d;
  d.geometry = g;
  d.max_mode = M;
  d.c_rr.resize(n, nr);
  d.c_r.resize(n, nr);
  d.c_tt.resize(n, nr);
  d.c_rt.resize(n, nr);
  d.beta.resize(n);
  d.gamma.resize(n, 2);
  d.radius.resize(n, 2);
  d.rho_prime.resize(n, 2);

  const std::vector<double>& r = disc.radial().nodes();
  for (int j = 0; j < n; ++j) {
    // R(r, theta) = alpha + beta r maps [R2, R1] onto [R2 (1 + rho2), R1 (1 + rho1)].
    const double alpha = R1 * R2 * (h[1][j] - h[0][j]) / span;
    const double alpha1 = R1 * R2 * (h1[1][j] - h1[0][j]) / span;
    const double alpha2 = R1 * R2 * (h2[1][j] - h2[0][j]) / span;
    const double beta = (R1 * (1 + h[0][j]) - R2 * (1 + h[1][j])) / span;
    const double beta1 = (R1 * h1[0][j] - R2 * h1[1][j]) / span;
    const double beta2 = (R1 * h2[0][j] - R2 * h2[1][j]) / span;
    if (!(beta > 0)) throw InterfaceCollision("radial map is not monotone", 0, 0.0, 0.0);

    auto gamma_at = [&](double rr) { return -(alpha1 + rr * beta1) / beta; };
    for (int k = 0; k < nr; ++k) {
      const double R = alpha + beta * r[k];
      const double gam = gamma_at(r[k]);
      const double gam_r = -beta1 / beta;
      const double gam_t = -(alpha2 + r[k] * beta2) / beta + (alpha1 + r[k] * beta1) * beta1 / (beta * beta);
      const double inv_r2 = 1.0 / (R * R);
      d.c_rr(j, k) = 1.0 / (beta * beta) + gam * gam * inv_r2;
      d.c_r(j, k) = 1.0 / (beta * R) + (gam_t + gam * gam_r) * inv_r2;
      d.c_tt(j, k) = inv_r2;
      d.c_rt(j, k) = 2.0 * gam * inv_r2;
    }
    d.beta(j) = beta;
    d.gamma(j, 0) = gamma_at(R1);
    d.gamma(j, 1) = gamma_at(R2);
    d.radius(j, 0) = R1 * (1 + h[0][j]);
    d.radius(j, 1) = R2 * (1 + h[1][j]);
    d.rho_prime(j, 0) = h1[0][j];
    d.rho_prime(j, 1) = h1[1][j];
  }
  d.mean_rr = d.c_rr.colwise().mean().transpose();
  d.mean_r = d.c_r.colwise().mean().transpose();
  d.mean_tt = d.c_tt.colwise().mean().transpose();
  return d;
}

// ---------------------------------------------------------------------------
// Solver

AnnulusField solve_transformed(const AnnulusDiscretization& disc, const DiffeoCoefficients& diffeo,
                               EquationKind kind, const BoundaryData& data, const RadialLift* lift) {
  check_compatible(disc, diffeo);
  const int M = disc.modes();
  const int nr = disc.radial_points();
  const int ni = nr - 2;
  const double sigma = sigma_of(kind);
  if (data.outer.max_mode() > M || data.inner.max_mode() > M) {
    throw ContractError("boundary data truncation exceeds the discretisation");
  }
  if (lift && (static_cast<int>(lift->value.size()) != nr || static_cast<int>(lift->first.size()) != nr ||
               static_cast<int>(lift->second.size()) != nr)) {
    throw ContractError("lift does not match the radial grid");
  }

  // Boundary columns of the deviation from the lift.
  Eigen::MatrixXcd boundary = Eigen::MatrixXcd::Zero(M + 1, nr);
  const FourierSeries outer = data.outer.resized(M);
  const FourierSeries inner = data.inner.resized(M);
  for (int m = 0; m <= M; ++m) {
    boundary(m, nr - 1) = outer[m];
    boundary(m, 0) = inner[m];
  }
  if (lift) {
    boundary(0, nr - 1) -= lift->value[nr - 1];
    boundary(0, 0) -= lift->value[0];
  }

  Eigen::MatrixXcd rhs = -apply_laplacian_interior(disc, diffeo, boundary);
  if (lift) rhs -= apply_to_lift_interior(disc, diffeo, sigma, *lift);

  auto apply = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(M + 1, nr);
    W.middleCols(1, ni) = unpack(x, M, ni);
    Eigen::MatrixXcd out = apply_laplacian_interior(disc, diffeo, W);
    out -= sigma * W.middleCols(1, ni);
    return pack(out);
  };

  // Exact inverse of the theta-averaged operator, mode by mode.
  const Eigen::MatrixXd d1 = disc.radial().first_derivative().block(1, 1, ni, ni);
  const Eigen::MatrixXd d2 = disc.radial().second_derivative().block(1, 1, ni, ni);
  const Eigen::MatrixXd base = diffeo.mean_rr.segment(1, ni).asDiagonal() * d2 +
                               diffeo.mean_r.segment(1, ni).asDiagonal() * d1;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
  lu.reserve(M + 1);
  for (int m = 0; m <= M; ++m) {
    Eigen::MatrixXd P = base;
    P.diagonal() -= double(m) * m * diffeo.mean_tt.segment(1, ni) + Eigen::VectorXd::Constant(ni, sigma);
    lu.emplace_back(P);
  }
  auto precondition = [&](const Eigen::VectorXd& y) {
    Eigen::MatrixXcd U = unpack(y, M, ni);
    for (int m = 0; m <= M; ++m) {
      const Eigen::VectorXd re = lu[m].solve(U.row(m).real().transpose());
      const Eigen::VectorXd im = lu[m].solve(U.row(m).imag().transpose());
      for (int k = 0; k < ni; ++k) U(m, k) = Complex(re(k), im(k));
    }
    return pack(U);
  };

  const DiscretizationParams& p = disc.params();
  Eigen::VectorXd x;
  const detail::GmresResult res =
      detail::gmres(apply, precondition, pack(rhs), x, p.tolerance, p.restart, p.max_iterations);
  if (!res.converged) {
    std::ostringstream os;
    os << "GMRES did not converge: relative residual " << res.relative_residual << " after " << res.iterations
       << " iterations";
    throw SolverFailure(os.str(), res.relative_residual, res.iterations);
  }

  AnnulusField field;
  field.geometry = disc.geometry();
  field.values = boundary;
  field.values.middleCols(1, ni) = unpack(x, M, ni);
  if (lift) {
    for (int k = 0; k < nr; ++k) field.values(0, k) += lift->value[k];
    field.lift = *lift;
  }
  // Boundary traces are imposed exactly, not via the subtraction above.
  for (int m = 0; m <= M; ++m) {
    field.values(m, nr - 1) = outer[m];
    field.values(m, 0) = inner[m];
  }
  field.diagnostics = {res.iterations, res.relative_residual};
  return field;
}

AnnulusField solve_transformed(const AnnulusDiscretization& disc, const InterfacePair& rho, EquationKind kind,
                               const BoundaryData& data) {
  return solve_transformed(disc, build_diffeo(disc, rho), kind, data, nullptr);
}

Eigen::MatrixXcd apply_operator(const AnnulusDiscretization& disc, const DiffeoCoefficients& diffeo,
                                EquationKind kind, const AnnulusField& field) {
  check_compatible(disc, diffeo);
  check_compatible(disc, field);
  const int nr = disc.radial_points();
  const int ni = nr - 2;
  const double sigma = sigma_of(kind);
  Eigen::MatrixXcd W = field.values;
  if (field.lift) {
    for (int k = 0; k < nr; ++k) W(0, k) -= field.lift->value[k];
  }
  Eigen::MatrixXcd interior = apply_laplacian_interior(disc, diffeo, W) - sigma * W.middleCols(1, ni);
  if (field.lift) interior += apply_to_lift_interior(disc, diffeo, sigma, *field.lift);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(W.rows(), nr);
  out.middleCols(1, ni) = interior;
  return out;
}

FourierSeries boundary_gradient(const AnnulusDiscretization& disc, const AnnulusField& field,
                                const DiffeoCoefficients& diffeo, Boundary which) {
  check_compatible(disc, diffeo);
  check_compatible(disc, field);
  const int M = disc.modes();
  const int k = disc.radial().node_index(which);
  const int side = which == Boundary::kOuter ? 0 : 1;
  const double Ri = which == Boundary::kOuter ? disc.geometry().R1 : disc.geometry().R2;

  Eigen::MatrixXcd W = field.values;
  if (field.lift) {
    for (Eigen::Index c = 0; c < W.cols(); ++c) W(0, c) -= field.lift->value[c];
  }
  Eigen::VectorXcd vr = W * disc.radial().first_derivative().row(k).transpose();
  if (field.lift) vr(0) += field.lift->first[k];
  Eigen::VectorXcd vt(M + 1);
  for (int m = 0; m <= M; ++m) vt(m) = Complex(0.0, m) * field.values(m, k);

  const AngularTransform& at = disc.angular();
  const int n = at.grid_size();
  std::vector<double> gr(n), gt(n), out(n);
  at.to_grid(vr.data(), gr.data());
  at.to_grid(vt.data(), gt.data());
  for (int j = 0; j < n; ++j) {
    const double R = diffeo.radius(j, side);
    const double tangential = Ri * diffeo.rho_prime(j, side) / (R * R);
    out[j] = gr[j] / diffeo.beta(j) - tangential * (gt[j] + diffeo.gamma(j, side) * gr[j]);
  }
  return at.from_grid(out);
}

}  // namespace necrosim
