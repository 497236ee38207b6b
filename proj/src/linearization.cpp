#include "necrosim/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "necrosim/errors.hpp"

namespace necrosim {

std::array<Complex, 2> eigenvalues_2x2(const Eigen::Matrix2d& a) {
  const double half_trace = 0.5 * (a(0, 0) + a(1, 1));
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double disc = half_trace * half_trace - det;
  if (disc >= 0) {
    const double root = std::sqrt(disc);
    const double big = half_trace + (half_trace >= 0 ? root : -root);
    const double small = big != 0.0 ? det / big : 0.0;
    return {Complex(std::max(big, small)), Complex(std::min(big, small))};
  }
  const double root = std::sqrt(-disc);
  return {Complex(half_trace, root), Complex(half_trace, -root)};
}

std::array<Complex, 2> ModeSymbol::full_eigenvalues() const { return eigenvalues_2x2(full_matrix()); }

Complex ModeSymbol::dominant_eigenvalue() const { return full_eigenvalues()[0]; }

ModeSymbol principal_symbol(const GeometryParams& geom, int m) {
  geom.validate();
  ModeSymbol s;
  s.mode = m;
  const int k = std::abs(m);
  if (k == 0) {
    s.eigenvalues = {Complex(0.0), Complex(0.0)};
    return s;
  }
  const double R1 = geom.R1;
  const double R2 = geom.R2;
  // S/D and 2/D in terms of q^k = (R2/R1)^k, which stays bounded for large k.
  const double qk = std::pow(R2 / R1, k);
  const double one_minus = 1.0 - qk * qk;
  const double s_over_d = (1.0 + qk * qk) / one_minus;
  const double two_over_d = 2.0 * qk / one_minus;
  const double m3 = double(k) * k * k;
  s.matrix(0, 0) = -s_over_d * m3 / (R1 * R1 * R1);
  s.matrix(0, 1) = -two_over_d * m3 / (R1 * R1 * R2);
  s.matrix(1, 0) = -two_over_d * m3 / (R1 * R2 * R2);
  s.matrix(1, 1) = -s_over_d * m3 / (R2 * R2 * R2);
  s.eigenvalues = eigenvalues_2x2(s.matrix);
  return s;
}

SpectrumScan spectrum_scan(const GeometryParams& geom, int m_max) {
  if (m_max < 1) throw DomainError("spectrum_scan requires m_max >= 1");
  SpectrumScan scan;
  scan.max_real_part = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= m_max; ++m) {
    scan.symbols.push_back(principal_symbol(geom, m));
    if (m >= 1) {
      for (const Complex& e : scan.symbols.back().eigenvalues) scan.max_real_part = std::max(scan.max_real_part, e.real());
    }
  }
  return scan;
}

Eigen::Matrix2d fd_jacobian_mode(const PhiModel& model, int m, double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) throw DomainError("epsilon must lie in [1e-7, 1e-3]");
  const int k = std::abs(m);
  const int M = model.modes();
  if (k > M) throw ContractError("mode exceeds the discretisation truncation");

  auto direction = [&](int j, double sign) {
    InterfacePair rho = InterfacePair::zero(M);
    rho[j] = FourierSeries::cosine(M, k, sign * epsilon);
    return rho;
  };
  // Four independent solves.
  std::array<std::future<PhiEvaluation>, 4> runs;
  for (int j = 0; j < 2; ++j) {
    for (int s = 0; s < 2; ++s) {
      const InterfacePair rho = direction(j, s == 0 ? 1.0 : -1.0);
      runs[2 * j + s] = std::async(std::launch::async, [&model, rho] { return model(rho); });
    }
  }
  std::array<PhiEvaluation, 4> phi;
  for (int r = 0; r < 4; ++r) phi[r] = runs[r].get();

  // A cos(k theta) perturbation of amplitude eps has c_k = eps/2 (k > 0) or c_0 = eps.
  const double scale = k == 0 ? 2.0 * epsilon : epsilon;
  Eigen::Matrix2d J;
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) J(i, j) = (phi[2 * j][i][k] - phi[2 * j + 1][i][k]).real() / scale;
  }
  return J;
}

Eigen::Matrix2d fd_jacobian_mode(const GeometryParams& geom, const BioParams& bio, int m, double epsilon) {
  DiscretizationParams params;
  params.modes = std::max(16, 2 * std::abs(m));
  return fd_jacobian_mode(PhiModel(geom, params, bio), m, epsilon);
}

ModeSymbol linearized_symbol(const PhiModel& model, int m, double epsilon) {
  ModeSymbol s = principal_symbol(model.geometry(), m);
  s.lower_order = Eigen::Matrix2d(fd_jacobian_mode(model, m, epsilon) - s.matrix);
  return s;
}

}  // namespace necrosim
