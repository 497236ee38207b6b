#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "necrosim/fourier.hpp"
#include "necrosim/phi.hpp"
#include "necrosim/stationary.hpp"

namespace necrosim {

/// Per-mode 2x2 matrix of the linearised interface evolution.
struct ModeSymbol {
  int mode = 0;
  /// Principal multiplier entries A_ij(m).
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Zero();
  std::array<Complex, 2> eigenvalues{};
  /// Numerically estimated lower-order part (full Jacobian minus principal), if computed.
  std::optional<Eigen::Matrix2d> lower_order;

  Eigen::Matrix2d full_matrix() const { return lower_order ? Eigen::Matrix2d(matrix + *lower_order) : matrix; }
  std::array<Complex, 2> full_eigenvalues() const;
  /// Eigenvalue with the largest real part (of the full matrix when available).
  Complex dominant_eigenvalue() const;
};

/// Eigenvalues of a real 2x2 matrix, ordered by decreasing real part.
std::array<Complex, 2> eigenvalues_2x2(const Eigen::Matrix2d& a);

/// Principal multiplier symbols; depends on |m| only, zero matrix for m = 0.
ModeSymbol principal_symbol(const GeometryParams& geom, int m);

struct SpectrumScan {
  std::vector<ModeSymbol> symbols;  ///< m = 0..m_max
  double max_real_part = 0.0;       ///< over 1 <= m <= m_max
};

SpectrumScan spectrum_scan(const GeometryParams& geom, int m_max);

/// Central-difference derivative of Phi at (0, 0) along (eps cos(m theta), 0) and
/// (0, eps cos(m theta)), projected on mode m. Column j is the direction rho_j.
Eigen::Matrix2d fd_jacobian_mode(const PhiModel& model, int m, double epsilon);
/// Same with a discretisation of M = max(16, 2m) modes and 48 Chebyshev nodes.
Eigen::Matrix2d fd_jacobian_mode(const GeometryParams& geom, const BioParams& bio, int m, double epsilon);

/// Principal symbol completed by the lower-order part measured with fd_jacobian_mode.
ModeSymbol linearized_symbol(const PhiModel& model, int m, double epsilon = 1e-5);

}  // namespace necrosim
