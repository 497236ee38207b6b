#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace necrosim {

using Complex = std::complex<double>;

/// Real function on the unit circle, f(theta) = sum_{m=-M}^{M} c_m e^{i m theta}.
///
/// Only c_0..c_M are stored; c_{-m} = conj(c_m). The imaginary part of c_0 is
/// kept at zero.
class FourierSeries {
 public:
  FourierSeries() = default;
  explicit FourierSeries(int max_mode);
  explicit FourierSeries(std::vector<Complex> coefficients);

  static FourierSeries constant(int max_mode, double value);
  /// amplitude * cos(m theta + phase).
  static FourierSeries cosine(int max_mode, int m, double amplitude, double phase = 0.0);

  int max_mode() const { return static_cast<int>(c_.size()) - 1; }

  /// c_m for any integer m (zero outside [-M, M]).
  Complex operator[](int m) const;
  /// Mutable access for 0 <= m <= M.
  Complex& coefficient(int m);
  const std::vector<Complex>& coefficients() const { return c_; }

  double evaluate(double theta) const;
  /// max |f| over `samples` equispaced points (default 4 max(M, 1)).
  double sup_norm(int samples = 0) const;
  /// sqrt(sum_{m=-M}^{M} |c_m|^2).
  double l2_norm() const;
  /// max_m |c_m - other.c_m| over the union of both index ranges.
  double max_coefficient_difference(const FourierSeries& other) const;

  FourierSeries derivative(int order = 1) const;
  /// g(theta) = f(theta - phi).
  FourierSeries rotated(double phi) const;
  /// g(theta) = f(-theta).
  FourierSeries reflected() const;
  /// Truncated or zero-padded copy.
  FourierSeries resized(int max_mode) const;

  FourierSeries& operator+=(const FourierSeries& other);
  FourierSeries& operator-=(const FourierSeries& other);
  FourierSeries& operator*=(double s);
  friend FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
  friend FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
  friend FourierSeries operator*(FourierSeries a, double s) { return a *= s; }
  friend FourierSeries operator*(double s, FourierSeries a) { return a *= s; }

  bool operator==(const FourierSeries& other) const = default;

 private:
  std::vector<Complex> c_{Complex(0.0)};
};

/// Pseudospectral transforms between modes 0..M and an equispaced grid.
///
/// The grid has N >= 3M + 1 points by default so that quadratic products are
/// alias-free after truncation back to M. Copies share the FFTW plans, which
/// are immutable; transforms may run concurrently.
class AngularTransform {
 public:
  explicit AngularTransform(int max_mode, int grid_size = 0);

  /// Smallest 2-3-5 smooth integer >= 3M + 1 (and >= 8).
  static int dealiased_size(int max_mode);

  int max_mode() const { return max_mode_; }
  int grid_size() const { return grid_size_; }
  std::vector<double> nodes() const;

  /// spectrum[0..M] -> grid[0..N-1].
  void to_grid(const Complex* spectrum, double* grid) const;
  /// grid[0..N-1] -> spectrum[0..M] (modes above M are discarded).
  void from_grid(const double* grid, Complex* spectrum) const;

  /// Column-wise: (M+1) x k spectra -> N x k grid values.
  Eigen::MatrixXd to_grid(const Eigen::MatrixXcd& spectra) const;
  Eigen::MatrixXcd from_grid(const Eigen::MatrixXd& grid) const;

  std::vector<double> to_grid(const FourierSeries& f) const;
  FourierSeries from_grid(const std::vector<double>& grid) const;

 private:
  struct Plans;
  int max_mode_;
  int grid_size_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace necrosim
