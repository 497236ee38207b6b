#include "necrosim/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "necrosim/errors.hpp"

namespace necrosim {

// ---------------------------------------------------------------------------
// FourierSeries

FourierSeries::FourierSeries(int max_mode) {
  if (max_mode < 0) throw ContractError("Fourier truncation must be nonnegative");
  c_.assign(static_cast<std::size_t>(max_mode) + 1, Complex(0.0));
}

FourierSeries::FourierSeries(std::vector<Complex> coefficients) : c_(std::move(coefficients)) {
  if (c_.empty()) c_.push_back(Complex(0.0));
  c_[0] = Complex(c_[0].real(), 0.0);
}

FourierSeries FourierSeries::constant(int max_mode, double value) {
  FourierSeries f(max_mode);
  f.c_[0] = value;
  return f;
}

FourierSeries FourierSeries::cosine(int max_mode, int m, double amplitude, double phase) {
  FourierSeries f(max_mode);
  const int k = std::abs(m);
  if (k > max_mode) throw ContractError("mode exceeds the Fourier truncation");
  if (k == 0) {
    f.c_[0] = amplitude * std::cos(phase);
  } else {
    // cos(m theta + phase) is symmetric in m -> -m together with phase -> -phase.
    const double p = m < 0 ? -phase : phase;
    f.c_[k] = 0.5 * amplitude * std::polar(1.0, p);
  }
  return f;
}

Complex FourierSeries::operator[](int m) const {
  const int k = std::abs(m);
  if (k > max_mode()) return Complex(0.0);
  return m >= 0 ? c_[k] : std::conj(c_[k]);
}

Complex& FourierSeries::coefficient(int m) {
  if (m < 0 || m > max_mode()) throw ContractError("coefficient index out of range");
  return c_[m];
}

double FourierSeries::evaluate(double theta) const {
  double s = c_[0].real();
  const Complex step = std::polar(1.0, theta);
  Complex e = step;
  for (int m = 1; m <= max_mode(); ++m) {
    s += 2.0 * (c_[m] * e).real();
    e *= step;
  }
  return s;
}

double FourierSeries::sup_norm(int samples) const {
  if (samples <= 0) samples = 4 * std::max(max_mode(), 1);
  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    best = std::max(best, std::abs(evaluate(2.0 * std::numbers::pi * j / samples)));
  }
  return best;
}

double FourierSeries::l2_norm() const {
  double s = std::norm(c_[0]);
  for (int m = 1; m <= max_mode(); ++m) s += 2.0 * std::norm(c_[m]);
  return std::sqrt(s);
}

double FourierSeries::max_coefficient_difference(const FourierSeries& other) const {
  const int top = std::max(max_mode(), other.max_mode());
  double d = 0.0;
  for (int m = 0; m <= top; ++m) d = std::max(d, std::abs((*this)[m] - other[m]));
  return d;
}

FourierSeries FourierSeries::derivative(int order) const {
  FourierSeries f(*this);
  if (order == 0) return f;
  for (int m = 0; m <= max_mode(); ++m) f.c_[m] *= std::pow(Complex(0.0, m), order);
  f.c_[0] = Complex(0.0);
  return f;
}

FourierSeries FourierSeries::rotated(double phi) const {
  FourierSeries f(*this);
  for (int m = 1; m <= max_mode(); ++m) f.c_[m] *= std::polar(1.0, -m * phi);
  return f;
}

FourierSeries FourierSeries::reflected() const {
  FourierSeries f(*this);
  for (auto& c : f.c_) c = std::conj(c);
  return f;
}

FourierSeries FourierSeries::resized(int max_mode) const {
  FourierSeries f(max_mode);
  for (int m = 0; m <= std::min(max_mode, this->max_mode()); ++m) f.c_[m] = c_[m];
  return f;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& other) {
  if (other.max_mode() > max_mode()) c_.resize(other.c_.size(), Complex(0.0));
  for (int m = 0; m <= other.max_mode(); ++m) c_[m] += other.c_[m];
  return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& other) {
  if (other.max_mode() > max_mode()) c_.resize(other.c_.size(), Complex(0.0));
  for (int m = 0; m <= other.max_mode(); ++m) c_[m] -= other.c_[m];
  return *this;
}

FourierSeries& FourierSeries::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// AngularTransform

namespace {

// FFTW planning is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_smooth_235(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

}  // namespace

struct AngularTransform::Plans {
  fftw_plan forward = nullptr;   // r2c
  fftw_plan backward = nullptr;  // c2r
  int n = 0;

  explicit Plans(int size) : n(size) {
    std::vector<double> real(static_cast<std::size_t>(n));
    std::vector<fftw_complex> spec(static_cast<std::size_t>(n / 2 + 1));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(n, real.data(), spec.data(), flags);
    backward = fftw_plan_dft_c2r_1d(n, spec.data(), real.data(), flags | FFTW_DESTROY_INPUT);
  }

  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

AngularTransform::AngularTransform(int max_mode, int grid_size) : max_mode_(max_mode) {
  if (max_mode < 0) throw ContractError("Fourier truncation must be nonnegative");
  grid_size_ = grid_size > 0 ? grid_size : dealiased_size(max_mode);
  if (grid_size_ < 2 * max_mode + 2) throw ContractError("angular grid too small for the truncation");
  plans_ = std::make_shared<const Plans>(grid_size_);
}

int AngularTransform::dealiased_size(int max_mode) {
  int n = std::max(8, 3 * max_mode + 1);
  while (!is_smooth_235(n)) ++n;
  return n;
}

std::vector<double> AngularTransform::nodes() const {
  std::vector<double> t(static_cast<std::size_t>(grid_size_));
  for (int j = 0; j < grid_size_; ++j) t[j] = 2.0 * std::numbers::pi * j / grid_size_;
  return t;
}

void AngularTransform::to_grid(const Complex* spectrum, double* grid) const {
  std::vector<Complex> buf(static_cast<std::size_t>(grid_size_ / 2 + 1), Complex(0.0));
  std::copy(spectrum, spectrum + max_mode_ + 1, buf.begin());
  buf[0] = Complex(buf[0].real(), 0.0);
  fftw_execute_dft_c2r(plans_->backward, reinterpret_cast<fftw_complex*>(buf.data()), grid);
}

void AngularTransform::from_grid(const double* grid, Complex* spectrum) const {
  std::vector<Complex> buf(static_cast<std::size_t>(grid_size_ / 2 + 1));
  fftw_execute_dft_r2c(plans_->forward, const_cast<double*>(grid), reinterpret_cast<fftw_complex*>(buf.data()));
  const double scale = 1.0 / grid_size_;
  for (int m = 0; m <= max_mode_; ++m) spectrum[m] = buf[m] * scale;
  spectrum[0] = Complex(spectrum[0].real(), 0.0);
}

Eigen::MatrixXd AngularTransform::to_grid(const Eigen::MatrixXcd& spectra) const {
  if (spectra.rows() != max_mode_ + 1) throw ContractError("spectrum rows do not match the truncation");
  Eigen::MatrixXd grid(grid_size_, spectra.cols());
  for (Eigen::Index k = 0; k < spectra.cols(); ++k) to_grid(spectra.col(k).data(), grid.col(k).data());
  return grid;
}

Eigen::MatrixXcd AngularTransform::from_grid(const Eigen::MatrixXd& grid) const {
  if (grid.rows() != grid_size_) throw ContractError("grid rows do not match the angular grid");
  Eigen::MatrixXcd spectra(max_mode_ + 1, grid.cols());
  for (Eigen::Index k = 0; k < grid.cols(); ++k) from_grid(grid.col(k).data(), spectra.col(k).data());
  return spectra;
}

std::vector<double> AngularTransform::to_grid(const FourierSeries& f) const {
  if (f.max_mode() > max_mode_) throw ContractError("series truncation exceeds the transform truncation");
  const FourierSeries g = f.resized(max_mode_);
  std::vector<double> grid(static_cast<std::size_t>(grid_size_));
  to_grid(g.coefficients().data(), grid.data());
  return grid;
}

FourierSeries AngularTransform::from_grid(const std::vector<double>& grid) const {
  if (static_cast<int>(grid.size()) != grid_size_) throw ContractError("grid size does not match the transform");
  std::vector<Complex> c(static_cast<std::size_t>(max_mode_ + 1));
  from_grid(grid.data(), c.data());
  return FourierSeries(std::move(c));
}

}  // namespace necrosim
