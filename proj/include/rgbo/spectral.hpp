#pragma once

// Periodic grid, discrete Fourier transform and the Fourier-multiplier
// operators of the model.
//
// Transform convention (matches the continuous transform on the line):
//   F_k = (L/N) sum_j f_j exp(-i xi_k x_j),   f_j = (1/L) sum_k F_k exp(i xi_k x_j)
// with x_j = -L/2 + j L/N and xi_k = 2 pi k / L. Parseval reads
//   sum_j |f_j|^2 (L/N) = (1/L) sum_k |F_k|^2.
// Coefficients are stored in FFT-natural order: index k for k < N/2,
// index k + N for negative k. The Nyquist mode of odd multipliers is zeroed.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "rgbo/params.hpp"

namespace rgbo {

class Grid {
 public:
  struct Data {
    double length = 0.0;
    std::size_t count = 0;
    std::vector<double> points;
    std::vector<double> wavenumbers;
  };

  // Requires length > 0, count even and count >= 16.
  static Grid make(double length, std::size_t count);

  double length() const noexcept { return data_->length; }
  std::size_t size() const noexcept { return data_->count; }
  double spacing() const noexcept { return data_->length / static_cast<double>(data_->count); }

  std::span<const double> points() const noexcept { return data_->points; }
  // Natural FFT order.
  std::span<const double> wavenumbers() const noexcept { return data_->wavenumbers; }
  // Signed integer k of storage index idx.
  long mode(std::size_t idx) const noexcept;
  std::size_t nyquist_index() const noexcept { return data_->count / 2; }

  bool operator==(const Grid& other) const noexcept;


 private:
  explicit Grid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

class RealField {
 public:
  // Throws precondition_error on size mismatch or non-finite entries.
  RealField(Grid grid, std::vector<double> values);
  static RealField zeros(const Grid& grid);
  template <class Fn>
  static RealField sample(const Grid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    auto x = grid.points();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(x[j]);
    return RealField(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }

  double mean() const;
  double max_abs() const;
  RealField minus_mean() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);

class SpectralField {
 public:
  using coefficient = std::complex<double>;

  SpectralField(Grid grid, std::vector<coefficient> coeffs);
  static SpectralField zeros(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const coefficient> coeffs() const noexcept { return coeffs_; }
  std::span<coefficient> coeffs() noexcept { return coeffs_; }
  const coefficient& operator[](std::size_t idx) const noexcept { return coeffs_[idx]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  // max_k |F(-xi_k) - conj F(xi_k)|, Nyquist compared with its own conjugate.
  double hermitian_defect() const;

 private:
  Grid grid_;
  std::vector<coefficient> coeffs_;
};

SpectralField forward(const RealField& f);
// Real part of the inverse transform; exact for Hermitian input.
RealField inverse(const SpectralField& F);

// Multiplies by symbol(xi_k, idx) in Fourier space.
template <class Symbol>
SpectralField apply_multiplier(const SpectralField& F, Symbol&& symbol) {
  SpectralField out = F;
  auto xi = F.grid().wavenumbers();
  auto c = out.coeffs();
  for (std::size_t idx = 0; idx < c.size(); ++idx) c[idx] *= symbol(xi[idx], idx);
  return out;
}

// Symbol -i sgn(xi); zero and Nyquist modes map to 0.
RealField hilbert(const RealField& u);
// Symbol |xi|^{1/2}.
RealField half_derivative(const RealField& u);
// Symbol (i xi)^order, order >= 1.
RealField derivative(const RealField& u, int order = 1);

inline constexpr double default_mean_tolerance = 1e-8;

// Symbol (i xi)^{-order} for order 1 or 2, zero mode set to 0. Requires
// |mean(u)| <= mean_tolerance * max(rms(u), tiny); otherwise throws
// precondition_error naming the mean.
RealField antiderivative(const RealField& u, int order, double mean_tolerance = default_mean_tolerance);

// m(xi_k) = beta |xi_k|^3 - c xi_k^2 + gamma in storage order. Throws
// precondition_error naming the first mode with m <= 0.
std::vector<double> dispersion_symbol(const Grid& grid, const Params& params);

// Trapezoidal rule on the periodic grid.
double integrate(const RealField& f);
// Integral of f*g.
double integrate_product(const RealField& f, const RealField& g);

// Largest |F_k| over |k| > N/4 relative to the largest |F_k|; 0 for the zero field.
double spectral_tail(const RealField& f);
// (1/L) sum_k w(xi_k) |F_k|^2, the spectral form of an integral of a squared multiplier image.
template <class Weight>
double spectral_quadratic(const SpectralField& F, Weight&& weight) {
  auto xi = F.grid().wavenumbers();
  double acc = 0.0;
  for (std::size_t idx = 0; idx < F.size(); ++idx) acc += weight(xi[idx], idx) * std::norm(F[idx]);
  return acc / F.grid().length();
}

// Shift by r (periodic): returns u(. + r), computed spectrally.
RealField translate(const RealField& u, double r);

}  // namespace rgbo
