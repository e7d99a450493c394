#include "rgbo/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "rgbo/error.hpp"

namespace rgbo {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per size and kept for the process.
struct plan_pair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

const plan_pair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, plan_pair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const int len = static_cast<int>(n);
  plan_pair p;
  p.forward = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, p).first->second;
}

void execute(fftw_plan plan, std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw precondition_error("grid mismatch between operands");
}

RealField multiplier(const RealField& u, auto&& symbol) {
  return inverse(apply_multiplier(forward(u), symbol));
}

}  // namespace

Grid Grid::make(double length, std::size_t count) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    std::ostringstream msg;
    msg << "grid length must be positive, got " << length;
    throw precondition_error(msg.str());
  }
  if (count % 2 != 0 || count < 16) {
    std::ostringstream msg;
    msg << "grid size must be even and at least 16, got " << count;
    throw precondition_error(msg.str());
  }
  auto data = std::make_shared<Data>();
  data->length = length;
  data->count = count;
  data->points.resize(count);
  data->wavenumbers.resize(count);
  const double dx = length / static_cast<double>(count);
  const double dk = 2.0 * std::numbers::pi / length;
  const long half = static_cast<long>(count / 2);
  for (std::size_t j = 0; j < count; ++j) {
    const long k = static_cast<long>(j) < half ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(count);
    data->points[j] = -0.5 * length + static_cast<double>(j) * dx;
    data->wavenumbers[j] = dk * static_cast<double>(k);
  }
  plans_for(count);
  return Grid(std::move(data));
}

long Grid::mode(std::size_t idx) const noexcept {
  const auto n = static_cast<long>(data_->count);
  const auto i = static_cast<long>(idx);
  return i < n / 2 ? i : i - n;
}

bool Grid::operator==(const Grid& other) const noexcept {
  return data_ == other.data_ || (data_->count == other.data_->count && data_->length == other.data_->length);
}

RealField::RealField(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw precondition_error("field size does not match grid");
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j])) {
      std::ostringstream msg;
      msg << "non-finite field value at x = " << grid_.points()[j];
      throw precondition_error(msg.str());
    }
  }
}

RealField RealField::zeros(const Grid& grid) { return RealField(grid, std::vector<double>(grid.size(), 0.0)); }

double RealField::mean() const {
  double acc = 0.0;
  for (double v : values_) acc += v;
  return acc / static_cast<double>(values_.size());
}

double RealField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RealField RealField::minus_mean() const {
  const double mu = mean();
  std::vector<double> v(values_);
  for (double& x : v) x -= mu;
  return RealField(grid_, std::move(v));
}

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
  return RealField(a.grid(), std::move(v));
}

RealField operator-(const RealField& a, const RealField& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
  return RealField(a.grid(), std::move(v));
}

RealField operator*(double s, const RealField& a) {
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * a[j];
  return RealField(a.grid(), std::move(v));
}

SpectralField::SpectralField(Grid grid, std::vector<coefficient> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw precondition_error("spectral field size does not match grid");
}

SpectralField SpectralField::zeros(const Grid& grid) {
  return SpectralField(grid, std::vector<coefficient>(grid.size()));
}

double SpectralField::hermitian_defect() const {
  const std::size_t n = coeffs_.size();
  double defect = std::abs(coeffs_[0].imag()) + std::abs(coeffs_[n / 2].imag());
  for (std::size_t idx = 1; idx < n; ++idx) {
    defect = std::max(defect, std::abs(coeffs_[n - idx] - std::conj(coeffs_[idx])));
  }
  return defect;
}

SpectralField forward(const RealField& f) {
  const Grid& grid = f.grid();
  const std::size_t n = grid.size();
  std::vector<std::complex<double>> in(n), out(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = f[j];
  execute(plans_for(n).forward, in, out);
  // exp(-i xi_k x_0) = (-1)^k with x_0 = -L/2.
  const double dx = grid.spacing();
  for (std::size_t idx = 0; idx < n; ++idx) out[idx] *= (idx % 2 == 0) ? dx : -dx;
  return SpectralField(grid, std::move(out));
}

RealField inverse(const SpectralField& F) {
  const Grid& grid = F.grid();
  const std::size_t n = grid.size();
  std::vector<std::complex<double>> in(F.coeffs().begin(), F.coeffs().end()), out(n);
  const double scale = 1.0 / grid.length();
  for (std::size_t idx = 0; idx < n; ++idx) in[idx] *= (idx % 2 == 0) ? scale : -scale;
  execute(plans_for(n).backward, in, out);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = out[j].real();
  return RealField(grid, std::move(v));
}

RealField hilbert(const RealField& u) {
  const std::size_t nyq = u.grid().nyquist_index();
  return multiplier(u, [nyq](double xi, std::size_t idx) -> std::complex<double> {
    if (idx == nyq || xi == 0.0) return 0.0;
    return {0.0, xi > 0.0 ? -1.0 : 1.0};
  });
}

RealField half_derivative(const RealField& u) {
  return multiplier(u, [](double xi, std::size_t) -> std::complex<double> { return std::sqrt(std::abs(xi)); });
}

RealField derivative(const RealField& u, int order) {
  if (order < 1) throw precondition_error("derivative order must be positive");
  const std::size_t nyq = u.grid().nyquist_index();
  return multiplier(u, [nyq, order](double xi, std::size_t idx) -> std::complex<double> {
    if (idx == nyq && order % 2 == 1) return 0.0;
    return std::pow(std::complex<double>(0.0, xi), order);
  });
}

RealField antiderivative(const RealField& u, int order, double mean_tolerance) {
  if (order != 1 && order != 2) throw precondition_error("antiderivative order must be 1 or 2");
  double sq = 0.0;
  for (double v : u.values()) sq += v * v;
  const double rms = std::sqrt(sq / static_cast<double>(u.size()));
  const double mu = u.mean();
  if (std::abs(mu) > mean_tolerance * std::max(rms, 1e-300)) {
    std::ostringstream msg;
    msg << "antiderivative requires a zero-mean field, mean = " << mu;
    throw precondition_error(msg.str());
  }
  const std::size_t nyq = u.grid().nyquist_index();
  return multiplier(u, [nyq, order](double xi, std::size_t idx) -> std::complex<double> {
    if (xi == 0.0) return 0.0;
    if (order == 1) return idx == nyq ? 0.0 : std::complex<double>(0.0, -1.0 / xi);
    return -1.0 / (xi * xi);
  });
}

std::vector<double> dispersion_symbol(const Grid& grid, const Params& params) {
  auto xi = grid.wavenumbers();
  std::vector<double> m(xi.size());
  for (std::size_t idx = 0; idx < xi.size(); ++idx) {
    const double a = std::abs(xi[idx]);
    m[idx] = params.beta * a * a * a - params.c * a * a + params.gamma;
    if (!(m[idx] > 0.0)) {
      std::ostringstream msg;
      msg << "dispersion symbol not positive at mode k = " << grid.mode(idx) << " (xi = " << xi[idx]
          << ", m = " << m[idx] << "); c = " << params.c << " with c_* = " << params.critical_speed();
      throw precondition_error(msg.str());
    }
  }
  return m;
}

double integrate(const RealField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc * f.grid().spacing();
}

double integrate_product(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid());
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += f[j] * g[j];
  return acc * f.grid().spacing();
}

RealField translate(const RealField& u, double r) {
  const std::size_t nyq = u.grid().nyquist_index();
  return multiplier(u, [nyq, r](double xi, std::size_t idx) -> std::complex<double> {
    if (idx == nyq) return std::cos(xi * r);
    return std::polar(1.0, xi * r);
  });
}

double spectral_tail(const RealField& f) {
  const SpectralField F = forward(f);
  const Grid& grid = f.grid();
  const long quarter = static_cast<long>(grid.size() / 4);
  double peak = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    const double a = std::abs(F[k]);
    peak = std::max(peak, a);
    if (std::abs(grid.mode(k)) > quarter) tail = std::max(tail, a);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

}  // namespace rgbo
