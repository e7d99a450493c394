#include "rgbo/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rgbo/error.hpp"
#include "rgbo/model.hpp"

namespace rgbo {

CubicRoots cubic_roots(double beta, double c, double gamma) {
  if (!(beta > 0.0) || !(gamma > 0.0)) throw precondition_error("cubic roots need beta > 0 and gamma > 0");
  const double cs = c_star(beta, gamma);
  if (!(c < cs)) {
    std::ostringstream msg;
    msg << "cubic roots degenerate for c >= c_* = " << cs << ", got c = " << c;
    throw precondition_error(msg.str());
  }
  const double c2 = c * c, c3 = c2 * c;
  const double disc = 27.0 * gamma * beta * beta - 4.0 * c3;
  const double root = 12.0 * beta * std::sqrt(3.0 * gamma * disc);
  const double S = 108.0 * gamma * beta * beta - 8.0 * c3 + root;
  const double s = std::cbrt(S);

  // s -+ 2c via their cubes, each a sum of nonnegative terms.
  const double s_minus = (4.0 * disc + root) / (s * s + 2.0 * c * s + 4.0 * c2);
  const double s_plus = (108.0 * gamma * beta * beta + root) / (s * s - 2.0 * c * s + 4.0 * c2);

  CubicRoots r;
  r.D = -4.0 * c2 / s;
  r.a = std::numbers::sqrt3 / (12.0 * beta * s) * s_minus * s_plus;
  r.b = c2 / (3.0 * beta * s) + s / (12.0 * beta) + c / (3.0 * beta);
  r.real_root = c / beta - 2.0 * r.b;
  return r;
}

double trial_I(double beta, double c, double gamma, double a, double b) {
  if (!(a > 0.0)) throw precondition_error("trial_I requires a > 0");
  if (b == 0.0) throw precondition_error("trial_I requires b != 0");
  const double r2 = a * a + b * b;
  const double b3 = b * b * b, b5 = b3 * b * b, a5 = a * a * a * a * a;
  const double num = 2.0 * beta * std::atan(b / a) * r2 * r2 * r2 +
                     std::numbers::pi * (gamma * b3 - c * b5 - c * a * a * b3) + beta * (2.0 * b5 * a - 2.0 * a5 * b);
  return num / (a * b * r2);
}

RealField trial_function(double a, double b, const Grid& grid) {
  return RealField::sample(grid, [&](double x) {
    const double e = std::exp(-a * std::abs(x));
    const double sg = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    return e * (b * std::cos(b * x) - a * sg * std::sin(b * x));
  });
}

RealField bo_soliton(double beta, double c, const Grid& grid) {
  if (!(beta > 0.0)) throw precondition_error("soliton requires beta > 0");
  if (!(c < 0.0)) throw precondition_error("soliton requires c < 0");
  return RealField::sample(grid, [&](double x) { return 4.0 * c * beta * beta / (beta * beta + c * c * x * x); });
}

RealField limit_soliton(double beta, double c, const Grid& grid) { return 0.5 * bo_soliton(beta, c, grid); }

Alignment align_to(const RealField& phi, const RealField& reference) {
  if (!(phi.grid() == reference.grid())) throw precondition_error("alignment requires a common grid");
  const Grid& grid = phi.grid();
  const SpectralField P = forward(phi);
  const SpectralField R = forward(reference);
  std::vector<std::complex<double>> prod(grid.size());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = P[k] * std::conj(R[k]);
  // corr[j] = int phi(x + r_j) ref(x) dx with r_j = x_j
  const RealField corr = inverse(SpectralField(grid, std::move(prod)));

  const std::size_t n = grid.size();
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (corr[j] > corr[best]) best = j;
  const double ym = corr[(best + n - 1) % n], y0 = corr[best], yp = corr[(best + 1) % n];
  const double curv = ym - 2.0 * y0 + yp;
  const double delta = curv < 0.0 ? 0.5 * (ym - yp) / curv : 0.0;
  const double shift = grid.points()[best] + delta * grid.spacing();
  return {shift, translate(phi, shift)};
}

std::vector<WeakRotationRecord> weak_rotation_sweep(double beta, double c, const std::vector<double>& gammas,
                                                    const Grid& grid, const SolveConfig& config,
                                                    std::vector<RealField>* aligned_profiles) {
  if (!(c < 0.0)) throw precondition_error("weak-rotation sweep requires c < 0");
  if (gammas.empty()) throw precondition_error("weak-rotation sweep needs at least one gamma");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0)) throw precondition_error("gamma values must be positive");
    if (i > 0 && !(gammas[i] < gammas[i - 1])) throw precondition_error("gamma values must be strictly decreasing");
  }

  const RealField reference = limit_soliton(beta, c, grid).minus_mean();
  const RealField bo = bo_soliton(beta, c, grid).minus_mean();
  const double bo_l2 = std::sqrt(integrate_product(bo, bo));
  const SpectralField Ref = forward(reference);
  const double ref_l2 = std::sqrt(integrate_product(reference, reference));
  const double ref_h = std::sqrt(spectral_quadratic(Ref, [](double xi, std::size_t) { return 1.0 + std::abs(xi); }));

  std::vector<WeakRotationRecord> out;
  SolveConfig cfg = config;
  for (double g : gammas) {
    const Params params = Params::make(beta, c, g, 2.0, Nonlinearity::quadratic);
    SolitaryWave wave = solve(params, grid, cfg);
    Alignment al = align_to(wave.phi, reference);
    const RealField err = al.aligned - reference;
    const SpectralField E = forward(err);

    WeakRotationRecord rec;
    rec.gamma = g;
    rec.l2_error = std::sqrt(integrate_product(err, err)) / ref_l2;
    const RealField bo_err = align_to(wave.phi, bo).aligned - bo;
    rec.bo_l2_error = std::sqrt(integrate_product(bo_err, bo_err)) / bo_l2;
    rec.h_half_error =
        std::sqrt(spectral_quadratic(E, [](double xi, std::size_t) { return 1.0 + std::abs(xi); })) / ref_h;
    rec.gamma_d_gamma = g * 0.5 * wave.report.integrals.antiderivative_sq;
    rec.shift = al.shift;
    rec.iterations = wave.iterations;
    rec.final_residual = wave.final_residual;
    out.push_back(rec);
    if (aligned_profiles) aligned_profiles->push_back(al.aligned);
    cfg.init = UserField{wave.phi};
  }
  return out;
}

TailFit fit_power_tail(const RealField& f, double x_lo, double x_hi) {
  if (!(x_lo > 0.0 && x_hi > x_lo)) throw precondition_error("tail window must satisfy 0 < x_lo < x_hi");
  auto x = f.grid().points();
  std::vector<std::size_t> idx;
  for (std::size_t j = 1; j + 1 < f.size(); ++j)
    if (x[j] >= x_lo && x[j] <= x_hi) idx.push_back(j);
  if (idx.size() < 3) throw precondition_error("tail window holds fewer than three grid points");

  bool oscillates = false;
  for (std::size_t i = 1; i < idx.size(); ++i)
    if ((f[idx[i]] > 0.0) != (f[idx[i - 1]] > 0.0)) oscillates = true;

  TailFit fit;
  fit.envelope = oscillates;
  std::vector<std::size_t> use;
  if (oscillates) {
    for (std::size_t j : idx) {
      const double v = std::abs(f[j]);
      if (v >= std::abs(f[j - 1]) && v >= std::abs(f[j + 1]) && v > 0.0) use.push_back(j);
    }
  } else {
    for (std::size_t j : idx)
      if (f[j] != 0.0) use.push_back(j);
  }
  if (use.size() < 3) throw precondition_error("too few usable tail samples in window");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t j : use) {
    const double lx = std::log(x[j]), ly = std::log(std::abs(f[j]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(use.size());
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  const std::size_t last = use.back();
  fit.constant = std::pow(x[last], 6) * std::abs(f[last]);
  fit.samples = use.size();
  return fit;
}

RealField kernel(double beta, double c, double gamma, const Grid& grid, double smoothing) {
  const Params params = Params::make(beta, c, gamma, 2.0, Nonlinearity::quadratic);
  params.require_existence_regime();
  const auto m = dispersion_symbol(grid, params);
  auto xi = grid.wavenumbers();
  std::vector<std::complex<double>> h(grid.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double q = xi[k] * xi[k];
    h[k] = q / m[k] * std::exp(-0.5 * smoothing * smoothing * q);
  }
  return inverse(SpectralField(grid, std::move(h)));
}

TailFit kernel_tail(double beta, double c, double gamma, double x_lo, double x_hi, const KernelTailOptions& options) {
  const double half = 0.5 * options.length;
  if (!(x_lo > 0.1 * half && x_hi < 0.45 * half && x_lo < x_hi)) {
    std::ostringstream msg;
    msg << "tail window [" << x_lo << ", " << x_hi << "] must lie inside (" << 0.1 * half << ", " << 0.45 * half
        << ")";
    throw precondition_error(msg.str());
  }
  const Grid grid = Grid::make(options.length, options.count);
  return fit_power_tail(kernel(beta, c, gamma, grid, options.smoothing), x_lo, x_hi);
}

double kernel_tail_constant(double beta, double gamma) {
  return 120.0 * beta / (std::numbers::pi * gamma * gamma);
}

}  // namespace rgbo
