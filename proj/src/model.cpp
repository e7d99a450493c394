#include "rgbo/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rgbo/error.hpp"

namespace rgbo {

double nonlinearity(double u, const Params& params) {
  const double a = std::abs(u);
  switch (params.kind) {
    case Nonlinearity::quadratic: return u * u;
    case Nonlinearity::even: return std::pow(a, params.p);
    case Nonlinearity::odd_focusing_sign: return -std::pow(a, params.p - 1.0) * u;
    case Nonlinearity::odd_plain: return std::pow(a, params.p - 1.0) * u;
  }
  return 0.0;
}

double nonlinearity_potential(double u, const Params& params) {
  const double a = std::abs(u);
  const double p1 = params.p + 1.0;
  switch (params.kind) {
    case Nonlinearity::quadratic: return u * u * u / 3.0;
    case Nonlinearity::even: return std::pow(a, params.p) * u / p1;
    case Nonlinearity::odd_focusing_sign: return -std::pow(a, p1) / p1;
    case Nonlinearity::odd_plain: return std::pow(a, p1) / p1;
  }
  return 0.0;
}

RealField f_of(const RealField& u, const Params& params) {
  std::vector<double> v(u.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = nonlinearity(u[j], params);
  return RealField(u.grid(), std::move(v));
}

RealField F_of(const RealField& u, const Params& params) {
  std::vector<double> v(u.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = nonlinearity_potential(u[j], params);
  return RealField(u.grid(), std::move(v));
}

QuadraticIntegrals quadratic_integrals(const RealField& u, const Params& params, double mean_tolerance) {
  // Same gate as antiderivative(): the d^{-1} term needs a zero-mean field.
  double sq = 0.0;
  for (double v : u.values()) sq += v * v;
  const double rms = std::sqrt(sq / static_cast<double>(u.size()));
  if (std::abs(u.mean()) > mean_tolerance * std::max(rms, 1e-300)) {
    std::ostringstream msg;
    msg << "functionals require a zero-mean field, mean = " << u.mean();
    throw precondition_error(msg.str());
  }
  const SpectralField U = forward(u);
  const std::size_t nyq = u.grid().nyquist_index();
  QuadraticIntegrals q;
  q.half_derivative_sq = spectral_quadratic(U, [](double xi, std::size_t) { return std::abs(xi); });
  q.antiderivative_sq = spectral_quadratic(U, [nyq](double xi, std::size_t idx) {
    return (xi == 0.0 || idx == nyq) ? 0.0 : 1.0 / (xi * xi);
  });
  q.l2_sq = sq * u.grid().spacing();
  q.potential = integrate(F_of(u, params));
  return q;
}

double FunctionalReport::i_k_residual() const {
  const double scale = std::max(std::abs(I), std::abs(K));
  return scale > 0.0 ? std::abs(I - K) / scale : 0.0;
}

PohozaevResiduals pohozaev_residuals(const QuadraticIntegrals& q, const Params& params) {
  const double b = params.beta, c = params.c, g = params.gamma, p = params.p;
  auto relative = [](std::initializer_list<double> terms, bool& degenerate) {
    double sum = 0.0, scale = 0.0;
    for (double t : terms) {
      sum += t;
      scale = std::max(scale, std::abs(t));
    }
    if (scale == 0.0) {
      degenerate = true;
      return 0.0;
    }
    return std::abs(sum) / scale;
  };
  PohozaevResiduals r;
  r.r1 = relative({b * q.half_derivative_sq, -c * q.l2_sq, g * q.antiderivative_sq, (p + 1.0) * q.potential},
                  r.degenerate);
  r.r2 = relative({-c * q.l2_sq, 3.0 * g * q.antiderivative_sq, 2.0 * q.potential}, r.degenerate);
  r.r3 = relative({-2.0 * b * q.half_derivative_sq, -(p - 1.0) * c * q.l2_sq, (3.0 * p + 1.0) * g * q.antiderivative_sq},
                  r.degenerate);
  return r;
}

PohozaevResiduals pohozaev_residuals(const RealField& phi, const Params& params) {
  return pohozaev_residuals(quadratic_integrals(phi, params), params);
}

FunctionalReport functionals(const RealField& phi, const Params& params, double mean_tolerance) {
  const QuadraticIntegrals q = quadratic_integrals(phi, params, mean_tolerance);
  FunctionalReport r;
  r.integrals = q;
  r.energy = 0.5 * params.beta * q.half_derivative_sq + 0.5 * params.gamma * q.antiderivative_sq + q.potential;
  r.momentum = 0.5 * q.l2_sq;
  r.mass = integrate(phi);
  r.I = params.beta * q.half_derivative_sq - params.c * q.l2_sq + params.gamma * q.antiderivative_sq;
  r.K = -(params.p + 1.0) * q.potential;
  r.action = r.energy - params.c * r.momentum;
  r.P = r.I - r.K;
  r.pohozaev = pohozaev_residuals(q, params);
  return r;
}

double equation_residual(const RealField& phi, const Params& params) {
  params.require_existence_regime();
  const Grid& grid = phi.grid();
  const auto m = dispersion_symbol(grid, params);
  const SpectralField Phi = forward(phi);
  const SpectralField Fhat = forward(f_of(phi, params));
  auto xi = grid.wavenumbers();
  double num = 0.0, den = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    den += std::norm(Fhat[idx]);
    if (xi[idx] == 0.0) continue;
    const auto psi = Phi[idx] / (-xi[idx] * xi[idx]);
    num += std::norm(m[idx] * psi - Fhat[idx]);
  }
  if (den == 0.0) throw precondition_error("equation residual undefined for the trivial field");
  return std::sqrt(num / den);
}

std::string NonexistenceVerdict::describe() const {
  switch (which) {
    case NonexistenceCase::none: return "not excluded";
    case NonexistenceCase::i: return "no solitary wave, case (i): beta < 0, gamma > 0, c^3 < 27(3p+1) gamma beta^2/(p-1)^3";
    case NonexistenceCase::ii: return "no solitary wave, case (ii): beta > 0, gamma < 0, c^3 > 27(3p+1) gamma beta^2/(p-1)^3";
    case NonexistenceCase::iii: return "no solitary wave, case (iii): f(u) = |u|^{p-1}u with beta > 0, gamma < 0";
    case NonexistenceCase::iv: return "no solitary wave, case (iv): f(u) = -|u|^{p-1}u with beta < 0, gamma > 0";
  }
  return "unknown";
}

NonexistenceVerdict nonexistence(const Params& params) {
  const double b = params.beta, c = params.c, g = params.gamma, p = params.p;
  const double threshold = 27.0 * (3.0 * p + 1.0) * g * b * b / std::pow(p - 1.0, 3);
  const double c3 = c * c * c;
  if (b < 0.0 && g > 0.0 && c3 < threshold) return {NonexistenceCase::i};
  if (b > 0.0 && g < 0.0 && c3 > threshold) return {NonexistenceCase::ii};
  if (params.kind == Nonlinearity::odd_plain && b > 0.0 && g < 0.0) return {NonexistenceCase::iii};
  if (params.kind == Nonlinearity::odd_focusing_sign && b < 0.0 && g > 0.0) return {NonexistenceCase::iv};
  return {};
}

std::string_view to_string(InstabilityVerdict verdict) {
  switch (verdict) {
    case InstabilityVerdict::unstable_by_speed: return "unstable_by_speed";
    case InstabilityVerdict::unstable_small_gamma: return "unstable_small_gamma";
    case InstabilityVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

InstabilityVerdict instability_predicate(const Params& params) {
  params.require_existence_regime();
  const double p = params.p;
  if (p > 5.0 && params.c < (p - 5.0) / (p - 1.0) * params.critical_speed()) {
    return InstabilityVerdict::unstable_by_speed;
  }
  // The gamma threshold is not quantified; this is a flag only.
  if (params.c < 0.0 && p > 3.0) return InstabilityVerdict::unstable_small_gamma;
  return InstabilityVerdict::inconclusive;
}

}  // namespace rgbo
