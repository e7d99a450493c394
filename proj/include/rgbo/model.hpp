#pragma once

#include <optional>
#include <string>

#include "rgbo/params.hpp"
#include "rgbo/spectral.hpp"

namespace rgbo {

// Pointwise nonlinearity and its antiderivative F with F(0) = 0.
double nonlinearity(double u, const Params& params);
double nonlinearity_potential(double u, const Params& params);
RealField f_of(const RealField& u, const Params& params);
RealField F_of(const RealField& u, const Params& params);

// The quadratic integrals every functional is assembled from.
struct QuadraticIntegrals {
  double half_derivative_sq = 0.0;   // int (D^{1/2} u)^2
  double l2_sq = 0.0;                // int u^2
  double antiderivative_sq = 0.0;    // int (d^{-1} u)^2
  double potential = 0.0;            // int F(u)
};

QuadraticIntegrals quadratic_integrals(const RealField& u, const Params& params,
                                       double mean_tolerance = default_mean_tolerance);

struct PohozaevResiduals {
  double r1 = 0.0;  // phi-multiplier identity
  double r2 = 0.0;  // x phi_x-multiplier identity
  double r3 = 0.0;  // combination with F eliminated
  bool degenerate = false;
};

struct FunctionalReport {
  double energy = 0.0;    // E
  double momentum = 0.0;  // Q
  double mass = 0.0;      // M
  double I = 0.0;
  double K = 0.0;
  double action = 0.0;  // S = E - cQ
  double P = 0.0;
  PohozaevResiduals pohozaev;
  QuadraticIntegrals integrals;

  // |I - K| / max(|I|, |K|); 0 for the zero field.
  double i_k_residual() const;
};

FunctionalReport functionals(const RealField& phi, const Params& params,
                             double mean_tolerance = default_mean_tolerance);

// Each residual normalized by the largest term of its identity.
PohozaevResiduals pohozaev_residuals(const QuadraticIntegrals& q, const Params& params);
PohozaevResiduals pohozaev_residuals(const RealField& phi, const Params& params);

// ||m psi_hat - f_hat(phi)|| / ||f_hat(phi)|| with psi_hat = phi_hat / (-xi^2)
// and the zero mode of psi_hat taken as f_hat(0)/gamma (the continuous limit).
// Throws precondition_error for c >= c_* or for the trivial field.
double equation_residual(const RealField& phi, const Params& params);

enum class NonexistenceCase { none, i, ii, iii, iv };

struct NonexistenceVerdict {
  NonexistenceCase which = NonexistenceCase::none;
  bool excluded() const { return which != NonexistenceCase::none; }
  std::string describe() const;
};

// First matching case of the Pohozaev-based exclusion criteria.
NonexistenceVerdict nonexistence(const Params& params);

enum class InstabilityVerdict { unstable_by_speed, unstable_small_gamma, inconclusive };

std::string_view to_string(InstabilityVerdict verdict);

// Parameter-only sufficient conditions for orbital instability.
InstabilityVerdict instability_predicate(const Params& params);

}  // namespace rgbo
