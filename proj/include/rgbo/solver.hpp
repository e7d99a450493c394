#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "rgbo/model.hpp"
#include "rgbo/params.hpp"
#include "rgbo/spectral.hpp"

namespace rgbo {

struct BOProfile {};
struct GaussianPulse {};
// w_x with w = exp(-a|x|) sin(bx), a and b from the dispersion cubic.
struct TrialProfile {};
struct UserField {
  RealField field;
};
using InitialGuess = std::variant<BOProfile, GaussianPulse, TrialProfile, UserField>;

struct SolveConfig {
  std::optional<double> alpha;  // defaults to p/(p-1)
  double tol = 1e-12;
  int max_iter = 1000;
  InitialGuess init = BOProfile{};
  // Keep iterates even about the extremum of the initial guess. The map
  // preserves parity; this only removes round-off growth in odd modes.
  bool enforce_symmetry = true;
  // Anderson mixing of the last `mixing_depth` Petviashvili updates, engaged
  // once the residual drops below mixing_start. 0 gives the plain scheme.
  int mixing_depth = 5;
  double mixing_start = 1e300;

  double alpha_for(const Params& params) const;
  // Requires 1 < alpha < (p+1)/(p-1), tol > 0, max_iter > 0.
  void validate(const Params& params) const;
};

struct SolitaryWave {
  RealField phi;
  RealField psi;  // phi = psi_xx; zero mode of psi taken as f_hat(0)/gamma
  Params params;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> m_history;
  std::vector<double> residual_history;
  FunctionalReport report;
};

struct PetviashviliStep {
  RealField phi_next;
  double stabilizer = 0.0;  // M_n
  double residual = 0.0;    // equation residual of the input iterate
};

// One stabilized fixed-point update. Throws degenerate_iterate when the
// stabilizer's denominator vanishes or when M_n < 0 with a fractional alpha.
PetviashviliStep petviashvili_step(const RealField& phi, const Params& params, double alpha);

// Lorentzian/Gaussian starting profiles, projected to zero mean.
RealField default_initial_guess(const Params& params, const Grid& grid, const InitialGuess& kind = BOProfile{});

// Starting point used by the sweeps. For c > 0 the Lorentzian guess is far
// too wide, so TrialProfile is used with mixing from the first step; for
// c <= 0 the Lorentzian guess is used and mixing waits for residual 1e-2.
SolveConfig suggested_config(const Params& params, SolveConfig base = {});

// Iterates until equation_residual <= tol. Throws precondition_error for
// parameters outside the existence regime and convergence_error otherwise.
SolitaryWave solve(const Params& params, const Grid& grid, const SolveConfig& config = {});

// Index of max |u| and the reflection of u about that grid point.
std::size_t extremum_index(const RealField& u);
RealField symmetrize(const RealField& u, std::size_t center);

// Number of sign changes of phi on [0, L/2), ignoring |phi| below floor * max|phi|.
int sign_changes_right_half(const RealField& phi, double floor = 1e-12);

}  // namespace rgbo
