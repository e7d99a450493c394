#pragma once

#include <cstddef>
#include <vector>

#include "rgbo/solver.hpp"
#include "rgbo/spectral.hpp"

namespace rgbo {

// Roots of beta r^3 - c r^2 + gamma: one real root and the pair b +- i a.
struct CubicRoots {
  double a = 0.0;
  double b = 0.0;
  double D = 0.0;  // real cube root of the radical, negative for c != 0
  double real_root = 0.0;
};

// Closed-form Cardano evaluation. D is computed from the rationalized
// radical -64 c^6 / S, S = 108 gamma beta^2 - 8c^3 + 12 beta sqrt(3 gamma (27 gamma beta^2 - 4 c^3)),
// which equals the printed radical but stays accurate near c = 0 and near c_*.
// Requires beta > 0, gamma > 0, c < c_*.
CubicRoots cubic_roots(double beta, double c, double gamma);

// Closed form for u = w_x, w = exp(-a|x|) sin(b x): the printed expression,
// which is 2 pi I(u) for the I of module model (it integrates m |u_hat|^2 / xi^2
// over xi without the 1/(2 pi) of Parseval). Requires a > 0, b != 0.
double trial_I(double beta, double c, double gamma, double a, double b);

// u = w_x sampled on the grid, w = exp(-a|x|) sin(b x).
RealField trial_function(double a, double b, const Grid& grid);

// 4 c beta^2 / (beta^2 + c^2 x^2); requires beta > 0, c < 0.
RealField bo_soliton(double beta, double c, const Grid& grid);

// Solitary wave of -c phi + beta H phi' + phi^2 = 0, the gamma = 0 limit for
// f = u^2. bo_soliton solves the same equation with u^2 / 2, so this is half of it.
RealField limit_soliton(double beta, double c, const Grid& grid);

struct Alignment {
  double shift = 0.0;  // phi(. + shift) best matches the reference
  RealField aligned;
};

// Maximizes the periodic cross-correlation over grid shifts, then refines
// with a three-point parabola and translates spectrally.
Alignment align_to(const RealField& phi, const RealField& reference);

struct WeakRotationRecord {
  double gamma = 0.0;
  double l2_error = 0.0;      // relative to ||reference||_{L2}
  double h_half_error = 0.0;  // relative to ||reference||_{H^{1/2}}
  double bo_l2_error = 0.0;    // same distance to bo_soliton itself
  double gamma_d_gamma = 0.0;  // gamma * (1/2) int (d^{-1} phi)^2
  double shift = 0.0;
  int iterations = 0;
  double final_residual = 0.0;
};

// Quadratic-nonlinearity solves at decreasing gamma, each warm-started from
// the previous profile. The reference is the zero-mean projection of the
// sampled limit_soliton, since every periodic iterate has zero mean.
// aligned_profiles, when given, receives each wave translated onto the reference.
std::vector<WeakRotationRecord> weak_rotation_sweep(double beta, double c, const std::vector<double>& gammas,
                                                    const Grid& grid, const SolveConfig& config = {},
                                                    std::vector<RealField>* aligned_profiles = nullptr);

struct TailFit {
  double exponent = 0.0;
  double constant = 0.0;  // |x|^6 |h(x)| at the right window edge
  double prefactor = 0.0;  // exp(intercept) of the fit
  std::size_t samples = 0;
  bool envelope = false;  // fitted through local maxima of |h|
};

// Least-squares fit of log|f| against log x for x in [x_lo, x_hi], x > 0.
// Uses local maxima of |f| when f changes sign inside the window.
TailFit fit_power_tail(const RealField& f, double x_lo, double x_hi);

struct KernelTailOptions {
  double length = 1600.0;
  std::size_t count = 32768;
  double smoothing = 1.0;  // width of the Gaussian mollifier exp(-s^2 xi^2 / 2)
};

// Synthesizes h with h_hat = xi^2 / m(xi) (mollified) and fits its tail.
// Requires the existence regime and 0.1 L/2 < x_lo < x_hi < 0.45 L/2.
TailFit kernel_tail(double beta, double c, double gamma, double x_lo, double x_hi,
                    const KernelTailOptions& options = {});

// Mollified kernel sampled on grid.
RealField kernel(double beta, double c, double gamma, const Grid& grid, double smoothing);

// Limit of |x|^6 h(x) for the transform pair used by the spectral module.
double kernel_tail_constant(double beta, double gamma);

}  // namespace rgbo
