#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rgbo/params.hpp"
#include "rgbo/solver.hpp"
#include "rgbo/spectral.hpp"

namespace rgbo {

struct GridMeta {
  double length = 0.0;
  std::size_t count = 0;
};

// One point of the d-surface.
struct StabilityRecord {
  double beta = 0.0, c = 0.0, gamma = 0.0, p = 0.0;
  Nonlinearity kind = Nonlinearity::quadratic;
  double d = 0.0;        // E - cQ
  double d_from_K = 0.0;  // (p-1)/(2(p+1)) K
  double d_beta = 0.0;    // (1/2) int (D^{1/2} phi)^2
  double d_c = 0.0;       // -Q
  double d_gamma = 0.0;   // (1/2) int (d^{-1} phi)^2
  double m_variational = 0.0;
  double consistency = 0.0;  // |d - d_from_K| / |d|
  double source_wave_residual = 0.0;
  double spectral_tail = 0.0;  // see spectral_tail()
  int iterations = 0;
  GridMeta grid_meta;
};

StabilityRecord stability_point(const Params& params, const Grid& grid, const SolveConfig& config = {});

// Predicted d at (r beta, r c / s, r gamma / s^3).
double scale_d(const StabilityRecord& record, double r, double s);

struct Canonical {
  Params params;        // beta = 2, gamma = 1
  double factor = 1.0;  // d(canonical) = factor * d(original)
};

Canonical to_canonical(const Params& params);

// Grid choice per sample: the finer count above near_fraction * c_*, then
// doubled until the wave's spectral tail is below tail_tol or max_count is reached.
struct GridPolicy {
  double length = 400.0;
  std::size_t count = 8192;
  std::size_t near_count = 32768;
  double near_fraction = 0.95;
  double tail_tol = 1e-9;
  std::size_t max_count = 262144;

  Grid grid_for(const Params& params) const;
};

// stability_point on the grids of `policy`, refined as described there.
StabilityRecord resolved_point(const Params& params, const GridPolicy& policy, const SolveConfig& config = {});

// Sweep defaults: suggested initial guess per point, tolerance 1e-10.
SolveConfig sweep_config();

enum class SweepAxis { speed_at_fixed_gamma, gamma_at_fixed_speed };

struct SweepResult {
  SweepAxis axis = SweepAxis::speed_at_fixed_gamma;
  double p = 0.0;
  Nonlinearity kind = Nonlinearity::even;
  std::vector<StabilityRecord> samples;
  // (c / c_*, d_cc) at each sample; for the gamma sweep the abscissa is the
  // mapped speed on beta = 2, gamma = 1.
  std::vector<std::pair<double, double>> d_cc;
  std::vector<double> sign_changes;  // in units of c_*
};

// Finite-difference weights for f'(x0) on arbitrary distinct nodes.
std::vector<double> derivative_weights(double x0, std::span<const double> nodes);

// First derivative on a nonuniform mesh: centred `width`-point stencils in the
// interior, shifted one-sided stencils of the same width at the ends.
std::vector<double> mesh_derivative(const std::vector<double>& x, const std::vector<double>& f,
                                    std::size_t width = 5);

// Zero crossings by linear interpolation between sign flips.
std::vector<double> sign_crossings(const std::vector<std::pair<double, double>>& curve);

// beta = 2, gamma = 1; c values strictly increasing and below 3. d_cc from
// d_c = -Q. Throws naming the failing c. Points run on `jobs` threads.
SweepResult sweep_S1(double p, Nonlinearity kind, const std::vector<double>& c_values, const GridPolicy& policy = {},
                     const SolveConfig& config = sweep_config(), int jobs = 1);

// beta = 2, c = -3; gamma values strictly increasing in (0, 1]. d_cc at
// (2, -3 t, 1), t = gamma^{-1/3}, assembled from d, d_gamma and a finite
// difference of d_gamma through the scaling law.
SweepResult sweep_S2(double p, Nonlinearity kind, const std::vector<double>& gamma_values,
                     const GridPolicy& policy = {}, const SolveConfig& config = sweep_config(), int jobs = 1);

// c on beta = 2, gamma = 1: step 0.02 c_* from -c_* to 0.9 c_*, then 0.005 c_* up to 0.995 c_*.
std::vector<double> default_s1_mesh();
// gamma = t^{-3} for t = t_max down to 1 in steps dt, with quarter steps in
// the last interval, returned increasing.
std::vector<double> default_s2_mesh(double t_max = 4.0, double dt = 0.025);

struct SignRow {
  double p = 0.0;
  // Open intervals (start, end) in units of c_* where d_cc > 0; start is
  // -infinity when positive at the most negative sample, end is 1 when
  // positive at the last sample below c_*.
  std::vector<std::pair<double, double>> intervals;
  bool failed = false;
  std::string error;
  SweepResult s1, s2;
  // d_cc at c = -c_* from both pathways.
  double overlap_s1 = 0.0, overlap_s2 = 0.0;
};

struct TableMeshes {
  std::vector<double> c_values = default_s1_mesh();
  std::vector<double> gamma_values = default_s2_mesh();
};

SignRow sign_row(double p, Nonlinearity kind, const TableMeshes& meshes = {}, const GridPolicy& policy = {},
                 const SolveConfig& config = sweep_config(), int jobs = 1);

std::vector<SignRow> sign_table(Nonlinearity kind, const std::vector<double>& p_values, const TableMeshes& meshes = {},
                                const GridPolicy& policy = {}, const SolveConfig& config = sweep_config(),
                                int jobs = 1);

// Merged (c / c_*, d_cc) curve: gamma sweep below -c_*, speed sweep from -c_* on.
std::vector<std::pair<double, double>> merged_curve(const SweepResult& s1, const SweepResult& s2);
std::vector<std::pair<double, double>> positive_intervals(const std::vector<std::pair<double, double>>& curve);

// d(c) versus d(0) (1 - c/c_*)^{(p+1)/(p-1)} at fixed beta, gamma: d is at
// least the bound for 0 <= c < c_* and at most the bound for c < 0. Returns
// one message per violating sample. s1 must contain c = 0.
std::vector<std::string> lemma_bound_violations(const SweepResult& s1, const SweepResult* s2 = nullptr,
                                                double rel_slack = 1e-9);

// d strictly decreasing along the speed sweep and increasing along the gamma sweep.
std::vector<std::string> monotonicity_violations(const SweepResult& sweep);

}  // namespace rgbo
