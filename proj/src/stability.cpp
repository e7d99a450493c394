#include "rgbo/stability.hpp"

#include <algorithm>
#include <array>
#include <span>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "rgbo/error.hpp"
#include "rgbo/model.hpp"

namespace rgbo {

namespace {

constexpr double s1_beta = 2.0;
constexpr double s1_gamma = 1.0;
constexpr double s2_c = -3.0;

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Rethrows the failure
// with the lowest index so the reported error does not depend on timing.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs > 0 ? static_cast<std::size_t>(jobs) : 1, 1, n > 0 ? n : 1);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void require_increasing(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw precondition_error(std::string(what) + " mesh is empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw precondition_error(std::string(what) + " mesh must be strictly increasing");
}

std::vector<StabilityRecord> solve_points(const std::vector<Params>& points, const GridPolicy& policy,
                                          const SolveConfig& config, int jobs, const char* axis_name,
                                          const std::vector<double>& axis_values) {
  std::vector<StabilityRecord> out(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    const SolveConfig cfg = suggested_config(points[i], config);
    try {
      out[i] = resolved_point(points[i], policy, cfg);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "sweep failed at " << axis_name << " = " << axis_values[i] << ": " << e.what();
      throw convergence_error(msg.str(), {});
    }
  });
  return out;
}

}  // namespace

StabilityRecord stability_point(const Params& params, const Grid& grid, const SolveConfig& config) {
  const SolitaryWave wave = solve(params, grid, config);
  const FunctionalReport& r = wave.report;
  StabilityRecord rec;
  rec.beta = params.beta;
  rec.c = params.c;
  rec.gamma = params.gamma;
  rec.p = params.p;
  rec.kind = params.kind;
  rec.d = r.action;
  rec.d_from_K = (params.p - 1.0) / (2.0 * (params.p + 1.0)) * r.K;
  rec.d_beta = 0.5 * r.integrals.half_derivative_sq;
  rec.d_c = -r.momentum;
  rec.d_gamma = 0.5 * r.integrals.antiderivative_sq;
  rec.m_variational =
      std::pow(2.0 * (params.p + 1.0) / (params.p - 1.0) * rec.d, (params.p - 1.0) / (params.p + 1.0));
  rec.consistency = std::abs(rec.d - rec.d_from_K) / std::abs(rec.d);
  rec.source_wave_residual = wave.final_residual;
  rec.spectral_tail = spectral_tail(wave.phi);
  rec.iterations = wave.iterations;
  rec.grid_meta = {grid.length(), grid.size()};
  return rec;
}

StabilityRecord resolved_point(const Params& params, const GridPolicy& policy, const SolveConfig& config) {
  Grid grid = policy.grid_for(params);
  StabilityRecord rec = stability_point(params, grid, config);
  while (rec.spectral_tail > policy.tail_tol && 2 * grid.size() <= policy.max_count) {
    grid = Grid::make(grid.length(), 2 * grid.size());
    rec = stability_point(params, grid, config);
  }
  return rec;
}

double scale_d(const StabilityRecord& record, double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw precondition_error("scale factors must be positive");
  const double p = record.p;
  return std::pow(r, (p + 1.0) / (p - 1.0)) * std::pow(s, -2.0 / (p - 1.0)) * record.d;
}

Canonical to_canonical(const Params& params) {
  params.require_existence_regime();
  const double r = 2.0 / params.beta;
  const double s = std::cbrt(2.0 * params.gamma / params.beta);
  Canonical out;
  out.params = params.with(2.0, r * params.c / s, 1.0);
  out.factor = std::pow(r, (params.p + 1.0) / (params.p - 1.0)) * std::pow(s, -2.0 / (params.p - 1.0));
  return out;
}

Grid GridPolicy::grid_for(const Params& params) const {
  const bool near = params.c > near_fraction * params.critical_speed();
  return Grid::make(length, near ? near_count : count);
}

SolveConfig sweep_config() {
  SolveConfig cfg;
  cfg.tol = 1e-10;
  return cfg;
}

std::vector<double> derivative_weights(double x0, std::span<const double> nodes) {
  // Fornberg's recursion for the first derivative.
  const std::size_t n = nodes.size();
  std::vector<std::array<double, 2>> w(n, {0.0, 0.0});
  double c1 = 1.0, c4 = nodes[0] - x0;
  w[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn + 1; k-- > 1;) w[i][k] = c1 * (k * w[i - 1][k - 1] - c5 * w[i - 1][k]) / c2;
        w[i][0] = -c1 * c5 * w[i - 1][0] / c2;
      }
      for (std::size_t k = mn + 1; k-- > 1;) w[j][k] = (c4 * w[j][k] - k * w[j][k - 1]) / c3;
      w[j][0] = c4 * w[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i][1];
  return out;
}

std::vector<double> mesh_derivative(const std::vector<double>& x, const std::vector<double>& f, std::size_t width) {
  const std::size_t n = x.size();
  if (f.size() != n) throw precondition_error("mesh and values differ in length");
  if (width < 3 || width % 2 == 0) throw precondition_error("stencil width must be odd and at least 3");
  if (n < width) throw precondition_error("mesh has fewer points than the stencil");
  std::vector<double> out(n);
  const std::size_t half = width / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = std::min(i > half ? i - half : 0, n - width);
    const std::span<const double> nodes(x.data() + lo, width);
    const auto w = derivative_weights(x[i], nodes);
    double acc = 0.0;
    for (std::size_t k = 0; k < width; ++k) acc += w[k] * f[lo + k];
    out[i] = acc;
  }
  return out;
}

std::vector<double> sign_crossings(const std::vector<std::pair<double, double>>& curve) {
  std::vector<double> out;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto [x0, y0] = curve[i - 1];
    const auto [x1, y1] = curve[i];
    if ((y0 > 0.0) != (y1 > 0.0)) out.push_back(x0 + (x1 - x0) * y0 / (y0 - y1));
  }
  return out;
}

SweepResult sweep_S1(double p, Nonlinearity kind, const std::vector<double>& c_values, const GridPolicy& policy,
                     const SolveConfig& config, int jobs) {
  require_increasing(c_values, "speed");
  if (c_values.size() < 3) throw precondition_error("speed sweep needs at least three points");
  const double cs = c_star(s1_beta, s1_gamma);
  std::vector<Params> points;
  for (double c : c_values) {
    if (!(c < cs)) throw precondition_error("speed sweep values must lie below c_* = 3");
    points.push_back(Params::make(s1_beta, c, s1_gamma, p, kind));
  }

  SweepResult out;
  out.axis = SweepAxis::speed_at_fixed_gamma;
  out.p = p;
  out.kind = kind;
  out.samples = solve_points(points, policy, config, jobs, "c", c_values);

  std::vector<double> dc;
  for (const auto& r : out.samples) dc.push_back(r.d_c);
  const auto dcc = mesh_derivative(c_values, dc);
  for (std::size_t i = 0; i < dcc.size(); ++i) out.d_cc.emplace_back(c_values[i] / cs, dcc[i]);
  out.sign_changes = sign_crossings(out.d_cc);
  return out;
}

SweepResult sweep_S2(double p, Nonlinearity kind, const std::vector<double>& gamma_values, const GridPolicy& policy,
                     const SolveConfig& config, int jobs) {
  require_increasing(gamma_values, "gamma");
  if (gamma_values.size() < 3) throw precondition_error("gamma sweep needs at least three points");
  std::vector<Params> points;
  for (double g : gamma_values) {
    if (!(g > 0.0 && g <= 1.0)) throw precondition_error("gamma sweep values must lie in (0, 1]");
    points.push_back(Params::make(s1_beta, s2_c, g, p, kind));
  }

  SweepResult out;
  out.axis = SweepAxis::gamma_at_fixed_speed;
  out.p = p;
  out.kind = kind;
  out.samples = solve_points(points, policy, config, jobs, "gamma", gamma_values);

  std::vector<double> dg;
  for (const auto& r : out.samples) dg.push_back(r.d_gamma);
  const auto dgg = mesh_derivative(gamma_values, dg);

  // d(2, -3t, 1) = t^q G(t^{-3}) with G(g) = d(2, -3, g); differentiate twice in c = -3t.
  const double q = 2.0 / (p - 1.0);
  const double cs = c_star(s1_beta, s1_gamma);
  for (std::size_t i = 0; i < gamma_values.size(); ++i) {
    const double t = std::pow(gamma_values[i], -1.0 / 3.0);
    const double G = out.samples[i].d, G1 = out.samples[i].d_gamma, G2 = dgg[i];
    const double dcc = q * (q - 1.0) / 9.0 * std::pow(t, q - 2.0) * G -
                       (2.0 * q - 4.0) / 3.0 * std::pow(t, q - 5.0) * G1 + std::pow(t, q - 8.0) * G2;
    out.d_cc.emplace_back(s2_c * t / cs, dcc);
  }
  out.sign_changes = sign_crossings(out.d_cc);
  return out;
}

std::vector<double> default_s1_mesh() {
  const double cs = c_star(s1_beta, s1_gamma);
  std::vector<double> out;
  for (int i = -50; i < 45; ++i) out.push_back(cs * i / 50.0);
  for (int i = 0; i < 20; ++i) out.push_back(cs * (180 + i) / 200.0);
  return out;
}

std::vector<double> default_s2_mesh(double t_max, double dt) {
  if (!(t_max > 1.0) || !(dt > 0.0)) throw precondition_error("gamma mesh needs t_max > 1 and dt > 0");
  const int steps = static_cast<int>(std::lround((t_max - 1.0) / dt));
  std::vector<double> out;
  for (int i = steps; i >= 1; --i) {
    const double t = 1.0 + i * dt;
    out.push_back(1.0 / (t * t * t));
  }
  // Quarter steps next to gamma = 1, where the stencil is one-sided.
  for (double t : {1.0 + 0.75 * dt, 1.0 + 0.5 * dt, 1.0 + 0.25 * dt}) out.push_back(1.0 / (t * t * t));
  out.push_back(1.0);
  return out;
}

std::vector<std::pair<double, double>> merged_curve(const SweepResult& s1, const SweepResult& s2) {
  std::vector<std::pair<double, double>> out;
  const double first = s1.d_cc.empty() ? std::numeric_limits<double>::infinity() : s1.d_cc.front().first;
  for (const auto& pt : s2.d_cc)
    if (pt.first < first - 1e-12) out.push_back(pt);
  out.insert(out.end(), s1.d_cc.begin(), s1.d_cc.end());
  return out;
}

std::vector<std::pair<double, double>> positive_intervals(const std::vector<std::pair<double, double>>& curve) {
  std::vector<std::pair<double, double>> out;
  if (curve.empty()) return out;
  const double inf = std::numeric_limits<double>::infinity();
  bool inside = curve.front().second > 0.0;
  double start = -inf;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto [x0, y0] = curve[i - 1];
    const auto [x1, y1] = curve[i];
    if ((y0 > 0.0) == (y1 > 0.0)) continue;
    const double x = x0 + (x1 - x0) * y0 / (y0 - y1);
    if (inside) {
      out.emplace_back(start, x);
    } else {
      start = x;
    }
    inside = !inside;
  }
  if (inside) out.emplace_back(start, 1.0);
  return out;
}

SignRow sign_row(double p, Nonlinearity kind, const TableMeshes& meshes, const GridPolicy& policy,
                 const SolveConfig& config, int jobs) {
  SignRow row;
  row.p = p;
  try {
    row.s1 = sweep_S1(p, kind, meshes.c_values, policy, config, jobs);
    row.s2 = sweep_S2(p, kind, meshes.gamma_values, policy, config, jobs);
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
    return row;
  }
  row.intervals = positive_intervals(merged_curve(row.s1, row.s2));
  if (!row.s1.d_cc.empty() && std::abs(row.s1.d_cc.front().first + 1.0) < 1e-12) row.overlap_s1 = row.s1.d_cc.front().second;
  if (!row.s2.d_cc.empty() && std::abs(row.s2.d_cc.back().first + 1.0) < 1e-12) row.overlap_s2 = row.s2.d_cc.back().second;
  return row;
}

std::vector<SignRow> sign_table(Nonlinearity kind, const std::vector<double>& p_values, const TableMeshes& meshes,
                                const GridPolicy& policy, const SolveConfig& config, int jobs) {
  if (p_values.empty()) throw precondition_error("p mesh is empty");
  std::vector<SignRow> out;
  for (double p : p_values) out.push_back(sign_row(p, kind, meshes, policy, config, jobs));
  return out;
}

std::vector<std::string> lemma_bound_violations(const SweepResult& s1, const SweepResult* s2, double rel_slack) {
  if (s1.axis != SweepAxis::speed_at_fixed_gamma) throw precondition_error("bound check needs the speed sweep first");
  const StabilityRecord* origin = nullptr;
  for (const auto& r : s1.samples)
    if (r.c == 0.0) origin = &r;
  if (!origin) throw precondition_error("bound check needs a sample at c = 0");

  const double p = s1.p;
  const double expo = (p + 1.0) / (p - 1.0);
  std::vector<std::string> out;
  auto check = [&](const StabilityRecord& r, double d0) {
    const double cs = c_star(r.beta, r.gamma);
    const double bound = d0 * std::pow(1.0 - r.c / cs, expo);
    const bool ok = r.c >= 0.0 ? r.d >= bound * (1.0 - rel_slack) : r.d <= bound * (1.0 + rel_slack);
    if (!ok) {
      std::ostringstream msg;
      msg << "bound violated at beta=" << r.beta << " c=" << r.c << " gamma=" << r.gamma << ": d=" << r.d
          << (r.c >= 0.0 ? " < " : " > ") << bound;
      out.push_back(msg.str());
    }
  };
  for (const auto& r : s1.samples) check(r, origin->d);
  if (s2) {
    // d(2, 0, g) = g^{q/3} d(2, 0, 1)
    const double q = 2.0 / (p - 1.0);
    for (const auto& r : s2->samples) check(r, std::pow(r.gamma, q / 3.0) * origin->d);
  }
  return out;
}

std::vector<std::string> monotonicity_violations(const SweepResult& sweep) {
  std::vector<std::string> out;
  const bool speed = sweep.axis == SweepAxis::speed_at_fixed_gamma;
  for (std::size_t i = 1; i < sweep.samples.size(); ++i) {
    const auto& a = sweep.samples[i - 1];
    const auto& b = sweep.samples[i];
    const bool ok = speed ? b.d < a.d : b.d > a.d;
    if (!ok) {
      std::ostringstream msg;
      msg << "d not strictly " << (speed ? "decreasing in c" : "increasing in gamma") << " between "
          << (speed ? a.c : a.gamma) << " and " << (speed ? b.c : b.gamma) << ": " << a.d << " -> " << b.d;
      out.push_back(msg.str());
    }
  }
  return out;
}

}  // namespace rgbo
