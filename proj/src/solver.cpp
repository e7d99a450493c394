#include "rgbo/solver.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/Dense>

#include "rgbo/asymptotics.hpp"
#include "rgbo/error.hpp"

namespace rgbo {

namespace {

struct StepOutcome {
  SpectralField next_hat;
  double stabilizer;
  double residual;
};

StepOutcome step_in_fourier(const RealField& phi, const Params& params, double alpha,
                            const std::vector<double>& m) {
  const Grid& grid = phi.grid();
  const SpectralField Phi = forward(phi);
  const SpectralField Fhat = forward(f_of(phi, params));
  auto xi = grid.wavenumbers();
  const std::size_t n = grid.size();

  double num = 0.0, den = 0.0, f_norm = 0.0, weighted_f = 0.0, res = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    f_norm += std::norm(Fhat[idx]);
    if (xi[idx] == 0.0) continue;
    const auto psi = Phi[idx] / (-xi[idx] * xi[idx]);
    num += m[idx] * std::norm(psi);
    den += (std::conj(psi) * Fhat[idx]).real();
    weighted_f += std::norm(Fhat[idx]) / m[idx];
    res += std::norm(m[idx] * psi - Fhat[idx]);
  }
  // |den| <= sqrt(num * weighted_f) by Cauchy-Schwarz.
  if (num == 0.0 || !(std::abs(den) > 1e-13 * std::sqrt(num * weighted_f))) {
    throw degenerate_iterate("degenerate iterate: stabilizer denominator vanishes");
  }
  const double M = num / den;
  if (M < 0.0 && alpha != std::floor(alpha)) {
    std::ostringstream msg;
    msg << "sign-indefinite stabilizer: M_n = " << M << " with fractional alpha = " << alpha
        << " (initial guess has the wrong sign for this nonlinearity)";
    throw degenerate_iterate(msg.str());
  }
  const double scale = std::pow(M, alpha);

  std::vector<std::complex<double>> next(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (xi[idx] == 0.0) continue;
    next[idx] = -xi[idx] * xi[idx] * scale * Fhat[idx] / m[idx];
  }
  return {SpectralField(grid, std::move(next)), M, f_norm > 0.0 ? std::sqrt(res / f_norm) : 0.0};
}

RealField psi_from_phi(const RealField& phi, const Params& params) {
  const SpectralField Phi = forward(phi);
  const SpectralField Fhat = forward(f_of(phi, params));
  auto xi = phi.grid().wavenumbers();
  std::vector<std::complex<double>> psi(phi.size());
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    psi[idx] = xi[idx] == 0.0 ? Fhat[idx] / params.gamma : Phi[idx] / (-xi[idx] * xi[idx]);
  }
  return inverse(SpectralField(phi.grid(), std::move(psi)));
}

class AndersonMixer {
 public:
  explicit AndersonMixer(std::size_t depth) : depth_(depth) {}

  void reset() {
    dx_.clear();
    df_.clear();
    have_last_ = false;
  }

  // x_{n+1} from the iterate x and its image g = G(x).
  std::vector<double> next(std::span<const double> x, std::span<const double> g) {
    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), n), gv(g.data(), n);
    Eigen::VectorXd f = gv - xv;
    if (have_last_) {
      dx_.push_back(xv - last_x_);
      df_.push_back(f - last_f_);
      if (dx_.size() > depth_) {
        dx_.pop_front();
        df_.pop_front();
      }
    }
    last_x_ = xv;
    last_f_ = f;
    have_last_ = true;

    Eigen::VectorXd out = gv;
    if (!df_.empty()) {
      const Eigen::Index k = static_cast<Eigen::Index>(df_.size());
      Eigen::MatrixXd F(n, k), X(n, k);
      for (Eigen::Index i = 0; i < k; ++i) {
        F.col(i) = df_[i];
        X.col(i) = dx_[i];
      }
      const Eigen::VectorXd w = F.colPivHouseholderQr().solve(f);
      if (w.allFinite()) out -= (X + F) * w;
    }
    return {out.data(), out.data() + n};
  }

 private:
  std::size_t depth_;
  std::deque<Eigen::VectorXd> dx_, df_;
  Eigen::VectorXd last_x_, last_f_;
  bool have_last_ = false;
};

RealField centered(const RealField& u) {
  const std::size_t n = u.size();
  const std::size_t shift = (extremum_index(u) + n - n / 2) % n;
  if (shift == 0) return u;
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = u[(j + shift) % n];
  return RealField(u.grid(), std::move(v));
}

}  // namespace

double SolveConfig::alpha_for(const Params& params) const {
  return alpha.value_or(params.p / (params.p - 1.0));
}

void SolveConfig::validate(const Params& params) const {
  const double a = alpha_for(params);
  const double upper = (params.p + 1.0) / (params.p - 1.0);
  if (!(a > 1.0 && a < upper)) {
    std::ostringstream msg;
    msg << "alpha must lie in (1, " << upper << ") for p = " << params.p << ", got " << a;
    throw precondition_error(msg.str());
  }
  if (!(tol > 0.0)) throw precondition_error("tolerance must be positive");
  if (max_iter <= 0) throw precondition_error("max_iter must be positive");
  if (mixing_depth < 0) throw precondition_error("mixing depth must be nonnegative");
}

PetviashviliStep petviashvili_step(const RealField& phi, const Params& params, double alpha) {
  params.require_existence_regime();
  const auto m = dispersion_symbol(phi.grid(), params);
  StepOutcome out = step_in_fourier(phi, params, alpha, m);
  return {inverse(out.next_hat), out.stabilizer, out.residual};
}

RealField default_initial_guess(const Params& params, const Grid& grid, const InitialGuess& kind) {
  if (const auto* user = std::get_if<UserField>(&kind)) {
    if (!(user->field.grid() == grid)) throw precondition_error("initial field lives on a different grid");
    return user->field.minus_mean();
  }
  if (std::holds_alternative<GaussianPulse>(kind)) {
    const double sigma = grid.length() / 40.0;
    const double s = params.focusing_sign();
    return RealField::sample(grid, [&](double x) { return s * std::exp(-x * x / (sigma * sigma)); }).minus_mean();
  }
  if (std::holds_alternative<TrialProfile>(kind)) {
    const CubicRoots r = cubic_roots(params.beta, params.c, params.gamma);
    return (params.focusing_sign() * trial_function(r.a, r.b, grid)).minus_mean();
  }
  const double c_eff = params.c < 0.0 ? params.c : params.c - params.critical_speed();
  RealField bo = bo_soliton(params.beta, c_eff, grid);
  if (params.focusing_sign() > 0.0) bo = -1.0 * bo;
  return bo.minus_mean();
}

SolveConfig suggested_config(const Params& params, SolveConfig base) {
  if (params.c > 0.0) {
    base.init = TrialProfile{};
    base.mixing_start = 1e300;
  } else {
    base.init = BOProfile{};
    base.mixing_start = 1e-2;
  }
  return base;
}

SolitaryWave solve(const Params& params, const Grid& grid, const SolveConfig& config) {
  params.require_existence_regime();
  if (const auto verdict = nonexistence(params); verdict.excluded()) throw precondition_error(verdict.describe());
  if (params.kind == Nonlinearity::odd_plain) {
    // I >= (c_* - c) int phi^2 > 0 in this regime, while K = -int |phi|^{p+1} < 0.
    throw precondition_error(
        "no solitary wave for f(u) = |u|^{p-1}u with beta > 0, gamma > 0, c < c_*: I = K needs K > 0, "
        "but K = -int |u|^{p+1} < 0");
  }
  config.validate(params);
  const double alpha = config.alpha_for(params);
  const auto m = dispersion_symbol(grid, params);

  RealField phi = default_initial_guess(params, grid, config.init);
  const std::size_t center = extremum_index(phi);
  if (config.enforce_symmetry) phi = symmetrize(phi, center);
  std::vector<double> m_history, residuals;
  AndersonMixer mixer(static_cast<std::size_t>(config.mixing_depth));
  std::optional<RealField> fallback;  // last unmixed image, used if a mixed iterate is degenerate
  for (int it = 0; it < config.max_iter; ++it) {
    std::optional<StepOutcome> out;
    try {
      out.emplace(step_in_fourier(phi, params, alpha, m));
    } catch (const degenerate_iterate&) {
      if (!fallback) throw;
      phi = *fallback;
      fallback.reset();
      mixer.reset();
      continue;
    }
    m_history.push_back(out->stabilizer);
    residuals.push_back(out->residual);
    if (!std::isfinite(out->residual)) break;
    if (out->residual <= config.tol) {
      if (config.enforce_symmetry) phi = centered(phi);
      SolitaryWave wave{phi, psi_from_phi(phi, params), params, it, out->residual,
                        std::move(m_history), std::move(residuals), functionals(phi, params)};
      return wave;
    }
    RealField next = inverse(out->next_hat);
    if (config.enforce_symmetry) next = symmetrize(next, center);
    if (config.mixing_depth > 0 && out->residual <= config.mixing_start) {
      phi = RealField(grid, mixer.next(phi.values(), next.values()));
      fallback = std::move(next);
    } else {
      phi = std::move(next);
    }
  }
  std::ostringstream msg;
  msg << "no convergence after " << residuals.size() << " iterations at " << describe(params)
      << ", last residual " << (residuals.empty() ? 0.0 : residuals.back());
  throw convergence_error(msg.str(), std::move(residuals));
}

std::size_t extremum_index(const RealField& u) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < u.size(); ++j)
    if (std::abs(u[j]) > std::abs(u[best])) best = j;
  return best;
}

RealField symmetrize(const RealField& u, std::size_t center) {
  const std::size_t n = u.size();
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = 0.5 * (u[j] + u[(2 * center + n - j) % n]);
  return RealField(u.grid(), std::move(v));
}

int sign_changes_right_half(const RealField& phi, double floor) {
  const double cut = floor * phi.max_abs();
  auto x = phi.grid().points();
  int changes = 0;
  double last = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (x[j] < 0.0 || std::abs(phi[j]) <= cut) continue;
    if (last != 0.0 && (phi[j] > 0.0) != (last > 0.0)) ++changes;
    last = phi[j];
  }
  return changes;
}

}  // namespace rgbo
