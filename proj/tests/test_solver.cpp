#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "rgbo/asymptotics.hpp"
#include "rgbo/error.hpp"
#include "rgbo/solver.hpp"

using namespace rgbo;

namespace {

const Params quad(double c, double gamma = 1.0) { return Params::make(2, c, gamma, 2, Nonlinearity::quadratic); }

double rel_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m / b.max_abs();
}

double min_shift_diff(const RealField& a, const RealField& b) {
  const std::size_t n = a.size();
  double best = 1e300;
  for (std::size_t s = 0; s < n; ++s) {
    double m = 0.0;
    for (std::size_t j = 0; j < n && m < best; ++j) m = std::max(m, std::abs(a[(j + s) % n] - b[j]));
    best = std::min(best, m);
  }
  return best / b.max_abs();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Step, StabilizerMatchesDirectSummation) {
  const Params prm = quad(-1);
  const Grid g = Grid::make(100, 512);
  const RealField phi = default_initial_guess(prm, g, BOProfile{});
  const PetviashviliStep step = petviashvili_step(phi, prm, 2.0);

  // Naive DFT of phi and f(phi) and plain sums over all modes.
  const std::size_t n = g.size();
  const double L = g.length(), dx = g.spacing();
  auto x = g.points();
  double num = 0.0, den = 0.0;
  for (long k = -static_cast<long>(n / 2); k < static_cast<long>(n / 2); ++k) {
    if (k == 0) continue;
    const double xi = 2.0 * std::numbers::pi * k / L;
    std::complex<double> P = 0.0, Fh = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::complex<double> e = std::polar(dx, -xi * x[j]);
      P += phi[j] * e;
      Fh += phi[j] * phi[j] * e;
    }
    const std::complex<double> psi = P / (-xi * xi);
    const double m = 2.0 * std::abs(xi) * xi * xi + xi * xi + 1.0;
    num += m * std::norm(psi);
    den += (std::conj(psi) * Fh).real();
  }
  EXPECT_NEAR(step.stabilizer, num / den, 1e-12 * std::abs(num / den));
}

TEST(Step, ZeroFieldIsDegenerate) {
  const Grid g = Grid::make(100, 256);
  try {
    petviashvili_step(RealField::zeros(g), quad(-1), 2.0);
    FAIL();
  } catch (const degenerate_iterate& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate iterate"), std::string::npos);
  }
}

TEST(Step, WrongSignWithFractionalAlpha) {
  // A positive pulse for f = |u|^p gives M < 0.
  const Params prm = Params::make(2, -1, 1, 3.5, Nonlinearity::even);
  const Grid g = Grid::make(100, 512);
  const RealField u = RealField::sample(g, [](double x) { return std::exp(-x * x); }).minus_mean();
  try {
    petviashvili_step(u, prm, 1.3);
    FAIL();
  } catch (const degenerate_iterate& e) {
    EXPECT_NE(std::string(e.what()).find("sign-indefinite"), std::string::npos);
  }
}

TEST(Step, OutputHasZeroMean) {
  const Params prm = quad(1);
  const Grid g = Grid::make(100, 512);
  const auto step = petviashvili_step(default_initial_guess(prm, g, GaussianPulse{}), prm, 2.0);
  EXPECT_LE(std::abs(step.phi_next.mean()), 1e-15 * step.phi_next.max_abs());
}

TEST(Step, FixedPointIsPreserved) {
  const Params prm = quad(1);
  const Grid g = Grid::make(400, 8192);
  SolveConfig cfg;
  cfg.tol = 1e-13;
  const SolitaryWave w = solve(prm, g, cfg);
  const auto step = petviashvili_step(w.phi, prm, 2.0);
  EXPECT_NEAR(step.stabilizer, 1.0, 1e-12);
  EXPECT_LE(rel_diff(step.phi_next, w.phi), 1e-11);
}

TEST(InitialGuess, Lorentzian) {
  const Grid g = Grid::make(400, 8192);
  const RealField bo = bo_soliton(2, -3, g);
  EXPECT_DOUBLE_EQ(bo[g.size() / 2], -12.0);
  // Half maximum at x = beta / |c|.
  const double xh = 2.0 / 3.0;
  EXPECT_NEAR(4 * -3.0 * 4 / (4 + 9 * xh * xh), -6.0, 1e-14);
  const RealField shifted = translate(bo, xh);
  EXPECT_NEAR(shifted[g.size() / 2], -6.0, 1e-10);

  const RealField guess = default_initial_guess(quad(-3), g, BOProfile{});
  EXPECT_NEAR(guess[g.size() / 2], -12.0 - bo.mean(), 1e-12);
  EXPECT_LE(std::abs(guess.mean()), 1e-14);
}

TEST(InitialGuess, GaussianZeroMeanAndSign) {
  const Grid g = Grid::make(400, 2048);
  for (auto kind : {Nonlinearity::even, Nonlinearity::odd_plain}) {
    const RealField u = default_initial_guess(Params::make(2, 0, 1, 3, kind), g, GaussianPulse{});
    EXPECT_LE(std::abs(u.mean()), 1e-14);
    const double peak = u[extremum_index(u)];
    EXPECT_EQ(peak > 0, kind == Nonlinearity::odd_plain);
  }
}

TEST(InitialGuess, UserFieldOnOtherGridRejected) {
  const Grid g = Grid::make(400, 2048), h = Grid::make(200, 2048);
  EXPECT_THROW(default_initial_guess(quad(0), g, UserField{RealField::zeros(h)}), precondition_error);
}

TEST(Solve, ConvergedWaveInvariants) {
  const Params prm = quad(2.5);
  const Grid g = Grid::make(400, 8192);
  SolveConfig cfg;
  cfg.tol = 1e-10;
  const SolitaryWave w = solve(prm, g, cfg);
  EXPECT_LE(w.final_residual, 1e-10);
  EXPECT_LE(equation_residual(w.phi, prm), 1e-10);
  EXPECT_LE(std::abs(w.phi.mean()), 1e-13 * w.phi.max_abs());
  EXPECT_NEAR(w.m_history.back(), 1.0, 1e-8);
  EXPECT_LE(w.report.pohozaev.r1, 1e-6);
  EXPECT_LE(w.report.pohozaev.r2, 1e-6);
  EXPECT_LE(w.report.pohozaev.r3, 1e-6);
  EXPECT_LE(w.report.i_k_residual(), 1e-6);
  const double p = prm.p;
  EXPECT_NEAR(w.report.action, (p - 1) / (2 * (p + 1)) * w.report.I, 1e-6 * std::abs(w.report.action));
  // Single negative trough at the center.
  EXPECT_EQ(extremum_index(w.phi), g.size() / 2);
  EXPECT_LT(w.phi[g.size() / 2], 0.0);
  // psi_xx = phi
  EXPECT_LE(rel_diff(derivative(w.psi, 2), w.phi), 1e-10);
}

TEST(Solve, StabilizerSettlesMonotonically) {
  const Grid g = Grid::make(400, 8192);
  for (double c : {-1.0, 1.0, 2.5}) {
    SolveConfig cfg;
    cfg.mixing_depth = 0;
    const SolitaryWave w = solve(quad(c), g, cfg);
    const auto& m = w.m_history;
    ASSERT_GE(m.size(), 11u);
    for (std::size_t i = m.size() - 10; i < m.size(); ++i)
      EXPECT_LE(std::abs(m[i] - 1.0), std::abs(m[i - 1] - 1.0) + 1e-15) << "c = " << c << ", iteration " << i;
  }
}

TEST(Solve, AcceleratedMatchesPlain) {
  const Grid g = Grid::make(400, 8192);
  SolveConfig plain;
  plain.mixing_depth = 0;
  for (double c : {-1.0, 2.0}) {
    const SolitaryWave a = solve(quad(c), g, plain);
    const SolitaryWave b = solve(quad(c), g, suggested_config(quad(c)));
    EXPECT_LE(rel_diff(b.phi, a.phi), 1e-10);
  }
}

TEST(Solve, SpeedAboveCriticalRejected) {
  const Grid g = Grid::make(400, 1024);
  try {
    solve(quad(4), g);
    FAIL();
  } catch (const precondition_error& e) {
    EXPECT_NE(std::string(e.what()).find("c must be below c_* = 3"), std::string::npos);
  }
}

TEST(Solve, NonexistenceRegimeRejected) {
  const Grid g = Grid::make(400, 1024);
  EXPECT_THROW(solve(Params::make(-1, 0, 1, 2, Nonlinearity::quadratic), g), precondition_error);
}

TEST(Solve, AlphaOutsideWindowRejected) {
  const Grid g = Grid::make(400, 1024);
  SolveConfig cfg;
  cfg.alpha = 3.5;
  EXPECT_THROW(solve(quad(0), g, cfg), precondition_error);
  cfg.alpha = 1.0;
  EXPECT_THROW(solve(quad(0), g, cfg), precondition_error);
}

TEST(Solve, NonConvergenceCarriesHistory) {
  const Grid g = Grid::make(400, 2048);
  SolveConfig cfg;
  cfg.max_iter = 3;
  try {
    solve(quad(0), g, cfg);
    FAIL();
  } catch (const convergence_error& e) {
    EXPECT_EQ(e.residual_history().size(), 3u);
  }
}

TEST(Solve, TranslationEquivariance) {
  const Params prm = quad(1);
  const Grid g = Grid::make(400, 8192);
  SolveConfig cfg;
  cfg.tol = 1e-12;
  const SolitaryWave a = solve(prm, g, cfg);
  const RealField start = translate(default_initial_guess(prm, g, BOProfile{}), 7.31);
  cfg.init = UserField{start};
  const SolitaryWave b = solve(prm, g, cfg);
  EXPECT_LE(min_shift_diff(b.phi, a.phi), 10 * cfg.tol);
}

TEST(Solve, GridRefinement) {
  const Params prm = quad(1);
  SolveConfig cfg;
  cfg.tol = 1e-12;
  const SolitaryWave a = solve(prm, Grid::make(400, 8192), cfg);
  const SolitaryWave b = solve(prm, Grid::make(400, 16384), cfg);
  EXPECT_LE(rel(b.report.energy, a.report.energy), 1e-8);
  EXPECT_LE(rel(b.report.momentum, a.report.momentum), 1e-8);
  EXPECT_LE(rel(b.report.I, a.report.I), 1e-8);
  EXPECT_LE(rel(b.report.K, a.report.K), 1e-8);
}

TEST(Solve, DomainEnlargement) {
  const Params prm = quad(1);
  SolveConfig cfg;
  cfg.tol = 1e-12;
  const SolitaryWave a = solve(prm, Grid::make(400, 8192), cfg);
  const SolitaryWave b = solve(prm, Grid::make(800, 16384), cfg);
  EXPECT_LE(rel(b.report.energy, a.report.energy), 1e-4);
  EXPECT_LE(rel(b.report.momentum, a.report.momentum), 1e-4);
  EXPECT_LE(rel(b.report.I, a.report.I), 1e-4);
  EXPECT_LE(rel(b.report.K, a.report.K), 1e-4);
}

TEST(Solve, AlphaWindowEdges) {
  const Params prm = quad(1);
  const Grid g = Grid::make(400, 8192);
  SolveConfig cfg;
  cfg.tol = 1e-12;
  const SolitaryWave ref = solve(prm, g, cfg);
  for (double alpha : {1.01, std::min(1.99, 3.0 - 0.01)}) {
    cfg.alpha = alpha;
    const SolitaryWave w = solve(prm, g, cfg);
    EXPECT_LE(rel_diff(w.phi, ref.phi), 10 * cfg.tol) << "alpha = " << alpha;
  }
}

TEST(Solve, OtherFamilies) {
  // Higher powers give narrower waves; the x phi_x identity needs the finer grid.
  const Grid g = Grid::make(400, 16384);
  for (auto [kind, p] : {std::pair{Nonlinearity::even, 3.0}, std::pair{Nonlinearity::odd_focusing_sign, 3.0},
                         std::pair{Nonlinearity::even, 2.4}, std::pair{Nonlinearity::odd_focusing_sign, 2.6}}) {
    const Params prm = Params::make(2, -1, 1, p, kind);
    const SolitaryWave w = solve(prm, g, suggested_config(prm));
    EXPECT_LE(w.report.i_k_residual(), 1e-6) << to_string(kind);
    EXPECT_LE(std::max({w.report.pohozaev.r1, w.report.pohozaev.r2, w.report.pohozaev.r3}), 1e-6);
    EXPECT_LT(w.phi[extremum_index(w.phi)], 0.0);
  }
}

TEST(Solve, PlainOddFamilyHasNoWave) {
  const Grid g = Grid::make(400, 2048);
  EXPECT_THROW(solve(Params::make(2, -1, 1, 3, Nonlinearity::odd_plain), g), precondition_error);
}

TEST(Solve, WeakRotationApproachesLimitWave) {
  const Grid g = Grid::make(400, 8192);
  SolveConfig cfg;
  cfg.tol = 1e-10;
  cfg.mixing_start = 1e-2;
  const SolitaryWave w = solve(quad(-3, 1e-5), g, cfg);
  const RealField ref = limit_soliton(2, -3, g).minus_mean();
  const RealField err = align_to(w.phi, ref).aligned - ref;
  EXPECT_LE(std::sqrt(integrate_product(err, err) / integrate_product(ref, ref)), 0.05);
}

TEST(Helpers, SymmetrizeAndSignChanges) {
  const Grid g = Grid::make(100, 1024);
  const RealField u = RealField::sample(g, [](double x) { return std::exp(-0.05 * x * x) * std::cos(x); });
  const RealField s = symmetrize(u, g.size() / 2);
  EXPECT_LE(rel_diff(s, u), 1e-14);
  // cos changes sign at x = pi/2 + k pi; the envelope floor cuts the far tail.
  EXPECT_GT(sign_changes_right_half(u), 5);
  EXPECT_EQ(sign_changes_right_half(RealField::sample(g, [](double x) { return -std::exp(-x * x); })), 0);
}
