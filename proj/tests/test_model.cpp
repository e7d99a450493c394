#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rgbo/asymptotics.hpp"
#include "rgbo/error.hpp"
#include "rgbo/model.hpp"
#include "rgbo/solver.hpp"

using namespace rgbo;

namespace {

RealField random_smooth(const Grid& g, unsigned seed, int modes = 30) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<double> amp(2 * modes);
  for (auto& a : amp) a = ud(rng);
  return RealField::sample(g, [&](double x) {
    double s = 0.0;
    for (int k = 1; k <= modes; ++k) {
      const double w = 2.0 * std::numbers::pi * k / g.length();
      s += amp[2 * k - 2] * std::cos(w * x) + amp[2 * k - 1] * std::sin(w * x);
    }
    return s;
  });
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_THROW(Params::make(2, 0, 1, 1.0, Nonlinearity::even), precondition_error);
  EXPECT_THROW(Params::make(2, 0, 1, 3.0, Nonlinearity::quadratic), precondition_error);
  EXPECT_TRUE(Params::make(2, 2.9, 1, 2, Nonlinearity::quadratic).in_existence_regime());
  EXPECT_FALSE(Params::make(2, 3.0, 1, 2, Nonlinearity::quadratic).in_existence_regime());
  EXPECT_FALSE(Params::make(-2, 0, 1, 2, Nonlinearity::quadratic).in_existence_regime());
  EXPECT_EQ(parse_nonlinearity("odd"), Nonlinearity::odd_focusing_sign);
  EXPECT_EQ(parse_nonlinearity("odd-plain"), Nonlinearity::odd_plain);
  EXPECT_THROW(parse_nonlinearity("cubic"), precondition_error);
}

TEST(Nonlinearity, PointValues) {
  const Params q = Params::make(2, 0, 1, 2, Nonlinearity::quadratic);
  EXPECT_DOUBLE_EQ(nonlinearity(2.0, q), 4.0);
  EXPECT_DOUBLE_EQ(nonlinearity_potential(2.0, q), 8.0 / 3.0);

  const Params o = Params::make(2, 0, 1, 3, Nonlinearity::odd_focusing_sign);
  EXPECT_DOUBLE_EQ(nonlinearity(-2.0, o), 8.0);
  EXPECT_DOUBLE_EQ(nonlinearity_potential(-2.0, o), -4.0);

  const Params e = Params::make(2, 0, 1, 2.5, Nonlinearity::even);
  EXPECT_EQ(nonlinearity(0.0, e), 0.0);
  EXPECT_EQ(nonlinearity_potential(0.0, e), 0.0);

  const Params op = Params::make(2, 0, 1, 3, Nonlinearity::odd_plain);
  EXPECT_DOUBLE_EQ(nonlinearity(-2.0, op), -8.0);
  EXPECT_DOUBLE_EQ(nonlinearity_potential(-2.0, op), 4.0);
}

TEST(Nonlinearity, PotentialDerivativeAndEulerIdentity) {
  // F' = f, and u f'(u) = p f(u) for the p-homogeneous families.
  for (auto kind : {Nonlinearity::even, Nonlinearity::odd_focusing_sign, Nonlinearity::odd_plain}) {
    const Params prm = Params::make(2, 0, 1, 2.7, kind);
    for (double u : {-1.7, -0.3, 0.4, 2.2}) {
      const double h = 1e-5;
      const double dF = (nonlinearity_potential(u + h, prm) - nonlinearity_potential(u - h, prm)) / (2 * h);
      EXPECT_NEAR(dF, nonlinearity(u, prm), 1e-8);
      const double df = (nonlinearity(u + h, prm) - nonlinearity(u - h, prm)) / (2 * h);
      EXPECT_NEAR(u * df, prm.p * nonlinearity(u, prm), 1e-7);
    }
  }
}

TEST(Functionals, ZeroField) {
  const Grid g = Grid::make(50, 128);
  const FunctionalReport r = functionals(RealField::zeros(g), Params::make(2, -1, 1, 2, Nonlinearity::quadratic));
  EXPECT_EQ(r.energy, 0.0);
  EXPECT_EQ(r.momentum, 0.0);
  EXPECT_EQ(r.I, 0.0);
  EXPECT_EQ(r.K, 0.0);
  EXPECT_EQ(r.action, 0.0);
  EXPECT_TRUE(r.pohozaev.degenerate);
  EXPECT_EQ(r.pohozaev.r1, 0.0);
}

TEST(Functionals, AlgebraicRelations) {
  const Grid g = Grid::make(60, 512);
  const RealField u = random_smooth(g, 4);
  for (auto kind : {Nonlinearity::quadratic, Nonlinearity::even, Nonlinearity::odd_focusing_sign}) {
    const Params prm = Params::make(2, 0.7, 1.3, kind == Nonlinearity::quadratic ? 2.0 : 3.3, kind);
    const FunctionalReport r = functionals(u, prm);
    EXPECT_DOUBLE_EQ(r.P, r.I - r.K);
    EXPECT_NEAR(r.action, r.energy - prm.c * r.momentum, 1e-12 * std::abs(r.energy));
    const auto& q = r.integrals;
    EXPECT_NEAR(r.I, prm.beta * q.half_derivative_sq - prm.c * q.l2_sq + prm.gamma * q.antiderivative_sq,
                1e-12 * std::abs(r.I));
    EXPECT_NEAR(r.K, -(prm.p + 1) * q.potential, 1e-12 * std::abs(r.K));
  }
}

TEST(Functionals, Homogeneity) {
  const Grid g = Grid::make(60, 512);
  const RealField u = random_smooth(g, 8);
  const Params prm = Params::make(2, -0.5, 1, 3.4, Nonlinearity::even);
  const FunctionalReport r1 = functionals(u, prm);
  const FunctionalReport r2 = functionals(2.0 * u, prm);
  EXPECT_NEAR(r2.I / r1.I, 4.0, 1e-12);
  EXPECT_NEAR(r2.K / r1.K, std::pow(2.0, prm.p + 1), 1e-12);
}

TEST(Functionals, CoercivityOnRandomFields) {
  const Grid g = Grid::make(80, 1024);
  const double beta = 2, gamma = 1, cs = c_star(beta, gamma);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const RealField u = random_smooth(g, 100 + seed, 60);
    for (double c : {-3.0, 0.0, 2.0, 2.99}) {
      const FunctionalReport r = functionals(u, Params::make(beta, c, gamma, 2, Nonlinearity::quadratic));
      EXPECT_GE(r.I, (cs - c) * r.integrals.l2_sq * (1 - 1e-12));
    }
  }
}

TEST(Functionals, BenjaminOnoIdentityWithoutRotation) {
  // The gamma = 0 limit wave satisfies I(phi; beta, c, 0) = K(phi).
  const Grid g = Grid::make(8000, 1 << 18);
  const RealField phi = limit_soliton(2, -3, g);
  Params prm = Params::make(2, -3, 1, 2, Nonlinearity::quadratic);
  prm.gamma = 0.0;
  const FunctionalReport r = functionals(phi, prm, 1e300);
  EXPECT_LE(r.i_k_residual(), 1e-6);
}

TEST(Residual, TrivialFieldRejected) {
  const Grid g = Grid::make(50, 128);
  EXPECT_THROW(equation_residual(RealField::zeros(g), Params::make(2, -1, 1, 2, Nonlinearity::quadratic)),
               precondition_error);
}

TEST(Residual, AboveCriticalSpeedRejected) {
  const Grid g = Grid::make(50, 128);
  const RealField u = random_smooth(g, 2);
  EXPECT_THROW(equation_residual(u, Params::make(2, 3.5, 1, 2, Nonlinearity::quadratic)), precondition_error);
}

TEST(Pohozaev, ZeroFieldIsDegenerate) {
  const Grid g = Grid::make(50, 128);
  const auto r = pohozaev_residuals(RealField::zeros(g), Params::make(2, -1, 1, 2, Nonlinearity::quadratic));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.r1, 0.0);
  EXPECT_EQ(r.r2, 0.0);
  EXPECT_EQ(r.r3, 0.0);
}

TEST(Pohozaev, ThirdIdentityIsCombinationOfFirstTwo) {
  // Eliminating F: third = (p+1) * second - 2 * first, for any field.
  const Grid g = Grid::make(60, 512);
  const RealField u = random_smooth(g, 17);
  const Params prm = Params::make(2, 0.5, 1, 2.5, Nonlinearity::even);
  const QuadraticIntegrals q = quadratic_integrals(u, prm);
  const double s1 = prm.beta * q.half_derivative_sq - prm.c * q.l2_sq + prm.gamma * q.antiderivative_sq +
                    (prm.p + 1) * q.potential;
  const double s2 = -prm.c * q.l2_sq + 3 * prm.gamma * q.antiderivative_sq + 2 * q.potential;
  const double s3 = -2 * prm.beta * q.half_derivative_sq - (prm.p - 1) * prm.c * q.l2_sq +
                    (3 * prm.p + 1) * prm.gamma * q.antiderivative_sq;
  EXPECT_NEAR(s3, (prm.p + 1) * s2 - 2 * s1, 1e-10 * std::abs(s3));
}

TEST(Nonexistence, Cases) {
  EXPECT_EQ(nonexistence(Params::make(-1, 0, 1, 2, Nonlinearity::quadratic)).which, NonexistenceCase::i);
  for (auto kind : {Nonlinearity::quadratic, Nonlinearity::even, Nonlinearity::odd_focusing_sign,
                    Nonlinearity::odd_plain})
    EXPECT_FALSE(nonexistence(Params::make(2, -3, 1, kind == Nonlinearity::quadratic ? 2 : 3, kind)).excluded());
  // c large enough that case (i) does not fire first.
  EXPECT_EQ(nonexistence(Params::make(-2, 10, 1, 3, Nonlinearity::odd_focusing_sign)).which, NonexistenceCase::iv);
  EXPECT_EQ(nonexistence(Params::make(2, -10, -1, 3, Nonlinearity::odd_plain)).which, NonexistenceCase::iii);
  EXPECT_EQ(nonexistence(Params::make(2, 10, -1, 2, Nonlinearity::quadratic)).which, NonexistenceCase::ii);
  EXPECT_NE(nonexistence(Params::make(-1, 0, 1, 2, Nonlinearity::quadratic)).describe().find("(i)"),
            std::string::npos);
}

TEST(Instability, Predicates) {
  EXPECT_EQ(instability_predicate(Params::make(2, 0, 1, 6, Nonlinearity::even)), InstabilityVerdict::unstable_by_speed);
  EXPECT_EQ(instability_predicate(Params::make(2, -3, 1, 4, Nonlinearity::even)),
            InstabilityVerdict::unstable_small_gamma);
  for (double c : {-3.0, 0.0, 2.9})
    EXPECT_EQ(instability_predicate(Params::make(2, c, 1, 2, Nonlinearity::quadratic)),
              InstabilityVerdict::inconclusive);
}
