#include "rgbo/params.hpp"

#include <cmath>
#include <sstream>

#include "rgbo/error.hpp"

namespace rgbo {

std::string_view to_string(Nonlinearity kind) {
  switch (kind) {
    case Nonlinearity::quadratic: return "quadratic";
    case Nonlinearity::even: return "even";
    case Nonlinearity::odd_focusing_sign: return "odd";
    case Nonlinearity::odd_plain: return "odd-plain";
  }
  return "unknown";
}

Nonlinearity parse_nonlinearity(std::string_view name) {
  if (name == "quadratic") return Nonlinearity::quadratic;
  if (name == "even") return Nonlinearity::even;
  if (name == "odd") return Nonlinearity::odd_focusing_sign;
  if (name == "odd-plain") return Nonlinearity::odd_plain;
  throw precondition_error("unknown nonlinearity kind '" + std::string(name) +
                           "' (expected quadratic, even, odd or odd-plain)");
}

double c_star(double beta, double gamma) {
  if (!(beta > 0.0) || !(gamma > 0.0)) {
    std::ostringstream msg;
    msg << "c_* requires beta > 0 and gamma > 0, got beta = " << beta << ", gamma = " << gamma;
    throw precondition_error(msg.str());
  }
  return 3.0 * std::cbrt(beta * beta * gamma / 4.0);
}

Params Params::make(double beta, double c, double gamma, double p, Nonlinearity kind) {
  if (!std::isfinite(beta) || !std::isfinite(c) || !std::isfinite(gamma) || !std::isfinite(p)) {
    throw precondition_error("parameters must be finite");
  }
  if (!(p > 1.0)) {
    std::ostringstream msg;
    msg << "homogeneity degree p must exceed 1, got " << p;
    throw precondition_error(msg.str());
  }
  if (kind == Nonlinearity::quadratic && p != 2.0) {
    std::ostringstream msg;
    msg << "quadratic nonlinearity requires p = 2, got " << p;
    throw precondition_error(msg.str());
  }
  return Params{beta, c, gamma, p, kind};
}

bool Params::in_existence_regime() const {
  return beta > 0.0 && gamma > 0.0 && c < c_star(beta, gamma);
}

void Params::require_existence_regime() const {
  if (!(beta > 0.0)) {
    std::ostringstream msg;
    msg << "beta must be positive, got " << beta;
    throw precondition_error(msg.str());
  }
  if (!(gamma > 0.0)) {
    std::ostringstream msg;
    msg << "gamma must be positive, got " << gamma;
    throw precondition_error(msg.str());
  }
  const double cs = c_star(beta, gamma);
  if (!(c < cs)) {
    std::ostringstream msg;
    msg << "speed above c_*: c must be below c_* = " << cs << ", got c = " << c;
    throw precondition_error(msg.str());
  }
}

Params Params::with(double new_beta, double new_c, double new_gamma) const {
  Params out = *this;
  out.beta = new_beta;
  out.c = new_c;
  out.gamma = new_gamma;
  return out;
}

std::string describe(const Params& params) {
  std::ostringstream out;
  out << "beta=" << params.beta << " c=" << params.c << " gamma=" << params.gamma << " p=" << params.p
      << " kind=" << to_string(params.kind);
  return out.str();
}

}  // namespace rgbo
