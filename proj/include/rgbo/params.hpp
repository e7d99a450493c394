#pragma once

#include <string>
#include <string_view>

namespace rgbo {

// Nonlinearity families. The homogeneity degree lives in Params::p.
enum class Nonlinearity {
  quadratic,          // f(u) = u^2
  even,               // f(u) = |u|^p
  odd_focusing_sign,  // f(u) = -|u|^{p-1} u
  odd_plain,          // f(u) = |u|^{p-1} u
};

std::string_view to_string(Nonlinearity kind);

// Accepts the CLI spellings: quadratic, even, odd, odd-plain.
Nonlinearity parse_nonlinearity(std::string_view name);

// Critical speed 3 (beta^2 gamma / 4)^{1/3}; solitary waves exist for c below it.
double c_star(double beta, double gamma);

struct Params {
  double beta = 2.0;
  double c = -1.0;
  double gamma = 1.0;
  double p = 2.0;
  Nonlinearity kind = Nonlinearity::quadratic;

  // Validates p > 1 and p == 2 for the quadratic kind.
  static Params make(double beta, double c, double gamma, double p, Nonlinearity kind);

  // beta > 0, gamma > 0 and c < c_*(beta, gamma).
  bool in_existence_regime() const;

  // Throws precondition_error naming the first violated hypothesis.
  void require_existence_regime() const;

  double critical_speed() const { return c_star(beta, gamma); }

  // Sign of the profile's dominant trough/crest for which K(u) > 0 is reachable.
  // No sign works for odd_plain (K < 0 always); + is used there.
  double focusing_sign() const { return kind == Nonlinearity::odd_plain ? 1.0 : -1.0; }

  // Same family at a different point of the (beta, c, gamma) space.
  Params with(double new_beta, double new_c, double new_gamma) const;
};

std::string describe(const Params& params);

}  // namespace rgbo
