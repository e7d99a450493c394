#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rgbo {

// Violated input contract (bad grid, parameters outside the existence
// regime, non-zero-mean input to an antiderivative, ...).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A fixed-point iterate that cannot be continued: zero denominator in the
// stabilizer, or a negative stabilizer raised to a fractional power.
class degenerate_iterate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residual_history_(std::move(residuals)) {}

  const std::vector<double>& residual_history() const noexcept { return residual_history_; }

 private:
  std::vector<double> residual_history_;
};

}  // namespace rgbo
