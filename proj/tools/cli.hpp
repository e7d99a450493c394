#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rgbo::cli {

enum exit_code : int { ok = 0, usage = 1, no_convergence = 2, identity_violation = 3 };

// Runs one command; files go under --out, progress and verdicts to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// %.17g, with inf/-inf/nan spelled out.
std::string format_number(double v);

}  // namespace rgbo::cli
