#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ideaminer::optimize {

// Objective value at x; writes the gradient into grad.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
  int max_iterations = 200;
  int memory = 8;
  // Stop when |f_prev - f| <= function_tolerance * max(1, |f|).
  double function_tolerance = 1e-12;
  // Stop when ||grad||_inf <= gradient_tolerance.
  double gradient_tolerance = 1e-9;
};

struct LbfgsResult {
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Minimizes `f` from x (updated in place). Every accepted step satisfies the
// Armijo condition, so the returned value never exceeds f(x0).
LbfgsResult minimize(const Objective& f, std::vector<double>& x, const LbfgsOptions& options = {});

}  // namespace ideaminer::optimize
