#pragma once

#include <functional>

namespace cramerdepth {

struct RootOptions {
  double f_tol = 1e-12;     // stop when |g(t) - target| <= f_tol
  double x_tol = 0.0;       // or when the bracket collapses to this width
  int max_iter = 200;
};

// Solve g(t) = target for nondecreasing g on the bracket [lo, hi] with
// g(lo) <= target <= g(hi). Safeguarded secant: every step stays inside the
// current bracket, falling back to bisection when the secant step leaves it
// or stalls.
double solve_increasing(const std::function<double(double)>& g, double target,
                        double lo, double hi, const RootOptions& opt = {});

}  // namespace cramerdepth
