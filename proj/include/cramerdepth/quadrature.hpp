#pragma once

#include <functional>

namespace cramerdepth {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  int panels = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 10000;
  int min_panels = 1;  // initial uniform split; raise for features the
                       // 15-point rule would step over on [a,b]
};

// Adaptive Gauss-Kronrod 7/15 on the finite interval [a,b]; worst panel is
// bisected first (priority queue on the local error estimate).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

// log of integral over (a,b) of exp(logf(x)) dx, for integrands with a single
// peak region (everything here is a log-concave weight times a tame factor).
// a, b may be +-inf; peak_hint seeds the climb to the maximum. The integrand is
// rescaled by its running max before exponentiation, so no overflow occurs.
double log_integral(const std::function<double(double)>& logf, double a, double b,
                    double peak_hint, const QuadOptions& opt = {});

// Window [lo,hi] containing the mass of exp(logf), plus the max location/value;
// shared by log_integral and the tilted-moment routines in cumulant.
struct MassWindow {
  double lo, hi;
  double peak_x, peak_log;
};
MassWindow locate_mass(const std::function<double(double)>& logf, double a, double b,
                       double peak_hint);

}  // namespace cramerdepth
