#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cramerdepth {

// Extended-real conventions: +inf is a deliberate sentinel (rate function outside the
// support, omega of a zero-depth point), never the result of a floating overflow.
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline bool finite(double x) { return std::isfinite(x); }

// exp(-v) with the sentinel mapped to exact zero.
inline double exp_neg(double v) {
  if (v == kInf) return 0.0;
  return std::exp(-v);
}

inline double sq(double x) { return x * x; }

// log(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = a > b ? a : b;
  return m + std::log1p(std::exp(-(std::fabs(a - b))));
}

// 17 significant digits round-trips doubles exactly; '.' decimal separator always
// (snprintf with the C locale semantics of %g).
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

// Wilson score interval for a binomial proportion (k successes out of n);
// z is the normal quantile of the confidence level. Behaves sanely at
// k = 0 and k = n, unlike the Wald interval.
struct WilsonCI {
  double center;
  double halfwidth;
};
inline WilsonCI wilson_ci(double k, double n, double z) {
  double p = (n > 0.0) ? k / n : 0.0;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double hw = z * std::sqrt(std::max(0.0, p * (1.0 - p) / n + z2 / (4.0 * n * n))) / denom;
  return {center, hw};
}

// Worker cap: CRAMER_DEPTH_THREADS env var, else hardware concurrency.
unsigned worker_count();

// Deterministic parallel map-reduce shape: body(i) must not depend on execution
// order; results land in caller-owned slots indexed by i, so totals match a
// serial run bit-for-bit regardless of the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cramerdepth
