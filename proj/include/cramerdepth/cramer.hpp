#pragma once

#include <vector>

#include "cramerdepth/cumulant.hpp"
#include "cramerdepth/util.hpp"

namespace cramerdepth {

struct ConjResult {
  double value = 0.0;   // Lambda*(x)
  double tilt = 0.0;    // maximizing t_x; NaN when the sup sits at a domain edge
  double second = 0.0;  // (Lambda*)''(x) = 1/Lambda''(t_x); NaN when undefined
  bool interior = false;
};

// Warm start handed between conjugations at nearby x; one per scan/thread.
struct TiltCache {
  double t = kNaN;
};

// Legendre conjugate Lambda*(x) = sup_t (x t - Lambda(t)) of a cumulant,
// with the tail functional omega(x) = -ln P(Y >= x) of the same law.
class Cramer {
 public:
  explicit Cramer(CumulantFn lam) : lam_(std::move(lam)) {}
  const CumulantFn& cumulant() const { return lam_; }

  ConjResult conjugate(double x, TiltCache* cache = nullptr) const;
  double operator()(double x) const { return conjugate(x).value; }
  std::vector<ConjResult> conjugate_grid(const std::vector<double>& xs) const;

  // max_t |t Lambda'(t) - Lambda*(Lambda'(t)) - Lambda(t)| over the given
  // tilts: the conjugate of the conjugate must reproduce Lambda exactly
  double biconjugate_residual(const std::vector<double>& ts) const;

  double omega(double x) const;            // -ln P(Y >= x)
  double condition_ratio(double x) const;  // omega(x) / Lambda*(x), >= 1 in the tail

 private:
  double solve_tilt(double x, const TiltCache* cache) const;
  CumulantFn lam_;
};

}  // namespace cramerdepth
