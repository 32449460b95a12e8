#pragma once

#include <cstdint>
#include <vector>

#include "cramerdepth/dist.hpp"

namespace cramerdepth {

// Half-space depth q(x): infimum over closed half-spaces containing x of
// their measure. Exact in 1-D; for rotationally invariant laws the infimum
// is attained at the tangent half-space, so q depends on |x| only.

double depth_1d(const ScalarDistribution& d, double x);
double omega_1d(const ScalarDistribution& d, double x);  // -ln q, log-space tails

double depth_radial(const RadialDistribution& d, const std::vector<double>& x);
double depth_radial_at(const RadialDistribution& d, double r);  // radius form
double omega_radial_at(const RadialDistribution& d, double r);

// q_{mu_{n,beta}}(x) = (1-x^2)^{beta+(n+1)/2} h(x) with the two-sided h
// envelope; `exact` underflows to 0 below e^{-700} while log_exact keeps
// the value for omega.
struct BetaBand {
  double exact;
  double lower;
  double upper;
  double log_exact;
};
BetaBand depth_beta_band(int n, double beta, double x);

// Directional Monte Carlo over M random directions: min over directions of
// the empirical mass of the half-space through x. One-sided (over-)estimate
// of the cloud's combinatorial depth; deterministic for a given seed, with a
// per-direction seed schedule so thread count does not change the result.
double depth_mc(const std::vector<std::vector<double>>& cloud, const std::vector<double>& x,
                int M, std::uint64_t seed);

inline int depth_mc_default_directions(int n) { return 32 * n; }

}  // namespace cramerdepth
