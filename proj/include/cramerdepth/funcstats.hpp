#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cramerdepth/dist.hpp"

namespace cramerdepth {

enum class StatMethodKind { Quadrature, MonteCarlo };

struct StatMethod {
  StatMethodKind kind = StatMethodKind::Quadrature;
  long samples = 200000;
  std::uint64_t seed = 1;
};

inline StatMethod quadrature_method() { return {}; }
inline StatMethod monte_carlo_method(long samples = 200000, std::uint64_t seed = 1) {
  return {StatMethodKind::MonteCarlo, samples, seed};
}

// Moment summary of the rate function L = Lambda*(X) and of the depth
// exponent W = omega(X) = -ln q(X) under one law.
//
//   beta_param = Var(L) / (E L)^2        tau_param = Var(W) / (E W)^2
//
// The se_* fields are standard errors under MonteCarlo and propagated
// quadrature error estimates otherwise. Product handles carry NaN in the
// omega/tau slots: the half-space depth of a product law has no 1-D
// reduction, while the Lambda* fields split exactly over the factors.
struct StatReport {
  std::string label;
  StatMethodKind method = StatMethodKind::Quadrature;
  long samples = 0;

  double e_cramer = 0.0;
  double var_cramer = 0.0;
  double exp_neg_cramer = 0.0;
  double e_omega = 0.0;
  double var_omega = 0.0;
  double beta_param = 0.0;
  double tau_param = 0.0;

  double se_e_cramer = 0.0;
  double se_var_cramer = 0.0;
  double se_exp_neg_cramer = 0.0;
  double se_e_omega = 0.0;
  double se_var_omega = 0.0;
  double se_beta_param = 0.0;
  double se_tau_param = 0.0;

  std::string note;
};

// Quadrature path: 1-D (continuous integrated in quantile space, discrete
// summed over the pmf) and rotationally invariant handles (reduced to the
// radius law against the e_1-marginal's Lambda* and omega). Monte Carlo
// accepts any samplable handle. Throws for laws whose E Lambda* diverges
// (uniform measure on a sphere).
StatReport stat_report(const Distribution& d, const StatMethod& method = {});

// E exp(-Lambda*) of the product of independent 1-D factors.
double separability_product(const std::vector<ScalarDistribution>& factors);

// Leading digamma/trigamma terms of E omega and E omega^2 for the beta
// family on the unit ball in R^n with exponent beta > -1.
struct BetaDigamma {
  double e_omega_formula = 0.0;
  double e_omega2_formula = 0.0;
};
BetaDigamma beta_digamma_stats(int n, double beta);

// E q(X)^p for a 1-D law; finite only for p > -1 (throws otherwise).
double depth_moment(const ScalarDistribution& d, double p);

// (1 - eps) * omega + ln(eps / 2^{1-eps}). Lower-bounds Lambda* for
// log-concave laws when eps is in (0,1); callers may evaluate outside that
// range (the eps maximizing the expression exceeds 1 at moderate depth).
double depth_rate_bound(double omega, double eps);

// ln(1 / (2q ln(1/(2q)))) - 1, the eps-optimized form; requires q < 1/(2e).
double depth_rate_bound_opt(double q);

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double margin = 0.0;    // slack of the tightest comparison; fail below -tol
  double location = 0.0;  // grid point attaining the worst margin (NaN if n/a)
  std::string note;
};

struct BatteryConfig {
  int grid_points = 200;
  double tol = 1e-7;
  long mc_samples = 200000;
  std::uint64_t seed = 1;
};

struct BatteryReport {
  std::string label;
  std::vector<CheckResult> checks;  // sorted by name
  bool all_passed() const;          // no Fail entries
  const CheckResult* find(const std::string& name) const;
};

// Inequality battery. Pointwise bounds run on a grid of quantile points;
// expectation bounds compare quadrature StatReports. Checks whose
// preconditions the handle does not meet are reported as Skipped with the
// reason in the note. Deterministic for a fixed config.
BatteryReport verify_battery(const Distribution& d, const BatteryConfig& cfg = {});

// Var(Lambda*) < 4 and E Lambda* > 0.1484 for continuous log-concave 1-D
// laws, with the two integrals behind those constants evaluated directly.
// A circulating closed form for the first integral, 2 + log^2(2) + log(2)
// (= 3.1736), does not match the integral's value 2 + 2 log(2) + log^2(2)
// (= 3.8667); both numbers are recorded and neither reading is chosen.
struct VarExpBounds {
  double var_cramer = 0.0;
  double e_cramer = 0.0;
  double var_bound = 4.0;
  double e_bound = 0.1484;
  double proof_integral_sq = 0.0;     // 2 int_0^{1/2} ln^2(u) du
  double proof_integral_lower = 0.0;  // 2 int_0^{1/(2e)} (ln(1/(2u ln(1/(2u)))) - 1) du
  double quoted_constant = 0.0;       // 2 + log^2(2) + log(2)
  bool pass = false;
  std::string note;
};
VarExpBounds var_exp_bounds_check(const ScalarDistribution& d);

}  // namespace cramerdepth
