#pragma once

namespace cramerdepth::specfun {

// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

struct DiGamma {
  double psi;       // digamma
  double trigamma;  // psi'
};
// psi and psi' for x > 0.
DiGamma digamma_trigamma(double x);

// Scaled modified Bessel function (t/2)^{-a} I_a(t) for a > -1, t >= 0,
// finite and positive for all arguments (value 1/Gamma(a+1) at t = 0).
double bessel_i_scaled(double a, double t);
// Its natural log, accumulated in log space: stays finite for t <= 700,
// a <= 500, where the plain value can over- or underflow.
double log_bessel_i_scaled(double a, double t);

// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1].
double reg_inc_beta(double a, double b, double x);
// log I_x(a,b); stable when the result underflows double range.
double log_reg_inc_beta(double a, double b, double x);

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x); plumbing for the
// Gamma-family cdfs. a > 0, x >= 0.
double reg_inc_gamma_lower(double a, double x);
double reg_inc_gamma_upper(double a, double x);
double log_reg_inc_gamma_upper(double a, double x);

// Inverse of the standard normal cdf (Acklam initial guess + Halley polish).
double inverse_normal_cdf(double u);

}  // namespace cramerdepth::specfun
