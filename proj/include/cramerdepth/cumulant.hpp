#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cramerdepth/dist.hpp"
#include "cramerdepth/util.hpp"

namespace cramerdepth {

// Cumulant generating function Lambda(t) = ln E exp(t Y) of a 1-D law Y:
// either a scalar distribution or the first coordinate of a rotationally
// invariant one. Exposes the derivatives the conjugation needs, the open
// t-domain, the range of Lambda' (essential support of Y), and boundary atom
// masses so the conjugate can be finished off at the support endpoints.
class CumulantFn {
 public:
  static CumulantFn from_scalar(const ScalarDistribution& d);
  // first coordinate of the uniform law on radius * S^{n-1}
  static CumulantFn sphere_marginal(int n, double radius = 1.0);
  static CumulantFn from_radial(const RadialDistribution& d);
  // dispatch on the variant; ProductDistribution has no single 1-D marginal
  // and is rejected here (the product handles build one CumulantFn per factor)
  static CumulantFn from_distribution(const Distribution& d);

  double value(double t) const;   // +inf outside the closure of the domain
  double deriv(double t) const;   // Lambda'
  double deriv2(double t) const;  // Lambda''

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  // open range of Lambda' = interior of the convex hull of the support
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  // log point masses at the support endpoints, -inf when absent
  double log_atom_lo() const { return log_atom_lo_; }
  double log_atom_hi() const { return log_atom_hi_; }

  double mean() const { return mean_; }
  double variance() const { return var_; }
  bool discrete() const { return discrete_; }

  // upper tail q(x) = P(Y >= x) of the same 1-D law
  double log_upper_tail(double x) const;
  double upper_tail(double x) const;

  // closed-form tilt t_x with Lambda'(t_x) = x, when the family has one
  bool has_closed_tilt() const;
  double closed_tilt(double x) const;

  const std::string& label() const { return label_; }

 private:
  enum class Kind {
    Affine,        // Gaussian: c1 t + c2 t^2/2
    ClosedScalar,  // per-family closed forms (switch on fam_)
    DiscreteSum,   // exact logsumexp over a stored pmf
    GridClosed,    // exact segment sums over a stored grid density
    BesselS,       // Gamma(a+1) S(a, s t): sphere and beta-profile marginals
    RadialMix,     // ln int f_R(r) exp(Lambda_theta(t r)) dr
    RadialExpCF,   // -(n+1)/2 ln(1 - t^2/(n+1)) at scale s
  };

  CumulantFn() = default;
  double bessel_value(double t) const;
  double bessel_deriv(double t) const;
  double bessel_deriv2(double t) const;
  double mix_value(double t) const;
  void mix_derivs(double t, double* d1, double* d2) const;
  double grid_value(double t) const;
  void grid_derivs(double t, double* d1, double* d2) const;

  Kind kind_ = Kind::Affine;
  ScalarFamily fam_ = ScalarFamily::Gaussian;
  std::string label_;
  double p0_ = 0.0, p1_ = 1.0, p2_ = 0.0;  // family parameters
  double a_ = 0.0;                         // Bessel order
  double tscale_ = 1.0;                    // t multiplier (radius * scale)
  int n_ = 1;
  std::shared_ptr<const ScalarDistribution> sd_;
  std::shared_ptr<const RadialDistribution> rd_;
  double t_lo_ = -kInf, t_hi_ = kInf;
  double x_lo_ = -kInf, x_hi_ = kInf;
  double log_atom_lo_ = -kInf, log_atom_hi_ = -kInf;
  double mean_ = 0.0, var_ = 1.0;
  bool discrete_ = false;
};

}  // namespace cramerdepth
