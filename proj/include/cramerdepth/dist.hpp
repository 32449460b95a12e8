#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cramerdepth/rng.hpp"

namespace cramerdepth {

enum class ScalarFamily {
  Uniform,
  Gaussian,
  Laplace,
  Exponential,
  Gamma,
  TwoExpMixtureTail,
  GridDensity,
  Poisson,
  Geometric,
  Binomial,
  DiscreteLogConcave,
};

// One-dimensional law. Continuous families carry densities; discrete families
// a materialized pmf over an integer range (Poisson/geometric tails truncated
// below 1e-20 relative mass, far below every tolerance used downstream).
class ScalarDistribution {
 public:
  static ScalarDistribution uniform(double a, double b);
  static ScalarDistribution gaussian(double mean, double sd);
  static ScalarDistribution laplace(double scale);
  static ScalarDistribution exponential(double rate);
  static ScalarDistribution gamma(double alpha);
  static ScalarDistribution two_exp_mixture_tail(double p, double l1, double l2);
  // Piecewise-linear log-density on a strictly increasing grid; normalized at
  // construction (segment integrals are exact for exp-linear pieces).
  static ScalarDistribution grid_density(std::vector<double> xs,
                                         std::vector<double> log_density);
  static ScalarDistribution poisson(double lambda);
  static ScalarDistribution geometric(double p);
  static ScalarDistribution binomial(int m, double p);
  // pmf over {k0, k0+1, ...}; validated log-concave:
  // p_k^2 >= p_{k-1} p_{k+1} - 1e-12.
  static ScalarDistribution discrete_log_concave(long k0, std::vector<double> pmf);

  ScalarFamily family() const { return family_; }
  const std::string& label() const { return label_; }
  bool discrete() const;
  bool log_concave() const;

  double mean() const;
  double variance() const;
  double support_lo() const;
  double support_hi() const;

  double cdf(double x) const;         // P(X <= x)
  double upper_tail(double x) const;  // P(X >= x), includes any atom at x
  double log_upper_tail(double x) const;
  double log_cdf(double x) const;
  double quantile(double u) const;    // generalized inverse of the cdf
  double sample(SeedStream& rng) const;
  double log_density(double x) const;  // log pmf at lattice points if discrete

  // parameter access (families use the slots they need)
  double p0() const { return p0_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }
  long k0() const { return k0_; }
  const std::vector<double>& grid_x() const { return gx_; }
  const std::vector<double>& grid_logf() const { return glf_; }
  const std::vector<double>& pmf() const { return pmf_; }

 private:
  ScalarDistribution() = default;
  void finalize_discrete();
  void finalize_grid();

  ScalarFamily family_ = ScalarFamily::Gaussian;
  std::string label_;
  double p0_ = 0.0, p1_ = 1.0, p2_ = 0.0;
  long k0_ = 0;
  std::vector<double> gx_, glf_;        // grid density
  std::vector<double> gseg_cdf_;        // cumulative mass at grid nodes
  std::vector<double> pmf_;             // discrete
  std::vector<double> cdf_vals_, tail_vals_;
  double mean_ = 0.0, var_ = 1.0;
  bool log_concave_ = true;
};

enum class RadialFamily {
  Gaussian,    // standard N(0, I_n)
  RadialExp,   // density c_n e^{-sqrt(n+1)|x|}, isotropic as-is
  Beta,        // c (1-|x|^2)^beta on the unit ball (times an isotropizing scale)
  SphereScaled,  // uniform on the sphere of radius r
  PowerExp,    // c e^{-(|x|/s)^p}
  RadialGrid,  // piecewise-linear log-profile on a radius grid
};

// Rotationally invariant law on R^n, represented by its radial profile.
// `scale` dilates the base profile: f(x) = scale^{-n} f_base(x/scale).
class RadialDistribution {
 public:
  static RadialDistribution gaussian(int n);
  static RadialDistribution radial_exp(int n);
  static RadialDistribution beta(int n, double beta);
  static RadialDistribution sphere_scaled(int n, double r);
  static RadialDistribution power_exp(int n, double p);
  static RadialDistribution radial_grid(int n, std::vector<double> rs,
                                        std::vector<double> log_profile);

  int dim() const { return n_; }
  RadialFamily family() const { return family_; }
  const std::string& label() const { return label_; }
  double scale() const { return scale_; }
  double param() const { return param_; }

  // class tags: subset of {"log-concave","LC_conc","LC_conv"}
  const std::vector<std::string>& class_tags() const { return tags_; }
  bool has_tag(const std::string& t) const;

  double support_radius() const;  // +inf if unbounded
  double e_r2() const;
  RadialDistribution isotropized() const;  // rescaled so E|X|^2 = n

  double log_profile(double r) const;     // log f at |x| = r (normalized density)
  double radial_density(double r) const;  // density of R = |X|
  double log_radial_density(double r) const;
  double radial_cdf(double r) const;
  double radius_quantile(double u) const;  // inverse of radial_cdf, u in [0,1]
  double sample_radius(SeedStream& rng) const;
  std::vector<double> sample_point(SeedStream& rng) const;

  // marginal of <X, e_1>
  double marginal_density(double s) const;
  double marginal_upper_tail(double s) const;
  double log_marginal_upper_tail(double s) const;

 private:
  RadialDistribution() = default;
  void build_radius_spline() const;  // lazy 2048-node inverse-cdf table
  double log_profile_raw(double r) const;  // unscaled normalized profile
  double radial_density_base(double r) const;
  double log_radial_density_base(double r) const;

  int n_ = 1;
  RadialFamily family_ = RadialFamily::Gaussian;
  std::string label_;
  double param_ = 0.0;  // beta / r / p per family
  double scale_ = 1.0;
  std::vector<std::string> tags_;
  std::vector<double> grs_, glp_;  // radial grid profile
  // sampling table (monotone cdf spline nodes), built on first use
  mutable std::shared_ptr<std::vector<double>> tab_r_, tab_cdf_;
};

// Product of independent 1-D factors.
class ProductDistribution {
 public:
  explicit ProductDistribution(std::vector<ScalarDistribution> factors);
  int dim() const { return static_cast<int>(factors_.size()); }
  const std::vector<ScalarDistribution>& factors() const { return factors_; }
  std::vector<double> sample_point(SeedStream& rng) const;

 private:
  std::vector<ScalarDistribution> factors_;
};

// A handle any module can accept.
using Distribution = std::variant<ScalarDistribution, RadialDistribution, ProductDistribution>;

int dist_dim(const Distribution& d);
std::string dist_label(const Distribution& d);
std::vector<double> dist_sample_point(const Distribution& d, SeedStream& rng);

// P(theta_1 >= u) for theta uniform on S^{n-1} (n >= 1).
double sphere_upper_tail(int n, double u);
double log_sphere_upper_tail(int n, double u);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace cramerdepth
