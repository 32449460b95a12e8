#include "cramerdepth/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cramerdepth/quadrature.hpp"
#include "cramerdepth/rootfind.hpp"
#include "cramerdepth/specfun.hpp"
#include "cramerdepth/util.hpp"

namespace cramerdepth {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLn2 = 0.69314718055994530941723212145818;

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730950488016887); }
double gaussian_tail(double z) { return 0.5 * std::erfc(z / 1.4142135623730950488016887); }

double log_gaussian_tail(double z) {
  if (z < 30.0) return std::log(gaussian_tail(z));
  // asymptotic: phi(z)/z * (1 - 1/z^2 + 3/z^4 - 15/z^6)
  double z2 = z * z;
  return -0.5 * z2 - std::log(z) - 0.91893853320467274178
         + std::log1p(-1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2));
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarDistribution constructors
// ---------------------------------------------------------------------------

ScalarDistribution ScalarDistribution::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform: requires a < b");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Uniform;
  d.p0_ = a;
  d.p1_ = b;
  d.mean_ = 0.5 * (a + b);
  d.var_ = (b - a) * (b - a) / 12.0;
  d.label_ = "uniform(" + fmt17(a) + "," + fmt17(b) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::gaussian(double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("gaussian: requires sd > 0");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Gaussian;
  d.p0_ = mean;
  d.p1_ = sd;
  d.mean_ = mean;
  d.var_ = sd * sd;
  d.label_ = "gaussian(" + fmt17(mean) + "," + fmt17(sd) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::laplace(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace: requires scale > 0");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Laplace;
  d.p0_ = scale;
  d.mean_ = 0.0;
  d.var_ = 2.0 * scale * scale;
  d.label_ = "laplace(" + fmt17(scale) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: requires rate > 0");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Exponential;
  d.p0_ = rate;
  d.mean_ = 1.0 / rate;
  d.var_ = 1.0 / (rate * rate);
  d.label_ = "exponential(" + fmt17(rate) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::gamma(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gamma: requires alpha > 0");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Gamma;
  d.p0_ = alpha;
  d.mean_ = alpha;
  d.var_ = alpha;
  d.log_concave_ = alpha >= 1.0;
  d.label_ = "gamma(" + fmt17(alpha) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::two_exp_mixture_tail(double p, double l1, double l2) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two_exp_mixture_tail: p in (0,1)");
  if (!(l1 > 0.0 && l2 > l1))
    throw std::invalid_argument("two_exp_mixture_tail: requires 0 < l1 < l2");
  ScalarDistribution d;
  d.family_ = ScalarFamily::TwoExpMixtureTail;
  d.p0_ = p;
  d.p1_ = l1;
  d.p2_ = l2;
  d.mean_ = p / l1 + (1.0 - p) / l2;
  double m2 = 2.0 * (p / (l1 * l1) + (1.0 - p) / (l2 * l2));
  d.var_ = m2 - d.mean_ * d.mean_;
  d.log_concave_ = false;  // mixture of exponentials with distinct rates
  d.label_ = "two_exp_mixture_tail(" + fmt17(p) + "," + fmt17(l1) + "," + fmt17(l2) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::grid_density(std::vector<double> xs,
                                                    std::vector<double> log_density) {
  if (xs.size() < 2 || xs.size() != log_density.size())
    throw std::invalid_argument("grid_density: need matching arrays, size >= 2");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("grid_density: grid must increase");
  ScalarDistribution d;
  d.family_ = ScalarFamily::GridDensity;
  d.gx_ = std::move(xs);
  d.glf_ = std::move(log_density);
  d.finalize_grid();
  d.label_ = "grid_density[" + std::to_string(d.gx_.size()) + "]";
  return d;
}

ScalarDistribution ScalarDistribution::poisson(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson: requires lambda > 0");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Poisson;
  d.p0_ = lambda;
  d.k0_ = 0;
  // Materialize far enough that e^{2k} tilts stay accurate (cross-check grids
  // use |t| <= 2): peak of e^{tk} p_k sits near lambda e^t.
  long kmax = static_cast<long>(lambda * 7.5 + 40.0 * std::sqrt(lambda * 7.5) + 60.0);
  d.pmf_.resize(kmax + 1);
  double ll = std::log(lambda);
  for (long k = 0; k <= kmax; ++k)
    d.pmf_[k] = std::exp(k * ll - lambda - specfun::log_gamma(k + 1.0));
  d.mean_ = lambda;
  d.var_ = lambda;
  d.finalize_discrete();
  d.mean_ = lambda;
  d.var_ = lambda;
  d.label_ = "poisson(" + fmt17(lambda) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("geometric: requires p in (0,1)");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Geometric;
  d.p0_ = p;
  d.k0_ = 0;
  long kmax = static_cast<long>(std::ceil((-60.0) / std::log1p(-p))) + 2;
  d.pmf_.resize(kmax + 1);
  for (long k = 0; k <= kmax; ++k) d.pmf_[k] = std::exp(k * std::log1p(-p)) * p;
  d.finalize_discrete();
  d.mean_ = (1.0 - p) / p;
  d.var_ = (1.0 - p) / (p * p);
  d.label_ = "geometric(" + fmt17(p) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::binomial(int m, double p) {
  if (m < 1 || !(p > 0.0 && p < 1.0)) throw std::invalid_argument("binomial: bad parameters");
  ScalarDistribution d;
  d.family_ = ScalarFamily::Binomial;
  d.p0_ = m;
  d.p1_ = p;
  d.k0_ = 0;
  d.pmf_.resize(m + 1);
  double lp = std::log(p), lq = std::log1p(-p), lgm = specfun::log_gamma(m + 1.0);
  for (int k = 0; k <= m; ++k)
    d.pmf_[k] = std::exp(lgm - specfun::log_gamma(k + 1.0) - specfun::log_gamma(m - k + 1.0)
                         + k * lp + (m - k) * lq);
  d.finalize_discrete();
  d.mean_ = m * p;
  d.var_ = m * p * (1.0 - p);
  d.label_ = "binomial(" + std::to_string(m) + "," + fmt17(p) + ")";
  return d;
}

ScalarDistribution ScalarDistribution::discrete_log_concave(long k0, std::vector<double> pmf) {
  if (pmf.size() < 1) throw std::invalid_argument("discrete_log_concave: empty pmf");
  double s = 0.0;
  for (double v : pmf) {
    if (!(v >= 0.0)) throw std::invalid_argument("discrete_log_concave: negative mass");
    s += v;
  }
  if (!(std::fabs(s - 1.0) <= 1e-9))
    throw std::invalid_argument("discrete_log_concave: pmf must sum to 1 within 1e-9");
  for (std::size_t k = 1; k + 1 < pmf.size(); ++k)
    if (!(pmf[k] * pmf[k] >= pmf[k - 1] * pmf[k + 1] - 1e-12))
      throw std::invalid_argument("discrete_log_concave: log-concavity violated");
  ScalarDistribution d;
  d.family_ = ScalarFamily::DiscreteLogConcave;
  d.k0_ = k0;
  d.pmf_ = std::move(pmf);
  d.finalize_discrete();
  double mu = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < d.pmf_.size(); ++i) {
    double x = static_cast<double>(k0 + static_cast<long>(i));
    mu += d.pmf_[i] * x;
    m2 += d.pmf_[i] * x * x;
  }
  d.mean_ = mu;
  d.var_ = m2 - mu * mu;
  d.label_ = "discrete_log_concave[" + std::to_string(d.pmf_.size()) + "]";
  return d;
}

void ScalarDistribution::finalize_discrete() {
  const std::size_t n = pmf_.size();
  cdf_vals_.resize(n);
  tail_vals_.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += pmf_[i];
    cdf_vals_[i] = std::min(acc, 1.0);
  }
  double tac = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    tac += pmf_[i];
    tail_vals_[i] = std::min(tac, 1.0);
  }
  // log-concavity of the pmf
  log_concave_ = true;
  for (std::size_t k = 1; k + 1 < n; ++k)
    if (!(pmf_[k] * pmf_[k] >= pmf_[k - 1] * pmf_[k + 1] - 1e-12)) log_concave_ = false;
}

void ScalarDistribution::finalize_grid() {
  const std::size_t n = gx_.size();
  // Exact segment masses for exp-linear pieces, then normalize.
  gseg_cdf_.assign(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double dx = gx_[i + 1] - gx_[i], dl = glf_[i + 1] - glf_[i];
    double seg;
    if (std::fabs(dl) < 1e-12)
      seg = dx * std::exp(glf_[i]) * (1.0 + 0.5 * dl);
    else
      seg = dx / dl * (std::exp(glf_[i + 1]) - std::exp(glf_[i]));
    total += seg;
    gseg_cdf_[i + 1] = total;
  }
  if (!(total > 0.0)) throw std::invalid_argument("grid_density: zero mass");
  double lz = std::log(total);
  for (auto& v : glf_) v -= lz;
  for (auto& v : gseg_cdf_) v /= total;
  gseg_cdf_.back() = 1.0;
  // moments by quadrature on the normalized density
  auto f = [this](double x) { return std::exp(log_density(x)); };
  QuadOptions qo;
  qo.abs_tol = 1e-13;
  mean_ = integrate([&](double x) { return x * f(x); }, gx_.front(), gx_.back(), qo).value;
  double m2 = integrate([&](double x) { return x * x * f(x); }, gx_.front(), gx_.back(), qo).value;
  var_ = m2 - mean_ * mean_;
  // log-concave iff slopes of the piecewise-linear log-density are nonincreasing
  log_concave_ = true;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    double s0 = (glf_[i + 1] - glf_[i]) / (gx_[i + 1] - gx_[i]);
    double s1 = (glf_[i + 2] - glf_[i + 1]) / (gx_[i + 2] - gx_[i + 1]);
    if (s1 > s0 + 1e-10) log_concave_ = false;
  }
}

// ---------------------------------------------------------------------------
// ScalarDistribution queries
// ---------------------------------------------------------------------------

bool ScalarDistribution::discrete() const {
  switch (family_) {
    case ScalarFamily::Poisson:
    case ScalarFamily::Geometric:
    case ScalarFamily::Binomial:
    case ScalarFamily::DiscreteLogConcave:
      return true;
    default:
      return false;
  }
}

bool ScalarDistribution::log_concave() const { return log_concave_; }
double ScalarDistribution::mean() const { return mean_; }
double ScalarDistribution::variance() const { return var_; }

double ScalarDistribution::support_lo() const {
  switch (family_) {
    case ScalarFamily::Uniform: return p0_;
    case ScalarFamily::Gaussian: return -kInf;
    case ScalarFamily::Laplace: return -kInf;
    case ScalarFamily::Exponential:
    case ScalarFamily::Gamma:
    case ScalarFamily::TwoExpMixtureTail: return 0.0;
    case ScalarFamily::GridDensity: return gx_.front();
    default: return static_cast<double>(k0_);
  }
}

double ScalarDistribution::support_hi() const {
  switch (family_) {
    case ScalarFamily::Uniform: return p1_;
    case ScalarFamily::GridDensity: return gx_.back();
    case ScalarFamily::Binomial: return p0_;
    case ScalarFamily::DiscreteLogConcave:
      return static_cast<double>(k0_ + static_cast<long>(pmf_.size()) - 1);
    case ScalarFamily::Poisson:
    case ScalarFamily::Geometric:
      return kInf;  // truncated internally, conceptually unbounded
    default: return kInf;
  }
}

double ScalarDistribution::cdf(double x) const {
  switch (family_) {
    case ScalarFamily::Uniform:
      if (x <= p0_) return 0.0;
      if (x >= p1_) return 1.0;
      return (x - p0_) / (p1_ - p0_);
    case ScalarFamily::Gaussian:
      return gaussian_cdf((x - p0_) / p1_);
    case ScalarFamily::Laplace:
      return x < 0.0 ? 0.5 * std::exp(x / p0_) : 1.0 - 0.5 * std::exp(-x / p0_);
    case ScalarFamily::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-p0_ * x);
    case ScalarFamily::Gamma:
      return x <= 0.0 ? 0.0 : specfun::reg_inc_gamma_lower(p0_, x);
    case ScalarFamily::TwoExpMixtureTail:
      if (x <= 0.0) return 0.0;
      return 1.0 - (p0_ * std::exp(-p1_ * x) + (1.0 - p0_) * std::exp(-p2_ * x));
    case ScalarFamily::GridDensity: {
      if (x <= gx_.front()) return 0.0;
      if (x >= gx_.back()) return 1.0;
      auto it = std::upper_bound(gx_.begin(), gx_.end(), x);
      std::size_t i = static_cast<std::size_t>(it - gx_.begin()) - 1;
      double dx = gx_[i + 1] - gx_[i], dl = glf_[i + 1] - glf_[i];
      double u = x - gx_[i];
      double part;
      if (std::fabs(dl) < 1e-12)
        part = u * std::exp(glf_[i]);
      else
        part = dx / dl * (std::exp(glf_[i] + dl * u / dx) - std::exp(glf_[i]));
      return std::min(1.0, gseg_cdf_[i] + part);
    }
    default: {  // discrete
      double kf = std::floor(x - static_cast<double>(k0_));
      if (kf < 0.0) return 0.0;
      std::size_t idx = static_cast<std::size_t>(kf);
      if (idx >= cdf_vals_.size()) return 1.0;
      return cdf_vals_[idx];
    }
  }
}

double ScalarDistribution::upper_tail(double x) const {
  switch (family_) {
    case ScalarFamily::Uniform:
      if (x <= p0_) return 1.0;
      if (x >= p1_) return 0.0;
      return (p1_ - x) / (p1_ - p0_);
    case ScalarFamily::Gaussian:
      return gaussian_tail((x - p0_) / p1_);
    case ScalarFamily::Laplace:
      return x < 0.0 ? 1.0 - 0.5 * std::exp(x / p0_) : 0.5 * std::exp(-x / p0_);
    case ScalarFamily::Exponential:
      return x <= 0.0 ? 1.0 : std::exp(-p0_ * x);
    case ScalarFamily::Gamma:
      return x <= 0.0 ? 1.0 : specfun::reg_inc_gamma_upper(p0_, x);
    case ScalarFamily::TwoExpMixtureTail:
      if (x <= 0.0) return 1.0;
      return p0_ * std::exp(-p1_ * x) + (1.0 - p0_) * std::exp(-p2_ * x);
    case ScalarFamily::GridDensity:
      if (x <= gx_.front()) return 1.0;
      if (x >= gx_.back()) return 0.0;
      return 1.0 - cdf(x);
    default: {  // discrete: P(X >= x) includes the atom at ceil(x)
      double kc = std::ceil(x - static_cast<double>(k0_));
      if (kc < 0.0) return 1.0;
      std::size_t idx = static_cast<std::size_t>(kc);
      if (idx >= tail_vals_.size()) return 0.0;
      return tail_vals_[idx];
    }
  }
}

double ScalarDistribution::log_cdf(double x) const {
  switch (family_) {
    case ScalarFamily::Gaussian:
      return log_gaussian_tail(-(x - p0_) / p1_);
    case ScalarFamily::Laplace:
      if (x < 0.0) return x / p0_ - kLn2;
      return std::log1p(-0.5 * std::exp(-x / p0_));
    case ScalarFamily::Exponential:
      return x <= 0.0 ? -kInf : std::log(-std::expm1(-p0_ * x));
    default: {
      double v = cdf(x);
      return v > 0.0 ? std::log(v) : -kInf;
    }
  }
}

double ScalarDistribution::log_upper_tail(double x) const {
  switch (family_) {
    case ScalarFamily::Gaussian:
      return log_gaussian_tail((x - p0_) / p1_);
    case ScalarFamily::Laplace:
      if (x < 0.0) return std::log1p(-0.5 * std::exp(x / p0_));
      return -x / p0_ - kLn2;
    case ScalarFamily::Exponential:
      return x <= 0.0 ? 0.0 : -p0_ * x;
    case ScalarFamily::Gamma:
      return x <= 0.0 ? 0.0 : specfun::log_reg_inc_gamma_upper(p0_, x);
    case ScalarFamily::TwoExpMixtureTail:
      if (x <= 0.0) return 0.0;
      return log_add(std::log(p0_) - p1_ * x, std::log1p(-p0_) - p2_ * x);
    default: {
      double v = upper_tail(x);
      return v > 0.0 ? std::log(v) : -kInf;
    }
  }
}

double ScalarDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u in [0,1]");
  switch (family_) {
    case ScalarFamily::Uniform:
      return p0_ + u * (p1_ - p0_);
    case ScalarFamily::Gaussian:
      if (u <= 0.0) return -kInf;
      if (u >= 1.0) return kInf;
      return p0_ + p1_ * specfun::inverse_normal_cdf(u);
    case ScalarFamily::Laplace:
      if (u <= 0.0) return -kInf;
      if (u >= 1.0) return kInf;
      return u < 0.5 ? p0_ * std::log(2.0 * u) : -p0_ * std::log(2.0 * (1.0 - u));
    case ScalarFamily::Exponential:
      if (u >= 1.0) return kInf;
      return -std::log1p(-u) / p0_;
    case ScalarFamily::Gamma: {
      if (u <= 0.0) return 0.0;
      if (u >= 1.0) return kInf;
      // Wilson-Hilferty start, then safeguarded Newton on P(a, x).
      double a = p0_;
      double g = specfun::inverse_normal_cdf(u);
      double c = 1.0 - 1.0 / (9.0 * a) + g / (3.0 * std::sqrt(a));
      double x = a * c * c * c;
      if (!(x > 0.0)) x = a * std::exp((std::log(u) + specfun::log_gamma(a + 1.0)) / a);
      double lo = 0.0, hi = kInf;
      for (int it = 0; it < 100; ++it) {
        double F = specfun::reg_inc_gamma_lower(a, x) - u;
        if (F > 0.0) hi = x; else lo = x;
        double lpdf = (a - 1.0) * std::log(x) - x - specfun::log_gamma(a);
        double step = F * std::exp(-lpdf);
        double nx = x - step;
        if (!(nx > lo) || !(nx < hi)) nx = finite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
        // relative termination: deep-left-tail x can sit far below 1
        if (std::fabs(nx - x) <= 1e-14 * std::fabs(x)) { x = nx; break; }
        x = nx;
      }
      return x;
    }
    case ScalarFamily::TwoExpMixtureTail: {
      if (u <= 0.0) return 0.0;
      if (u >= 1.0) return kInf;
      // invert the closed-form tail by bisection in log space
      double target = 1.0 - u;
      double lo = 0.0, hi = 1.0;
      while (upper_tail(hi) > target) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (upper_tail(mid) > target) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    case ScalarFamily::GridDensity: {
      if (u <= 0.0) return gx_.front();
      if (u >= 1.0) return gx_.back();
      auto it = std::upper_bound(gseg_cdf_.begin(), gseg_cdf_.end(), u);
      std::size_t i = static_cast<std::size_t>(it - gseg_cdf_.begin());
      if (i == 0) return gx_.front();
      i -= 1;
      if (i + 1 >= gx_.size()) return gx_.back();
      double rem = u - gseg_cdf_[i];
      double dx = gx_[i + 1] - gx_[i], dl = glf_[i + 1] - glf_[i];
      if (std::fabs(dl) < 1e-12) return gx_[i] + rem / std::exp(glf_[i]);
      // solve dx/dl (e^{l0 + dl u/dx} - e^{l0}) = rem
      double arg = rem * dl / dx * std::exp(-glf_[i]) + 1.0;
      if (!(arg > 0.0)) return gx_[i + 1];
      return gx_[i] + dx / dl * std::log(arg);
    }
    default: {  // discrete
      auto it = std::lower_bound(cdf_vals_.begin(), cdf_vals_.end(), u);
      std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_vals_.begin()),
                                            cdf_vals_.size() - 1);
      return static_cast<double>(k0_ + static_cast<long>(i));
    }
  }
}

double ScalarDistribution::sample(SeedStream& rng) const {
  return quantile(rng.next_uniform());
}

double ScalarDistribution::log_density(double x) const {
  switch (family_) {
    case ScalarFamily::Uniform:
      return (x >= p0_ && x <= p1_) ? -std::log(p1_ - p0_) : -kInf;
    case ScalarFamily::Gaussian: {
      double z = (x - p0_) / p1_;
      return -0.5 * z * z - std::log(p1_) - 0.91893853320467274178;
    }
    case ScalarFamily::Laplace:
      return -std::fabs(x) / p0_ - std::log(2.0 * p0_);
    case ScalarFamily::Exponential:
      return x < 0.0 ? -kInf : std::log(p0_) - p0_ * x;
    case ScalarFamily::Gamma:
      if (x <= 0.0) return -kInf;
      return (p0_ - 1.0) * std::log(x) - x - specfun::log_gamma(p0_);
    case ScalarFamily::TwoExpMixtureTail:
      if (x < 0.0) return -kInf;
      return log_add(std::log(p0_ * p1_) - p1_ * x, std::log((1.0 - p0_) * p2_) - p2_ * x);
    case ScalarFamily::GridDensity: {
      if (x < gx_.front() || x > gx_.back()) return -kInf;
      auto it = std::upper_bound(gx_.begin(), gx_.end(), x);
      std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - gx_.begin()),
                                            gx_.size() - 1);
      if (i == 0) return glf_[0];
      i -= 1;
      double w = (x - gx_[i]) / (gx_[i + 1] - gx_[i]);
      return glf_[i] * (1.0 - w) + glf_[i + 1] * w;
    }
    default: {  // discrete pmf at the lattice point nearest x
      double kf = std::round(x) - static_cast<double>(k0_);
      if (kf < 0.0 || kf >= static_cast<double>(pmf_.size())) return -kInf;
      double v = pmf_[static_cast<std::size_t>(kf)];
      return v > 0.0 ? std::log(v) : -kInf;
    }
  }
}

// ---------------------------------------------------------------------------
// sphere marginal helpers
// ---------------------------------------------------------------------------

double sphere_upper_tail(int n, double u) {
  if (n < 1) throw std::domain_error("sphere_upper_tail: n >= 1");
  if (u <= -1.0) return 1.0;
  if (u > 1.0) return 0.0;
  if (n == 1) return 0.5;  // atoms at +-1; u in (-1, 1] keeps only the + atom
  if (u == 0.0) return 0.5;
  if (u > 0.0) {
    if (u == 1.0) return 0.0;
    return 0.5 * specfun::reg_inc_beta(0.5 * (n - 1), 0.5, 1.0 - u * u);
  }
  return 1.0 - 0.5 * specfun::reg_inc_beta(0.5 * (n - 1), 0.5, 1.0 - u * u);
}

double log_sphere_upper_tail(int n, double u) {
  if (n == 1 || u <= 0.0) {
    double v = sphere_upper_tail(n, u);
    return v > 0.0 ? std::log(v) : -kInf;
  }
  if (u >= 1.0) return -kInf;
  return -kLn2 + specfun::log_reg_inc_beta(0.5 * (n - 1), 0.5, 1.0 - u * u);
}

double unit_ball_volume(int n) {
  return std::exp(0.5 * n * std::log(kPi) - specfun::log_gamma(0.5 * n + 1.0));
}

// ---------------------------------------------------------------------------
// RadialDistribution
// ---------------------------------------------------------------------------

namespace {

void radial_tags(RadialFamily fam, double param, std::vector<std::string>& tags) {
  // LC_conv: x -> f(sqrt(x)) log-convex profile direction; LC_conc: log-concave.
  switch (fam) {
    case RadialFamily::Gaussian:
      tags = {"log-concave", "LC_conc", "LC_conv"};
      break;
    case RadialFamily::RadialExp:
      tags = {"log-concave", "LC_conv"};
      break;
    case RadialFamily::Beta:
      tags = {"log-concave", "LC_conc"};
      break;
    case RadialFamily::SphereScaled:
      tags = {};
      break;
    case RadialFamily::PowerExp:
      tags.clear();
      if (param >= 1.0) tags.push_back("log-concave");
      if (param <= 2.0) tags.push_back("LC_conv");
      if (param >= 2.0) tags.push_back("LC_conc");
      break;
    case RadialFamily::RadialGrid:
      tags = {};  // determined numerically in the factory
      break;
  }
}

}  // namespace

RadialDistribution RadialDistribution::gaussian(int n) {
  if (n < 1) throw std::invalid_argument("radial gaussian: n >= 1");
  RadialDistribution d;
  d.n_ = n;
  d.family_ = RadialFamily::Gaussian;
  radial_tags(d.family_, 0.0, d.tags_);
  d.label_ = "gaussian_n" + std::to_string(n);
  return d;
}

RadialDistribution RadialDistribution::radial_exp(int n) {
  if (n < 1) throw std::invalid_argument("radial_exp: n >= 1");
  RadialDistribution d;
  d.n_ = n;
  d.family_ = RadialFamily::RadialExp;
  radial_tags(d.family_, 0.0, d.tags_);
  d.label_ = "radial_exp_n" + std::to_string(n);
  return d;
}

RadialDistribution RadialDistribution::beta(int n, double beta) {
  if (n < 1 || !(beta > -1.0)) throw std::invalid_argument("radial beta: n >= 1, beta > -1");
  RadialDistribution d;
  d.n_ = n;
  d.family_ = RadialFamily::Beta;
  d.param_ = beta;
  radial_tags(d.family_, beta, d.tags_);
  if (beta < 0.0) d.tags_ = {};  // negative exponents are not log-concave
  d.label_ = "beta_n" + std::to_string(n) + "_b" + fmt17(beta);
  return d;
}

RadialDistribution RadialDistribution::sphere_scaled(int n, double r) {
  if (n < 1 || !(r > 0.0)) throw std::invalid_argument("sphere_scaled: n >= 1, r > 0");
  RadialDistribution d;
  d.n_ = n;
  d.family_ = RadialFamily::SphereScaled;
  d.param_ = r;
  radial_tags(d.family_, r, d.tags_);
  d.label_ = "sphere_n" + std::to_string(n) + "_r" + fmt17(r);
  return d;
}

RadialDistribution RadialDistribution::power_exp(int n, double p) {
  if (n < 1 || !(p > 0.0)) throw std::invalid_argument("power_exp: n >= 1, p > 0");
  RadialDistribution d;
  d.n_ = n;
  d.family_ = RadialFamily::PowerExp;
  d.param_ = p;
  radial_tags(d.family_, p, d.tags_);
  d.label_ = "power_exp_n" + std::to_string(n) + "_p" + fmt17(p);
  return d;
}

RadialDistribution RadialDistribution::radial_grid(int n, std::vector<double> rs,
                                                   std::vector<double> log_profile) {
  if (n < 1 || rs.size() < 2 || rs.size() != log_profile.size())
    throw std::invalid_argument("radial_grid: bad arrays");
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (!(rs[i] > rs[i - 1])) throw std::invalid_argument("radial_grid: radii must increase");
  if (!(rs.front() >= 0.0)) throw std::invalid_argument("radial_grid: radii must be >= 0");
  RadialDistribution d;
  d.n_ = n;
  d.family_ = RadialFamily::RadialGrid;
  d.grs_ = std::move(rs);
  d.glp_ = std::move(log_profile);
  // normalize: integral of n omega_n r^{n-1} exp(profile) dr = 1
  double lz = std::log(integrate(
      [&](double r) { return std::exp(d.log_profile_raw(r)) * std::pow(r, n - 1); },
      d.grs_.front(), d.grs_.back(), {1e-14, 1e-12, 20000}).value
      * n * unit_ball_volume(n));
  for (auto& v : d.glp_) v -= lz;
  // tags from the discrete profile: log-concavity = nonincreasing slopes in r;
  // LC_conv / LC_conc from slopes in r^2
  bool lc = true, conv = true, conc = true;
  for (std::size_t i = 0; i + 2 < d.grs_.size(); ++i) {
    double s0 = (d.glp_[i + 1] - d.glp_[i]) / (d.grs_[i + 1] - d.grs_[i]);
    double s1 = (d.glp_[i + 2] - d.glp_[i + 1]) / (d.grs_[i + 2] - d.grs_[i + 1]);
    if (s1 > s0 + 1e-9) lc = false;
    double u0 = d.grs_[i] * d.grs_[i], u1 = d.grs_[i + 1] * d.grs_[i + 1],
           u2 = d.grs_[i + 2] * d.grs_[i + 2];
    double t0 = (d.glp_[i + 1] - d.glp_[i]) / (u1 - u0);
    double t1 = (d.glp_[i + 2] - d.glp_[i + 1]) / (u2 - u1);
    if (t1 > t0 + 1e-9) conc = false;  // log f(sqrt(u)) concave fails
    if (t1 < t0 - 1e-9) conv = false;
  }
  if (lc) d.tags_.push_back("log-concave");
  if (conc) d.tags_.push_back("LC_conc");
  if (conv) d.tags_.push_back("LC_conv");
  d.label_ = "radial_grid_n" + std::to_string(n) + "[" + std::to_string(d.grs_.size()) + "]";
  return d;
}

bool RadialDistribution::has_tag(const std::string& t) const {
  return std::find(tags_.begin(), tags_.end(), t) != tags_.end();
}

double RadialDistribution::support_radius() const {
  switch (family_) {
    case RadialFamily::Beta: return scale_;
    case RadialFamily::SphereScaled: return param_ * scale_;
    case RadialFamily::RadialGrid: return grs_.back() * scale_;
    default: return kInf;
  }
}

double RadialDistribution::e_r2() const {
  double base;
  switch (family_) {
    case RadialFamily::Gaussian: base = n_; break;
    case RadialFamily::RadialExp: base = n_; break;  // (Gamma(n+2)/Gamma(n))/(n+1) = n
    case RadialFamily::Beta: base = n_ / (n_ + 2.0 * param_ + 2.0); break;
    case RadialFamily::SphereScaled: base = param_ * param_; break;
    case RadialFamily::PowerExp:
      base = std::exp(specfun::log_gamma((n_ + 2.0) / param_) - specfun::log_gamma(n_ / param_));
      break;
    default: {
      double m2 = integrate([&](double r) { return r * r * radial_density_base(r); },
                            grs_.front(), grs_.back(), {1e-13, 1e-11, 20000}).value;
      return m2 * scale_ * scale_;
    }
  }
  return base * scale_ * scale_;
}

RadialDistribution RadialDistribution::isotropized() const {
  RadialDistribution d = *this;
  double cur = e_r2();
  d.scale_ *= std::sqrt(n_ / cur);
  d.tab_r_.reset();
  d.tab_cdf_.reset();
  return d;
}

// profile of the *base* (unscaled) law, normalized
double RadialDistribution::log_profile_raw(double r) const {
  switch (family_) {
    case RadialFamily::Gaussian:
      return -0.5 * r * r - 0.5 * n_ * std::log(2.0 * kPi);
    case RadialFamily::RadialExp: {
      // c_n = (n+1)^{n/2} / (n omega_n Gamma(n))
      double lc = 0.5 * n_ * std::log(n_ + 1.0) - std::log(static_cast<double>(n_))
                  - std::log(unit_ball_volume(n_)) - specfun::log_gamma(n_);
      return lc - std::sqrt(n_ + 1.0) * r;
    }
    case RadialFamily::Beta: {
      if (r > 1.0) return -kInf;
      // c = Gamma(beta + n/2 + 1) / (pi^{n/2} Gamma(beta+1))
      double lc = specfun::log_gamma(param_ + 0.5 * n_ + 1.0) - 0.5 * n_ * std::log(kPi)
                  - specfun::log_gamma(param_ + 1.0);
      if (r == 1.0) return param_ > 0.0 ? -kInf : (param_ == 0.0 ? lc : kInf);
      return lc + param_ * std::log1p(-r * r);
    }
    case RadialFamily::PowerExp: {
      // c = p / (n omega_n Gamma(n/p))
      double lc = std::log(param_) - std::log(static_cast<double>(n_))
                  - std::log(unit_ball_volume(n_)) - specfun::log_gamma(n_ / param_);
      return lc - std::pow(r, param_);
    }
    case RadialFamily::RadialGrid: {
      if (r < grs_.front() || r > grs_.back()) return -kInf;
      auto it = std::upper_bound(grs_.begin(), grs_.end(), r);
      std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - grs_.begin()),
                                            grs_.size() - 1);
      if (i == 0) return glp_[0];
      i -= 1;
      double w = (r - grs_[i]) / (grs_[i + 1] - grs_[i]);
      return glp_[i] * (1.0 - w) + glp_[i + 1] * w;
    }
    default:
      throw std::logic_error("log_profile_raw: sphere has no density");
  }
}

double RadialDistribution::log_profile(double r) const {
  return log_profile_raw(r / scale_) - n_ * std::log(scale_);
}

double RadialDistribution::radial_density_base(double r) const {
  if (family_ == RadialFamily::SphereScaled)
    throw std::logic_error("radial_density: sphere radius law is a point mass");
  double lp = log_profile_raw(r);
  if (lp == -kInf) return 0.0;
  return std::exp(lp + std::log(n_ * unit_ball_volume(n_)) + (n_ - 1.0) * std::log(r));
}

double RadialDistribution::radial_density(double r) const {
  return radial_density_base(r / scale_) / scale_;
}

double RadialDistribution::log_radial_density(double r) const {
  if (family_ == RadialFamily::SphereScaled)
    throw std::logic_error("radial_density: sphere radius law is a point mass");
  double rb = r / scale_;
  double lp = log_profile_raw(rb);
  if (lp == -kInf || rb <= 0.0) return -kInf;
  return lp + std::log(n_ * unit_ball_volume(n_)) + (n_ - 1.0) * std::log(rb) - std::log(scale_);
}

double RadialDistribution::radial_cdf(double r) const {
  double rb = r / scale_;
  if (rb <= 0.0) return 0.0;
  switch (family_) {
    case RadialFamily::Gaussian:
      return specfun::reg_inc_gamma_lower(0.5 * n_, 0.5 * rb * rb);
    case RadialFamily::RadialExp:
      return specfun::reg_inc_gamma_lower(static_cast<double>(n_), std::sqrt(n_ + 1.0) * rb);
    case RadialFamily::Beta:
      if (rb >= 1.0) return 1.0;
      return specfun::reg_inc_beta(0.5 * n_, param_ + 1.0, rb * rb);
    case RadialFamily::SphereScaled:
      return rb >= param_ ? 1.0 : 0.0;
    case RadialFamily::PowerExp:
      return specfun::reg_inc_gamma_lower(n_ / param_, std::pow(rb, param_));
    default: {
      if (rb <= grs_.front()) return 0.0;
      if (rb >= grs_.back()) return 1.0;
      return integrate([&](double s) { return radial_density_base(s); },
                       grs_.front(), rb, {1e-13, 1e-11, 20000}).value;
    }
  }
}

void RadialDistribution::build_radius_spline() const {
  // 2048-node table of the radius cdf; sampling inverts it segment-wise with
  // bisection refinement to 1e-12.
  const int N = 2048;
  auto rs = std::make_shared<std::vector<double>>();
  auto cs = std::make_shared<std::vector<double>>();
  rs->reserve(N + 1);
  cs->reserve(N + 1);
  double rmax = support_radius();
  if (!finite(rmax)) {
    // expand to cover all but 1e-15 of the mass
    rmax = std::sqrt(static_cast<double>(n_)) + 1.0;
    while (radial_cdf(rmax) < 1.0 - 1e-15 && rmax < 1e6) rmax *= 1.25;
  }
  for (int i = 0; i <= N; ++i) {
    double r = rmax * i / N;
    rs->push_back(r);
    cs->push_back(radial_cdf(r));
  }
  cs->front() = 0.0;
  cs->back() = 1.0;
  for (int i = 1; i <= N; ++i)
    if ((*cs)[i] < (*cs)[i - 1]) (*cs)[i] = (*cs)[i - 1];
  tab_r_ = rs;
  tab_cdf_ = cs;
}

double RadialDistribution::radius_quantile(double u) const {
  if (family_ == RadialFamily::SphereScaled) return param_ * scale_;
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("radius_quantile: u outside [0,1]");
  if (!tab_r_) build_radius_spline();
  const auto& rs = *tab_r_;
  const auto& cs = *tab_cdf_;
  auto it = std::lower_bound(cs.begin(), cs.end(), u);
  std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cs.begin()),
                                        cs.size() - 1);
  double lo = (i == 0) ? rs.front() : rs[i - 1];
  double hi = rs[i];
  // bisect the cdf inside the bracketing node interval
  for (int k = 0; k < 60 && hi - lo > 1e-12 * (1.0 + hi); ++k) {
    double mid = 0.5 * (lo + hi);
    if (radial_cdf(mid) < u) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double RadialDistribution::sample_radius(SeedStream& rng) const {
  return radius_quantile(rng.next_uniform());
}

std::vector<double> RadialDistribution::sample_point(SeedStream& rng) const {
  double r = sample_radius(rng);
  std::vector<double> x(n_);
  double norm2 = 0.0;
  for (int i = 0; i < n_; ++i) {
    x[i] = rng.next_gaussian();
    norm2 += x[i] * x[i];
  }
  double nrm = std::sqrt(norm2);
  if (!(nrm > 0.0)) nrm = 1.0;
  for (auto& v : x) v *= r / nrm;
  return x;
}

double RadialDistribution::marginal_density(double s) const {
  double sb = std::fabs(s) / scale_;
  switch (family_) {
    case RadialFamily::Gaussian:
      return std::exp(-0.5 * (s / scale_) * (s / scale_)) /
             (scale_ * 2.5066282746310005024);
    case RadialFamily::Beta: {
      if (sb >= 1.0) return 0.0;
      double m = param_ + 0.5 * (n_ - 1);
      double lb = specfun::log_gamma(m + 1.5) - specfun::log_gamma(m + 1.0)
                  - 0.5 * std::log(kPi);
      return std::exp(lb + m * std::log1p(-sb * sb)) / scale_;
    }
    case RadialFamily::SphereScaled: {
      double rr = param_;
      if (sb >= rr) return 0.0;
      if (n_ == 1) return 0.0;  // atoms at +-r, no density
      double m = 0.5 * (n_ - 3);
      double lb = specfun::log_gamma(0.5 * n_) - specfun::log_gamma(0.5 * (n_ - 1))
                  - 0.5 * std::log(kPi) - std::log(rr);
      return std::exp(lb + m * std::log1p(-(sb / rr) * (sb / rr))) / scale_;
    }
    default: {
      // (n-1) omega_{n-1} int f(sqrt(s^2 + rho^2)) rho^{n-2} drho
      if (n_ == 1) return std::exp(log_profile_raw(sb)) / scale_;
      double lead = std::log((n_ - 1.0) * unit_ball_volume(n_ - 1));
      double rmax = support_radius();
      double hi = finite(rmax) ? std::sqrt(std::max(0.0, sq(rmax / scale_) - sb * sb)) : kInf;
      if (hi == 0.0) return 0.0;
      double lv = log_integral(
          [&](double rho) {
            return log_profile_raw(std::sqrt(sb * sb + rho * rho))
                   + (n_ - 2.0) * std::log(rho);
          },
          0.0, hi, std::sqrt(static_cast<double>(n_)));
      return std::exp(lead + lv) / scale_;
    }
  }
}

double RadialDistribution::log_marginal_upper_tail(double s) const {
  double sb = s / scale_;
  switch (family_) {
    case RadialFamily::Gaussian:
      return log_gaussian_tail(sb);
    case RadialFamily::Beta: {
      if (sb >= 1.0) return -kInf;
      if (sb <= -1.0) return 0.0;
      double m = param_ + 0.5 * (n_ - 1);
      if (sb >= 0.0)
        return -kLn2 + specfun::log_reg_inc_beta(m + 1.0, 0.5, 1.0 - sb * sb);
      return std::log1p(-0.5 * specfun::reg_inc_beta(m + 1.0, 0.5, 1.0 - sb * sb));
    }
    case RadialFamily::SphereScaled:
      return log_sphere_upper_tail(n_, sb / param_);
    default: {
      // P(X_1 >= s) = E_R[ P(theta_1 >= s/R) ]; R-law integral in log space
      if (sb == 0.0) return -kLn2;
      double rmax = finite(support_radius()) ? support_radius() / scale_ : kInf;
      if (finite(rmax) && sb >= rmax) return -kInf;
      if (finite(rmax) && sb <= -rmax) return 0.0;
      double lo = std::max(std::fabs(sb), 0.0);
      double hint = std::max(1.5 * std::fabs(sb), std::sqrt(static_cast<double>(n_)));
      double lv = log_integral(
          [&](double r) {
            double lt = log_sphere_upper_tail(n_, std::fabs(sb) / r);
            return log_radial_density_base(r) + lt;
          },
          lo, finite(rmax) ? rmax : kInf, hint);
      if (sb > 0.0) return lv;
      return std::log1p(-std::exp(lv));
    }
  }
}

double RadialDistribution::log_radial_density_base(double r) const {
  double lp = log_profile_raw(r);
  if (lp == -kInf || r <= 0.0) return -kInf;
  return lp + std::log(n_ * unit_ball_volume(n_)) + (n_ - 1.0) * std::log(r);
}

double RadialDistribution::marginal_upper_tail(double s) const {
  return std::exp(log_marginal_upper_tail(s));
}

// ---------------------------------------------------------------------------
// ProductDistribution / handle helpers
// ---------------------------------------------------------------------------

ProductDistribution::ProductDistribution(std::vector<ScalarDistribution> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("product: needs at least one factor");
}

std::vector<double> ProductDistribution::sample_point(SeedStream& rng) const {
  std::vector<double> x(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) x[i] = factors_[i].sample(rng);
  return x;
}

int dist_dim(const Distribution& d) {
  if (std::holds_alternative<ScalarDistribution>(d)) return 1;
  if (const auto* r = std::get_if<RadialDistribution>(&d)) return r->dim();
  return std::get<ProductDistribution>(d).dim();
}

std::string dist_label(const Distribution& d) {
  if (const auto* s = std::get_if<ScalarDistribution>(&d)) return s->label();
  if (const auto* r = std::get_if<RadialDistribution>(&d)) return r->label();
  const auto& p = std::get<ProductDistribution>(d);
  std::string out = "product[";
  for (int i = 0; i < p.dim(); ++i) {
    if (i) out += ",";
    out += p.factors()[i].label();
  }
  return out + "]";
}

std::vector<double> dist_sample_point(const Distribution& d, SeedStream& rng) {
  if (const auto* s = std::get_if<ScalarDistribution>(&d)) return {s->sample(rng)};
  if (const auto* r = std::get_if<RadialDistribution>(&d)) return r->sample_point(rng);
  return std::get<ProductDistribution>(d).sample_point(rng);
}

}  // namespace cramerdepth
