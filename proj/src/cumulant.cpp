#include "cramerdepth/cumulant.hpp"

#include <cmath>
#include <stdexcept>

#include "cramerdepth/quadrature.hpp"
#include "cramerdepth/specfun.hpp"
#include "cramerdepth/util.hpp"

namespace cramerdepth {
namespace {

// S(a, u) = (u/2)^{-a} I_a(u); ratios of consecutive orders drive the
// derivatives of ln E e^{u theta_1} on the sphere.
double S_log(double a, double u) { return specfun::log_bessel_i_scaled(a, u); }

double theta_val(double a, double u) {
  return specfun::log_gamma(a + 1.0) + S_log(a, std::fabs(u));
}

double theta_d1(double a, double u) {
  double au = std::fabs(u);
  if (au == 0.0) return 0.0;
  double r1 = std::exp(S_log(a + 1.0, au) - S_log(a, au));
  double d = 0.5 * au * r1;
  return u < 0.0 ? -d : d;
}

double theta_d2(double a, double u) {
  double au = std::fabs(u);
  double r1 = std::exp(S_log(a + 1.0, au) - S_log(a, au));
  double r2 = std::exp(S_log(a + 2.0, au) - S_log(a, au));
  double d1 = 0.5 * au * r1;
  return 0.5 * r1 + 0.25 * au * au * r2 - d1 * d1;
}

// ln(sinh u / u) and the two derivative kernels of the uniform cumulant,
// series below |u| = 0.5, exponential forms above
double log_sinhc(double u) {
  u = std::fabs(u);
  if (u < 0.5) {
    double u2 = u * u;
    return u2 * (1.0 / 6.0 + u2 * (-1.0 / 180.0 + u2 * (1.0 / 2835.0 - u2 / 37800.0)));
  }
  return u - std::log(2.0 * u) + std::log1p(-std::exp(-2.0 * u));
}

double coth_minus_inv(double u) {  // coth u - 1/u, odd
  double au = std::fabs(u);
  double v;
  if (au < 0.5) {
    double u2 = au * au;
    v = au * (1.0 / 3.0 + u2 * (-1.0 / 45.0 + u2 * (2.0 / 945.0 - u2 / 4725.0)));
  } else {
    double e = std::exp(-2.0 * au);
    v = 1.0 + 2.0 * e / (1.0 - e) - 1.0 / au;
  }
  return u < 0.0 ? -v : v;
}

double inv_sq_minus_csch_sq(double u) {  // 1/u^2 - csch^2 u, even
  double au = std::fabs(u);
  if (au < 0.5) {
    double u2 = au * au;
    return 1.0 / 3.0 + u2 * (-1.0 / 15.0 + u2 * (2.0 / 189.0 - u2 / 675.0));
  }
  double e = std::exp(-2.0 * au);
  double csch = 2.0 * std::exp(-au) / (1.0 - e);
  return 1.0 / (au * au) - csch * csch;
}

// Exp-linear segment kernels: a grid-density piece contributes
// e^{y0 + t x0} h int_0^1 e^{z u} du with z the log-density change plus t h.

double log_phi0(double z) {  // ln int_0^1 e^{z u} du
  if (z == 0.0) return 0.0;
  if (z > 709.0) return z - std::log(z) + std::log1p(-std::exp(-z));
  if (z < -709.0) return -std::log(-z);
  return std::log(std::expm1(z) / z);
}

double seg_mean(double z) {  // mean of u under the weight e^{z u}
  double az = std::fabs(z);
  if (az < 0.01) {
    double z2 = z * z;
    return 0.5 + z * (1.0 / 12.0 + z2 * (-1.0 / 720.0 + z2 / 30240.0));
  }
  // 1/(1 - e^{-z}) - 1/z; reflect u -> 1-u for the negative side so the
  // exponential never overflows and the z -> +inf limit hits 1 - 1/z exactly
  if (z > 0.0) return 1.0 / (1.0 - std::exp(-z)) - 1.0 / z;
  return 1.0 - (1.0 / (1.0 - std::exp(z)) + 1.0 / z);
}

double seg_var(double z) {  // variance of u under the weight e^{z u}, even
  double az = std::fabs(z);
  if (az < 0.25) {
    double z2 = z * z;
    return 1.0 / 12.0 + z2 * (-1.0 / 240.0 + z2 * (1.0 / 6048.0 - z2 / 172800.0));
  }
  double e = std::exp(-az);  // 2 sinh(az/2) = (1 - e) / sqrt(e)
  double s2 = (1.0 - e) * (1.0 - e) / e;
  return 1.0 / (az * az) - 1.0 / s2;
}

}  // namespace

// ---------------------------------------------------------------------------
// factories
// ---------------------------------------------------------------------------

CumulantFn CumulantFn::from_scalar(const ScalarDistribution& d) {
  CumulantFn c;
  c.sd_ = std::make_shared<ScalarDistribution>(d);
  c.fam_ = d.family();
  c.label_ = d.label();
  c.mean_ = d.mean();
  c.var_ = d.variance();
  c.discrete_ = d.discrete();
  c.x_lo_ = d.support_lo();
  c.x_hi_ = d.support_hi();
  switch (d.family()) {
    case ScalarFamily::Gaussian:
      c.kind_ = Kind::Affine;
      c.p0_ = d.mean();
      c.p1_ = d.variance();
      break;
    case ScalarFamily::Uniform:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.support_lo();
      c.p1_ = d.support_hi();
      break;
    case ScalarFamily::Laplace:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.p0();
      c.t_lo_ = -1.0 / c.p0_;
      c.t_hi_ = 1.0 / c.p0_;
      break;
    case ScalarFamily::Exponential:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.p0();
      c.t_hi_ = c.p0_;
      break;
    case ScalarFamily::Gamma:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.p0();
      c.t_hi_ = 1.0;
      break;
    case ScalarFamily::TwoExpMixtureTail:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.p0();
      c.p1_ = d.p1();
      c.p2_ = d.p2();
      c.t_hi_ = c.p1_;
      break;
    case ScalarFamily::Poisson:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.p0();
      c.log_atom_lo_ = -c.p0_;  // P(X=0) = e^-lambda
      break;
    case ScalarFamily::Geometric:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.p0();
      c.t_hi_ = -std::log1p(-c.p0_);
      c.log_atom_lo_ = std::log(c.p0_);
      break;
    case ScalarFamily::Binomial:
      c.kind_ = Kind::ClosedScalar;
      c.p0_ = d.p0();  // m
      c.p1_ = d.p1();  // p
      c.log_atom_lo_ = c.p0_ * std::log1p(-c.p1_);
      c.log_atom_hi_ = c.p0_ * std::log(c.p1_);
      break;
    case ScalarFamily::GridDensity:
      c.kind_ = Kind::GridClosed;
      break;
    case ScalarFamily::DiscreteLogConcave: {
      c.kind_ = Kind::DiscreteSum;
      const auto& pmf = d.pmf();
      std::size_t first = 0, last = pmf.size() - 1;
      while (first < pmf.size() && pmf[first] <= 0.0) ++first;
      while (last > first && pmf[last] <= 0.0) --last;
      c.x_lo_ = static_cast<double>(d.k0() + static_cast<long>(first));
      c.x_hi_ = static_cast<double>(d.k0() + static_cast<long>(last));
      c.log_atom_lo_ = std::log(pmf[first]);
      c.log_atom_hi_ = std::log(pmf[last]);
      break;
    }
  }
  return c;
}

CumulantFn CumulantFn::sphere_marginal(int n, double radius) {
  if (n < 1 || !(radius > 0.0)) throw std::invalid_argument("sphere_marginal: bad args");
  CumulantFn c;
  c.kind_ = Kind::BesselS;
  c.n_ = n;
  c.a_ = 0.5 * (n - 2);
  c.tscale_ = radius;
  c.mean_ = 0.0;
  c.var_ = radius * radius / n;
  c.x_lo_ = -radius;
  c.x_hi_ = radius;
  if (n == 1) {
    c.log_atom_lo_ = c.log_atom_hi_ = -0.69314718055994530942;
    c.discrete_ = true;
  }
  c.label_ = "sphere_marginal_n" + std::to_string(n);
  return c;
}

CumulantFn CumulantFn::from_radial(const RadialDistribution& d) {
  CumulantFn c;
  c.rd_ = std::make_shared<RadialDistribution>(d);
  c.n_ = d.dim();
  c.label_ = d.label() + ":marginal";
  c.mean_ = 0.0;
  c.var_ = d.e_r2() / d.dim();
  const double s = d.scale();
  switch (d.family()) {
    case RadialFamily::Gaussian:
      c.kind_ = Kind::Affine;
      c.p0_ = 0.0;
      c.p1_ = s * s;
      break;
    case RadialFamily::SphereScaled:
      c.kind_ = Kind::BesselS;
      c.a_ = 0.5 * (d.dim() - 2);
      c.tscale_ = d.param() * s;
      c.x_lo_ = -c.tscale_;
      c.x_hi_ = c.tscale_;
      if (d.dim() == 1) {
        c.log_atom_lo_ = c.log_atom_hi_ = -0.69314718055994530942;
        c.discrete_ = true;
      }
      break;
    case RadialFamily::Beta:
      // marginal density ~ (1 - (x/s)^2)^m, the sphere law one Bessel order up
      c.kind_ = Kind::BesselS;
      c.a_ = d.param() + 0.5 * d.dim();
      c.tscale_ = s;
      c.x_lo_ = -s;
      c.x_hi_ = s;
      break;
    case RadialFamily::RadialExp:
      c.kind_ = Kind::RadialExpCF;
      c.p0_ = d.dim() + 1.0;  // the constant in -(n+1)/2 ln(1 - t^2/(n+1))
      c.tscale_ = s;
      c.t_lo_ = -std::sqrt(c.p0_) / s;
      c.t_hi_ = std::sqrt(c.p0_) / s;
      break;
    case RadialFamily::PowerExp:
      if (d.param() < 1.0)
        throw std::invalid_argument(
            "from_radial: marginal mgf diverges for power_exp with p < 1");
      c.kind_ = Kind::RadialMix;
      c.a_ = 0.5 * (d.dim() - 2);
      c.p2_ = std::sqrt(d.e_r2());  // peak hint for the radius integral
      if (d.param() == 1.0) {
        c.t_lo_ = -1.0 / s;
        c.t_hi_ = 1.0 / s;
      }
      break;
    case RadialFamily::RadialGrid:
      c.kind_ = Kind::RadialMix;
      c.a_ = 0.5 * (d.dim() - 2);
      c.p2_ = std::sqrt(d.e_r2());
      break;
  }
  if (c.kind_ == Kind::RadialMix) {
    double rmax = d.support_radius();
    if (finite(rmax)) {
      c.x_lo_ = -rmax;
      c.x_hi_ = rmax;
    }
  }
  return c;
}

CumulantFn CumulantFn::from_distribution(const Distribution& d) {
  if (const auto* s = std::get_if<ScalarDistribution>(&d)) return from_scalar(*s);
  if (const auto* r = std::get_if<RadialDistribution>(&d)) return from_radial(*r);
  throw std::invalid_argument(
      "from_distribution: a product law has no single 1-D marginal here; "
      "build one cumulant per factor");
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

double CumulantFn::value(double t) const {
  if (t <= t_lo_ || t >= t_hi_) return kInf;
  switch (kind_) {
    case Kind::Affine:
      return p0_ * t + 0.5 * p1_ * t * t;
    case Kind::ClosedScalar:
      switch (fam_) {
        case ScalarFamily::Uniform: {
          double m = 0.5 * (p0_ + p1_), cc = 0.5 * (p1_ - p0_);
          return m * t + log_sinhc(cc * t);
        }
        case ScalarFamily::Laplace:
          return -std::log1p(-p0_ * p0_ * t * t);
        case ScalarFamily::Exponential:
          return -std::log1p(-t / p0_);
        case ScalarFamily::Gamma:
          return -p0_ * std::log1p(-t);
        case ScalarFamily::TwoExpMixtureTail:
          return std::log(p0_ * p1_ / (p1_ - t) + (1.0 - p0_) * p2_ / (p2_ - t));
        case ScalarFamily::Poisson:
          return p0_ * std::expm1(t);
        case ScalarFamily::Geometric: {
          double dgap = t_hi_ - t;
          return std::log(p0_) - std::log(-std::expm1(-dgap));
        }
        case ScalarFamily::Binomial:
          if (t < 0.0) return p0_ * std::log1p(p1_ * std::expm1(t));
          return p0_ * (t + std::log(p1_ + (1.0 - p1_) * std::exp(-t)));
        default:
          throw std::logic_error("cumulant: unhandled closed form");
      }
    case Kind::DiscreteSum: {
      const auto& pmf = sd_->pmf();
      double best = -kInf;
      for (std::size_t i = 0; i < pmf.size(); ++i)
        if (pmf[i] > 0.0)
          best = std::max(best,
                          std::log(pmf[i]) + t * static_cast<double>(sd_->k0() + (long)i));
      double acc = 0.0;
      for (std::size_t i = 0; i < pmf.size(); ++i)
        if (pmf[i] > 0.0)
          acc += std::exp(std::log(pmf[i]) + t * static_cast<double>(sd_->k0() + (long)i)
                          - best);
      return best + std::log(acc);
    }
    case Kind::GridClosed:
      return grid_value(t);
    case Kind::BesselS:
      return theta_val(a_, tscale_ * t);
    case Kind::RadialMix:
      return mix_value(t);
    case Kind::RadialExpCF: {
      double u = tscale_ * t;
      return -0.5 * p0_ * std::log1p(-u * u / p0_);
    }
  }
  return kNaN;
}

double CumulantFn::deriv(double t) const {
  if (t <= t_lo_ || t >= t_hi_)
    throw std::domain_error("cumulant deriv: t outside the domain");
  switch (kind_) {
    case Kind::Affine:
      return p0_ + p1_ * t;
    case Kind::ClosedScalar:
      switch (fam_) {
        case ScalarFamily::Uniform: {
          double m = 0.5 * (p0_ + p1_), cc = 0.5 * (p1_ - p0_);
          return m + cc * coth_minus_inv(cc * t);
        }
        case ScalarFamily::Laplace: {
          double b2 = p0_ * p0_;
          return 2.0 * b2 * t / (1.0 - b2 * t * t);
        }
        case ScalarFamily::Exponential:
          return 1.0 / (p0_ - t);
        case ScalarFamily::Gamma:
          return p0_ / (1.0 - t);
        case ScalarFamily::TwoExpMixtureTail: {
          double A = p0_ * p1_ / (p1_ - t), B = (1.0 - p0_) * p2_ / (p2_ - t);
          return (A / (p1_ - t) + B / (p2_ - t)) / (A + B);
        }
        case ScalarFamily::Poisson:
          return p0_ * std::exp(t);
        case ScalarFamily::Geometric:
          return 1.0 / std::expm1(t_hi_ - t);
        case ScalarFamily::Binomial: {
          double sfrac = (t < 0.0) ? p1_ * std::exp(t) / (1.0 - p1_ + p1_ * std::exp(t))
                                   : p1_ / (p1_ + (1.0 - p1_) * std::exp(-t));
          return p0_ * sfrac;
        }
        default:
          throw std::logic_error("cumulant: unhandled closed form");
      }
    case Kind::DiscreteSum: {
      const auto& pmf = sd_->pmf();
      double lam = value(t);
      double m1 = 0.0;
      for (std::size_t i = 0; i < pmf.size(); ++i)
        if (pmf[i] > 0.0) {
          double k = static_cast<double>(sd_->k0() + (long)i);
          m1 += k * std::exp(std::log(pmf[i]) + t * k - lam);
        }
      return m1;
    }
    case Kind::GridClosed: {
      double d1, d2;
      grid_derivs(t, &d1, &d2);
      return d1;
    }
    case Kind::BesselS:
      return tscale_ * theta_d1(a_, tscale_ * t);
    case Kind::RadialMix: {
      double d1, d2;
      mix_derivs(t, &d1, &d2);
      return d1;
    }
    case Kind::RadialExpCF: {
      double u = tscale_ * t;
      return tscale_ * u / (1.0 - u * u / p0_);
    }
  }
  return kNaN;
}

double CumulantFn::deriv2(double t) const {
  if (t <= t_lo_ || t >= t_hi_)
    throw std::domain_error("cumulant deriv2: t outside the domain");
  switch (kind_) {
    case Kind::Affine:
      return p1_;
    case Kind::ClosedScalar:
      switch (fam_) {
        case ScalarFamily::Uniform: {
          double cc = 0.5 * (p1_ - p0_);
          return cc * cc * inv_sq_minus_csch_sq(cc * t);
        }
        case ScalarFamily::Laplace: {
          double b2 = p0_ * p0_, w = 1.0 - b2 * t * t;
          return 2.0 * b2 * (1.0 + b2 * t * t) / (w * w);
        }
        case ScalarFamily::Exponential:
          return 1.0 / sq(p0_ - t);
        case ScalarFamily::Gamma:
          return p0_ / sq(1.0 - t);
        case ScalarFamily::TwoExpMixtureTail: {
          double A = p0_ * p1_ / (p1_ - t), B = (1.0 - p0_) * p2_ / (p2_ - t);
          double d1 = (A / (p1_ - t) + B / (p2_ - t)) / (A + B);
          double d2raw = (2.0 * A / sq(p1_ - t) + 2.0 * B / sq(p2_ - t)) / (A + B);
          return d2raw - d1 * d1;
        }
        case ScalarFamily::Poisson:
          return p0_ * std::exp(t);
        case ScalarFamily::Geometric: {
          double d1 = 1.0 / std::expm1(t_hi_ - t);
          return d1 * (1.0 + d1);
        }
        case ScalarFamily::Binomial: {
          double sfrac = (t < 0.0) ? p1_ * std::exp(t) / (1.0 - p1_ + p1_ * std::exp(t))
                                   : p1_ / (p1_ + (1.0 - p1_) * std::exp(-t));
          return p0_ * sfrac * (1.0 - sfrac);
        }
        default:
          throw std::logic_error("cumulant: unhandled closed form");
      }
    case Kind::DiscreteSum: {
      const auto& pmf = sd_->pmf();
      double lam = value(t);
      double m1 = 0.0;
      for (std::size_t i = 0; i < pmf.size(); ++i)
        if (pmf[i] > 0.0) {
          double k = static_cast<double>(sd_->k0() + (long)i);
          m1 += k * std::exp(std::log(pmf[i]) + t * k - lam);
        }
      double v = 0.0;
      for (std::size_t i = 0; i < pmf.size(); ++i)
        if (pmf[i] > 0.0) {
          double k = static_cast<double>(sd_->k0() + (long)i);
          v += sq(k - m1) * std::exp(std::log(pmf[i]) + t * k - lam);
        }
      return v;
    }
    case Kind::GridClosed: {
      double d1, d2;
      grid_derivs(t, &d1, &d2);
      return d2;
    }
    case Kind::BesselS:
      return tscale_ * tscale_ * theta_d2(a_, tscale_ * t);
    case Kind::RadialMix: {
      double d1, d2;
      mix_derivs(t, &d1, &d2);
      return d2;
    }
    case Kind::RadialExpCF: {
      double u = tscale_ * t, w = 1.0 - u * u / p0_;
      return tscale_ * tscale_ * (1.0 + u * u / p0_) / (w * w);
    }
  }
  return kNaN;
}

// ---------------------------------------------------------------------------
// grid segment sums
// ---------------------------------------------------------------------------

// A grid law is exp-linear between knots, so every tilted moment is a finite
// sum of segment kernels. Near the support edge the top segment dominates and
// its mean hits x_hi - h/z at machine precision, which the tilt solve needs.

double CumulantFn::grid_value(double t) const {
  const auto& gx = sd_->grid_x();
  const auto& gl = sd_->grid_logf();
  const std::size_t m = gx.size();
  std::vector<double> L(m - 1);
  double best = -kInf;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double h = gx[i + 1] - gx[i];
    double z = (gl[i + 1] - gl[i]) + t * h;
    L[i] = gl[i] + t * gx[i] + std::log(h) + log_phi0(z);
    best = std::max(best, L[i]);
  }
  double acc = 0.0;
  for (double li : L) acc += std::exp(li - best);
  return best + std::log(acc);
}

void CumulantFn::grid_derivs(double t, double* d1, double* d2) const {
  const auto& gx = sd_->grid_x();
  const auto& gl = sd_->grid_logf();
  const std::size_t m = gx.size();
  std::vector<double> L(m - 1), mu(m - 1), vv(m - 1);
  double best = -kInf;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double h = gx[i + 1] - gx[i];
    double z = (gl[i + 1] - gl[i]) + t * h;
    L[i] = gl[i] + t * gx[i] + std::log(h) + log_phi0(z);
    mu[i] = gx[i] + h * seg_mean(z);
    vv[i] = h * h * seg_var(z);
    best = std::max(best, L[i]);
  }
  double W = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double w = std::exp(L[i] - best);
    W += w;
    m1 += w * mu[i];
  }
  m1 /= W;
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i)
    v += std::exp(L[i] - best) * (sq(mu[i] - m1) + vv[i]);
  *d1 = m1;
  *d2 = v / W;
}

double CumulantFn::mix_value(double t) const {
  double rmax = rd_->support_radius();
  auto lf = [&](double r) {
    return rd_->log_radial_density(r) + theta_val(a_, t * r);
  };
  return log_integral(lf, 0.0, rmax, p2_);
}

void CumulantFn::mix_derivs(double t, double* d1, double* d2) const {
  double rmax = rd_->support_radius();
  auto lf = [&](double r) {
    return rd_->log_radial_density(r) + theta_val(a_, t * r);
  };
  MassWindow w = locate_mass(lf, 0.0, rmax, p2_);
  const double M = w.peak_log;
  QuadOptions qo;
  qo.abs_tol = 0.0;
  double Z = integrate([&](double r) { return std::exp(lf(r) - M); }, w.lo, w.hi, qo).value;
  QuadOptions qm;  // first moment vanishes at t = 0; keep an absolute floor
  double m1 = integrate(
      [&](double r) { return r * theta_d1(a_, t * r) * std::exp(lf(r) - M); },
      w.lo, w.hi, qm).value;
  double m2 = integrate(
      [&](double r) {
        double u = t * r;
        return r * r * (theta_d2(a_, u) + sq(theta_d1(a_, u))) * std::exp(lf(r) - M);
      },
      w.lo, w.hi, qm).value;
  *d1 = m1 / Z;
  *d2 = m2 / Z - sq(m1 / Z);
}

// ---------------------------------------------------------------------------
// tails and closed tilts
// ---------------------------------------------------------------------------

double CumulantFn::log_upper_tail(double x) const {
  if (sd_) return sd_->log_upper_tail(x);
  if (rd_) return rd_->log_marginal_upper_tail(x);
  // bare sphere marginal
  return log_sphere_upper_tail(n_, x / tscale_);
}

double CumulantFn::upper_tail(double x) const { return std::exp(log_upper_tail(x)); }

bool CumulantFn::has_closed_tilt() const {
  if (kind_ == Kind::Affine || kind_ == Kind::RadialExpCF) return true;
  if (kind_ != Kind::ClosedScalar) return false;
  switch (fam_) {
    case ScalarFamily::Laplace:
    case ScalarFamily::Exponential:
    case ScalarFamily::Gamma:
    case ScalarFamily::Poisson:
    case ScalarFamily::Geometric:
    case ScalarFamily::Binomial:
      return true;
    default:
      return false;
  }
}

double CumulantFn::closed_tilt(double x) const {
  switch (kind_) {
    case Kind::Affine:
      return (x - p0_) / p1_;
    case Kind::RadialExpCF: {
      if (x == 0.0) return 0.0;
      double y = x / tscale_;
      double u = p0_ * (std::sqrt(1.0 + 4.0 * y * y / p0_) - 1.0) / (2.0 * y);
      return u / tscale_;
    }
    case Kind::ClosedScalar:
      switch (fam_) {
        case ScalarFamily::Laplace:
          if (x == 0.0) return 0.0;
          return (std::sqrt(p0_ * p0_ + x * x) - p0_) / (p0_ * x);
        case ScalarFamily::Exponential:
          return p0_ - 1.0 / x;
        case ScalarFamily::Gamma:
          return 1.0 - p0_ / x;
        case ScalarFamily::Poisson:
          return std::log(x / p0_);
        case ScalarFamily::Geometric:
          return std::log(x / ((1.0 + x) * (1.0 - p0_)));
        case ScalarFamily::Binomial: {
          double sfrac = x / p0_;
          return std::log(sfrac * (1.0 - p1_) / ((1.0 - sfrac) * p1_));
        }
        default:
          break;
      }
      [[fallthrough]];
    default:
      throw std::logic_error("closed_tilt: not available for this cumulant");
  }
}

}  // namespace cramerdepth
