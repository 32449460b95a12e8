#include "cramerdepth/cramer.hpp"

#include <cmath>
#include <stdexcept>

#include "cramerdepth/rootfind.hpp"

namespace cramerdepth {

double Cramer::solve_tilt(double x, const TiltCache* cache) const {
  if (lam_.has_closed_tilt()) return lam_.closed_tilt(x);
  double t0 = 0.0;
  if (cache && finite(cache->t) && cache->t > lam_.t_lo() && cache->t < lam_.t_hi())
    t0 = cache->t;
  auto d = [this](double t) { return lam_.deriv(t); };
  double f0 = d(t0);
  double lo = t0, hi = t0;
  // On an unbounded tilt domain the step doubles until it clears x; slopes as
  // flat as 1/|t| need |t| near the double range, hence the 1100 budget. On a
  // bounded domain the gap to the endpoint halves and saturates at the
  // endpoint itself, where the derivative of a steep cumulant is +-inf.
  if (f0 < x) {
    const double T = lam_.t_hi();
    double step = 1.0;
    for (int k = 0; k < 1100; ++k) {
      hi = finite(T) ? T - (T - t0) / std::exp2(k + 1) : t0 + step;
      step *= 2.0;
      if (!finite(hi)) throw std::runtime_error("conjugate: bracket expansion failed");
      double fh = d(hi);
      if (fh >= x) break;
      lo = hi;
      if (k == 1099) throw std::runtime_error("conjugate: bracket expansion failed");
    }
  } else if (f0 > x) {
    const double T = lam_.t_lo();
    double step = 1.0;
    for (int k = 0; k < 1100; ++k) {
      lo = finite(T) ? T + (t0 - T) / std::exp2(k + 1) : t0 - step;
      step *= 2.0;
      if (!finite(lo)) throw std::runtime_error("conjugate: bracket expansion failed");
      double fl = d(lo);
      if (fl <= x) break;
      hi = lo;
      if (k == 1099) throw std::runtime_error("conjugate: bracket expansion failed");
    }
  } else {
    return t0;
  }
  RootOptions opt;
  opt.f_tol = 1e-10 * (1.0 + std::fabs(x));
  return solve_increasing(d, x, lo, hi, opt);
}

ConjResult Cramer::conjugate(double x, TiltCache* cache) const {
  ConjResult r;
  r.tilt = kNaN;
  r.second = kNaN;
  if (std::isnan(x)) {
    r.value = kNaN;
    return r;
  }
  if (x <= lam_.x_lo()) {
    r.value = (x == lam_.x_lo() && lam_.log_atom_lo() > -kInf) ? -lam_.log_atom_lo() : kInf;
    return r;
  }
  if (x >= lam_.x_hi()) {
    r.value = (x == lam_.x_hi() && lam_.log_atom_hi() > -kInf) ? -lam_.log_atom_hi() : kInf;
    return r;
  }
  double t = solve_tilt(x, cache);
  if (cache) cache->t = t;
  r.tilt = t;
  r.value = x * t - lam_.value(t);
  if (r.value < 0.0 && r.value > -1e-9) r.value = 0.0;  // roundoff near the mean
  double d2 = lam_.deriv2(t);
  r.second = d2 > 0.0 ? 1.0 / d2 : kInf;
  r.interior = true;
  return r;
}

std::vector<ConjResult> Cramer::conjugate_grid(const std::vector<double>& xs) const {
  std::vector<ConjResult> out;
  out.reserve(xs.size());
  TiltCache cache;
  for (double x : xs) out.push_back(conjugate(x, &cache));
  return out;
}

double Cramer::biconjugate_residual(const std::vector<double>& ts) const {
  double worst = 0.0;
  TiltCache cache;
  for (double t : ts) {
    if (t <= lam_.t_lo() || t >= lam_.t_hi()) continue;
    double xt = lam_.deriv(t);
    ConjResult c = conjugate(xt, &cache);
    if (!c.interior) continue;
    worst = std::max(worst, std::fabs(t * xt - c.value - lam_.value(t)));
  }
  return worst;
}

double Cramer::omega(double x) const { return -lam_.log_upper_tail(x); }

double Cramer::condition_ratio(double x) const {
  return omega(x) / conjugate(x).value;
}

}  // namespace cramerdepth
