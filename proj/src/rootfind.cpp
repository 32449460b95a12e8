#include "cramerdepth/rootfind.hpp"

#include <cmath>
#include <stdexcept>

namespace cramerdepth {

double solve_increasing(const std::function<double(double)>& g, double target,
                        double lo, double hi, const RootOptions& opt) {
  double flo = g(lo) - target;
  double fhi = g(hi) - target;
  if (flo > opt.f_tol || fhi < -opt.f_tol) {
    if (std::fabs(flo) <= opt.f_tol) return lo;
    if (std::fabs(fhi) <= opt.f_tol) return hi;
    throw std::invalid_argument("solve_increasing: target not bracketed");
  }
  double best = (std::fabs(flo) < std::fabs(fhi)) ? lo : hi;
  double fbest = (std::fabs(flo) < std::fabs(fhi)) ? flo : fhi;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (std::fabs(fbest) <= opt.f_tol) return best;
    if (hi - lo <= opt.x_tol) return best;
    double mid;
    if (fhi > flo) {
      mid = lo - flo * (hi - lo) / (fhi - flo);  // secant inside the bracket
      const double margin = 0.01 * (hi - lo);
      if (!(mid > lo + margin) || !(mid < hi - margin)) mid = 0.5 * (lo + hi);
    } else {
      mid = 0.5 * (lo + hi);
    }
    double fmid = g(mid) - target;
    if (std::fabs(fmid) < std::fabs(fbest)) {
      best = mid;
      fbest = fmid;
    }
    if (fmid < 0.0) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
    if (!(hi > lo)) return best;
  }
  return best;
}

}  // namespace cramerdepth
