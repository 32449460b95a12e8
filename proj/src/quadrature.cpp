#include "cramerdepth/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "cramerdepth/util.hpp"

namespace cramerdepth {
namespace {

// Kronrod-15 abscissae/weights on [-1,1] plus the embedded Gauss-7 weights.
const double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
const double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
  double integral;
  double error;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  // raw |K-G| (no resasc sharpening): conservative, never under-reports
  double err = std::fabs(resk - resg) * std::fabs(h);
  return {resk * h, err};
}

struct Panel {
  double a, b, integral, error;
};
struct PanelWorse {
  bool operator()(const Panel& p, const Panel& q) const { return p.error < q.error; }
};

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  int seed = std::clamp(opt.min_panels, 1, opt.max_panels);
  double total = 0.0, total_err = 0.0;
  for (int i = 0; i < seed; ++i) {
    double pa = a + (b - a) * i / seed;
    double pb = (i + 1 == seed) ? b : a + (b - a) * (i + 1) / seed;
    PanelEval e0 = gk15(f, pa, pb);
    heap.push({pa, pb, e0.integral, e0.error});
    total += e0.integral;
    total_err += e0.error;
  }
  int panels = seed;
  while (panels < opt.max_panels) {
    double tol = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
    if (total_err <= tol) break;
    Panel worst = heap.top();
    if (!(worst.error > 0.0)) break;
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at double resolution
      total_err -= worst.error;
      continue;
    }
    PanelEval l = gk15(f, worst.a, mid);
    PanelEval r = gk15(f, mid, worst.b);
    total += l.integral + r.integral - worst.integral;
    total_err += l.error + r.error - worst.error;
    heap.push({worst.a, mid, l.integral, l.error});
    heap.push({mid, worst.b, r.integral, r.error});
    ++panels;
  }
  out.value = total;
  out.abs_error = total_err;
  out.panels = panels;
  out.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
  return out;
}

MassWindow locate_mass(const std::function<double(double)>& logf, double a, double b,
                       double peak_hint) {
  // Climb from the hint with doubling steps to a point no worse than its
  // neighbours, then expand the window until the integrand has dropped 55 nats
  // below the peak (e^-55 ~ 1e-24 of the peak value) or the domain edge.
  double x = peak_hint;
  if (finite(a) && x < a) x = a;
  if (finite(b) && x > b) x = b;
  if (finite(a) && finite(b) && (x <= a || x >= b)) x = 0.5 * (a + b);
  double fx = logf(x);
  double step = std::max(0.5, 0.05 * std::fabs(x));
  for (int it = 0; it < 400; ++it) {
    double xl = x - step, xr = x + step;
    if (finite(a)) xl = std::max(xl, a + (x - a) * 1e-12);
    if (finite(b)) xr = std::min(xr, b - (b - x) * 1e-12);
    double fl = (xl < x) ? logf(xl) : -kInf;
    double fr = (xr > x) ? logf(xr) : -kInf;
    if (fr > fx && fr >= fl) {
      x = xr;
      fx = fr;
      step *= 2.0;
    } else if (fl > fx) {
      x = xl;
      fx = fl;
      step *= 2.0;
    } else if (step > 1e-6 * (1.0 + std::fabs(x))) {
      step *= 0.25;
    } else {
      break;
    }
  }
  const double drop = 55.0;
  auto expand = [&](int dir) {
    double edge = (dir > 0) ? b : a;
    double h = std::max(1e-3, 0.1 * (1.0 + std::fabs(x)));
    double p = x;
    for (int it = 0; it < 600; ++it) {
      double nxt = p + dir * h;
      if (dir > 0 && finite(b) && nxt >= b) return b;
      if (dir < 0 && finite(a) && nxt <= a) return a;
      if (logf(nxt) < fx - drop) return nxt;
      p = nxt;
      h *= 1.6;
    }
    return finite(edge) ? edge : p;
  };
  return {expand(-1), expand(+1), x, fx};
}

double log_integral(const std::function<double(double)>& logf, double a, double b,
                    double peak_hint, const QuadOptions& opt) {
  MassWindow w = locate_mass(logf, a, b, peak_hint);
  if (w.peak_log == -kInf) return -kInf;
  const double M = w.peak_log;
  QuadOptions scaled = opt;
  scaled.abs_tol = 0.0;  // pure relative control on the rescaled integrand
  QuadResult r = integrate([&](double x) { return std::exp(logf(x) - M); },
                           w.lo, w.hi, scaled);
  if (!(r.value > 0.0)) return -kInf;
  return M + std::log(r.value);
}

}  // namespace cramerdepth
