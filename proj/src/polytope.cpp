#include "cramerdepth/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <variant>

#include "cramerdepth/depth.hpp"
#include "cramerdepth/funcstats.hpp"
#include "cramerdepth/rng.hpp"
#include "cramerdepth/rootfind.hpp"
#include "cramerdepth/specfun.hpp"
#include "cramerdepth/util.hpp"

namespace cramerdepth {

namespace {

constexpr int kHullBudget = 100000;
constexpr double kZ95 = 1.959963984540054;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Reduce a convex combination y = sum lambda_i v_i to at most dim+1 support
// points without moving y (Caratheodory). Each round finds an affine
// dependence among the support by eliminating the (dim+1) x m system
// [v_i; 1] alpha = 0 and shifts lambda along it until a coefficient hits 0.
// Long double arithmetic keeps the reproduction error well under the
// certificate tolerance at the dimensions in play.
void caratheodory_reduce(const std::vector<std::vector<double>>& vertices,
                         std::vector<int>& support, std::vector<long double>& lambda) {
  const int dim = static_cast<int>(vertices[support[0]].size());
  while (static_cast<int>(support.size()) > dim + 1) {
    const int m = static_cast<int>(support.size());
    const int rows = dim + 1;
    std::vector<std::vector<long double>> a(rows, std::vector<long double>(m));
    for (int j = 0; j < m; ++j) {
      for (int r = 0; r < dim; ++r) a[r][j] = vertices[support[j]][r];
      a[dim][j] = 1.0L;
    }
    std::vector<int> pivot_col(rows, -1);
    std::vector<char> is_pivot(m, 0);
    int rank = 0;
    for (int col = 0; col < m && rank < rows; ++col) {
      int best = -1;
      long double bestv = 0.0L;
      for (int r = rank; r < rows; ++r)
        if (std::fabs((double)a[r][col]) > (double)bestv) {
          bestv = std::fabs((double)a[r][col]);
          best = r;
        }
      if (best < 0 || bestv < 1e-13L) continue;
      std::swap(a[rank], a[best]);
      long double piv = a[rank][col];
      for (int j = col; j < m; ++j) a[rank][j] /= piv;
      for (int r = 0; r < rows; ++r) {
        if (r == rank) continue;
        long double f = a[r][col];
        if (f == 0.0L) continue;
        for (int j = col; j < m; ++j) a[r][j] -= f * a[rank][j];
      }
      pivot_col[rank] = col;
      is_pivot[col] = 1;
      ++rank;
    }
    int free_col = -1;
    for (int j = 0; j < m; ++j)
      if (!is_pivot[j]) {
        free_col = j;
        break;
      }
    if (free_col < 0) return;  // full column rank: no dependence to exploit
    std::vector<long double> alpha(m, 0.0L);
    alpha[free_col] = 1.0L;
    for (int r = 0; r < rank; ++r) alpha[pivot_col[r]] = -a[r][free_col];
    // shift lambda -> lambda - theta*alpha, theta chosen so the first
    // coefficient hits zero from above
    long double theta = 0.0L;
    int drop = -1;
    for (int j = 0; j < m; ++j) {
      if (alpha[j] > 1e-18L) {
        long double cand = lambda[j] / alpha[j];
        if (drop < 0 || cand < theta) {
          theta = cand;
          drop = j;
        }
      }
    }
    if (drop < 0) {
      for (auto& v : alpha) v = -v;
      for (int j = 0; j < m; ++j) {
        if (alpha[j] > 1e-18L) {
          long double cand = lambda[j] / alpha[j];
          if (drop < 0 || cand < theta) {
            theta = cand;
            drop = j;
          }
        }
      }
    }
    if (drop < 0) return;  // degenerate dependence; leave support as is
    for (int j = 0; j < m; ++j) lambda[j] -= theta * alpha[j];
    lambda[drop] = 0.0L;
    std::vector<int> ns;
    std::vector<long double> nl;
    for (int j = 0; j < m; ++j)
      if (lambda[j] > 1e-16L) {
        ns.push_back(support[j]);
        nl.push_back(lambda[j]);
      }
    if (ns.empty()) {  // everything cancelled; keep the heaviest original
      ns.push_back(support[drop]);
      nl.push_back(1.0L);
    }
    support.swap(ns);
    lambda.swap(nl);
  }
  long double sum = 0.0L;
  for (auto v : lambda) sum += v;
  for (auto& v : lambda) v /= sum;
}

}  // namespace

bool certificate_ok(const HullCertificate& cert,
                    const std::vector<std::vector<double>>& vertices,
                    const std::vector<double>& x, double tol) {
  const double scale = 1.0 + norm(x);
  if (cert.status == HullStatus::Inside) {
    if (cert.support.size() != cert.coeffs.size() || cert.support.empty())
      return false;
    if (cert.support.size() > x.size() + 1) return false;
    double sum = 0.0;
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t j = 0; j < cert.support.size(); ++j) {
      int idx = cert.support[j];
      double l = cert.coeffs[j];
      if (idx < 0 || idx >= static_cast<int>(vertices.size())) return false;
      if (l < -1e-12) return false;
      sum += l;
      for (std::size_t r = 0; r < y.size(); ++r) y[r] += l * vertices[idx][r];
    }
    if (std::fabs(sum - 1.0) > 1e-9) return false;
    double err = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) err += sq(y[r] - x[r]);
    return std::sqrt(err) <= tol * scale;
  }
  if (cert.status == HullStatus::Outside) {
    if (cert.xi.size() != x.size()) return false;
    double best = -kInf;
    for (const auto& v : vertices) best = std::max(best, dot(cert.xi, v));
    return dot(cert.xi, x) - best > 0.0;
  }
  return false;
}

HullCertificate hull_membership(const std::vector<std::vector<double>>& vertices,
                                const std::vector<double>& x) {
  if (vertices.empty())
    throw std::invalid_argument("hull_membership: needs at least one vertex");
  const int dim = static_cast<int>(x.size());
  const std::size_t nv = vertices.size();
  for (const auto& v : vertices)
    if (static_cast<int>(v.size()) != dim)
      throw std::invalid_argument("hull_membership: vertex dimension mismatch");
  const double tol_in = 1e-10 * (1.0 + norm(x));

  // start from the vertex nearest to x
  std::size_t start = 0;
  double best = kInf;
  for (std::size_t i = 0; i < nv; ++i) {
    double d2 = 0.0;
    for (int r = 0; r < dim; ++r) d2 += sq(vertices[i][r] - x[r]);
    if (d2 < best) {
      best = d2;
      start = i;
    }
  }
  std::vector<int> support{static_cast<int>(start)};
  std::vector<long double> lambda{1.0L};
  std::vector<double> y = vertices[start];

  HullCertificate cert;
  for (int it = 0; it < kHullBudget; ++it) {
    cert.iterations = it + 1;
    std::vector<double> g(dim);
    double dist2 = 0.0;
    for (int r = 0; r < dim; ++r) {
      g[r] = y[r] - x[r];
      dist2 += sq(g[r]);
    }
    if (std::sqrt(dist2) <= tol_in) {
      caratheodory_reduce(vertices, support, lambda);
      cert.status = HullStatus::Inside;
      cert.support = support;
      cert.coeffs.assign(lambda.begin(), lambda.end());
      if (certificate_ok(cert, vertices, x)) return cert;
      cert = HullCertificate{};
      cert.status = HullStatus::Indeterminate;
      return cert;
    }
    // one scan gives the Frank-Wolfe vertex and the separation test:
    // argmin <g,v> equals argmax <xi,v> for xi = x - y
    std::size_t s_idx = 0;
    double min_gv = kInf;
    for (std::size_t i = 0; i < nv; ++i) {
      double gv = dot(g, vertices[i]);
      if (gv < min_gv) {
        min_gv = gv;
        s_idx = i;
      }
    }
    double margin = -dot(g, x) - (-min_gv);  // <xi,x> - max_i <xi,v_i>
    if (margin > 0.0) {
      cert.status = HullStatus::Outside;
      cert.xi.resize(dim);
      for (int r = 0; r < dim; ++r) cert.xi[r] = -g[r];
      cert.margin = margin;
      if (certificate_ok(cert, vertices, x)) return cert;
      cert = HullCertificate{};
      cert.status = HullStatus::Indeterminate;
      return cert;
    }
    double gy = dot(g, y);
    double fw_gap = gy - min_gv;
    // away vertex: heaviest ascent direction inside the support
    int a_pos = 0;
    double max_gv = -kInf;
    for (std::size_t j = 0; j < support.size(); ++j) {
      double gv = dot(g, vertices[support[j]]);
      if (gv > max_gv) {
        max_gv = gv;
        a_pos = static_cast<int>(j);
      }
    }
    double away_gap = max_gv - gy;
    bool fw_step = fw_gap >= away_gap || support.size() == 1;
    std::vector<double> d(dim);
    double gamma_max;
    if (fw_step) {
      for (int r = 0; r < dim; ++r) d[r] = vertices[s_idx][r] - y[r];
      gamma_max = 1.0;
    } else {
      for (int r = 0; r < dim; ++r) d[r] = y[r] - vertices[support[a_pos]][r];
      long double la = lambda[a_pos];
      gamma_max = (la >= 1.0L) ? 0.0 : static_cast<double>(la / (1.0L - la));
    }
    double d2 = dot(d, d);
    if (!(d2 > 0.0)) {
      // the hull collapsed onto y yet y != x: every vertex equals y
      cert.status = HullStatus::Outside;
      cert.xi.resize(dim);
      for (int r = 0; r < dim; ++r) cert.xi[r] = x[r] - y[r];
      cert.margin = dist2;
      if (certificate_ok(cert, vertices, x)) return cert;
      cert.status = HullStatus::Indeterminate;
      return cert;
    }
    double gamma = std::clamp(-dot(g, d) / d2, 0.0, gamma_max);
    if (fw_step) {
      bool present = false;
      for (std::size_t j = 0; j < support.size(); ++j) {
        lambda[j] *= (1.0L - (long double)gamma);
        if (support[j] == static_cast<int>(s_idx)) {
          lambda[j] += (long double)gamma;
          present = true;
        }
      }
      if (!present && gamma > 0.0) {
        support.push_back(static_cast<int>(s_idx));
        lambda.push_back((long double)gamma);
      }
    } else {
      for (std::size_t j = 0; j < support.size(); ++j)
        lambda[j] *= (1.0L + (long double)gamma);
      lambda[a_pos] -= (long double)gamma;
    }
    // prune and periodically resynchronize y with the exact combination
    for (std::size_t j = 0; j < support.size();) {
      if (lambda[j] <= 1e-16L) {
        support.erase(support.begin() + j);
        lambda.erase(lambda.begin() + j);
      } else {
        ++j;
      }
    }
    if ((it & 63) == 63) {
      long double sum = 0.0L;
      for (auto v : lambda) sum += v;
      for (auto& v : lambda) v /= sum;
      std::fill(y.begin(), y.end(), 0.0);
      for (std::size_t j = 0; j < support.size(); ++j)
        for (int r = 0; r < dim; ++r)
          y[r] += static_cast<double>(lambda[j]) * vertices[support[j]][r];
    } else {
      for (int r = 0; r < dim; ++r) y[r] += gamma * d[r];
    }
  }
  cert.status = HullStatus::Indeterminate;
  cert.iterations = kHullBudget;
  return cert;
}

namespace {

// mass of A = {q >= e^{-t}} and ln inf_A q for one scalar factor
struct LevelSet {
  double mass = 0.0;
  double log_inf_q = -kInf;
};

LevelSet level_scalar(const ScalarDistribution& d, double t) {
  LevelSet ls;
  double s = std::exp(-t);
  if (d.discrete()) {
    const auto& pm = d.pmf();
    double inf_q = kInf;
    for (std::size_t i = 0; i < pm.size(); ++i) {
      if (!(pm[i] > 0.0)) continue;
      double q = depth_1d(d, static_cast<double>(d.k0() + static_cast<long>(i)));
      if (q >= s * (1.0 - 1e-12)) {
        ls.mass += pm[i];
        inf_q = std::min(inf_q, q);
      }
    }
    ls.log_inf_q = (ls.mass > 0.0) ? std::log(inf_q) : -kInf;
    return ls;
  }
  ls.mass = std::max(0.0, 1.0 - 2.0 * s);
  ls.log_inf_q = (ls.mass > 0.0) ? -t : -kInf;
  return ls;
}

LevelSet level_radial(const RadialDistribution& d, double t) {
  LevelSet ls;
  if (t < omega_radial_at(d, 0.0)) return ls;  // below the center depth 1/2
  double hi = std::max(1.0, 0.5 * std::sqrt(d.e_r2()));
  double cap = d.support_radius();
  if (finite(cap)) cap *= 1.0 - 1e-12;
  while (omega_radial_at(d, hi) < t) {
    if (finite(cap) && hi >= cap) break;
    hi = finite(cap) ? std::min(2.0 * hi, cap) : 2.0 * hi;
    if (hi > 1e12) break;
  }
  double rt = hi;
  if (omega_radial_at(d, hi) >= t) {
    RootOptions ro;
    ro.f_tol = 1e-11;
    rt = solve_increasing([&](double r) { return omega_radial_at(d, r); }, t, 0.0, hi,
                          ro);
  }
  ls.mass = d.radial_cdf(rt);
  ls.log_inf_q = -t;
  return ls;
}

// n, log(binom(N,n)) and the level-set data combined into the two bounds
DfmBounds combine_bounds(const LevelSet& ls, int n, long n_vertices, double t) {
  DfmBounds out;
  double nn = static_cast<double>(n_vertices);
  out.upper = std::clamp(ls.mass + nn * std::exp(-t), 0.0, 1.0);
  if (ls.mass <= 0.0) {
    out.lower = 0.0;
    return out;
  }
  double log_binom = specfun::log_gamma(nn + 1.0) - specfun::log_gamma(n + 1.0) -
                     specfun::log_gamma(nn - n + 1.0);
  double log_pow;
  double liq = ls.log_inf_q;
  if (liq >= 0.0) {
    out.lower = std::clamp(ls.mass, 0.0, 1.0);  // inf q = 1: misses are impossible
    return out;
  }
  // log(1 - q) with q = e^{liq}; expm1 keeps precision for q near 0 and 1
  log_pow = (nn - n) * std::log1p(-std::exp(liq));
  double log_term = log_binom + log_pow;
  double term = (log_term > 700.0) ? kInf : std::exp(log_term);
  out.lower = std::clamp(ls.mass * (1.0 - 2.0 * term), 0.0, 1.0);
  return out;
}

void validate_dims(const Distribution& dist, int n) {
  if (n < 1) throw std::invalid_argument("dimension must be at least 1");
  if (std::holds_alternative<ScalarDistribution>(dist)) return;
  if (dist_dim(dist) != n)
    throw std::invalid_argument("handle dimension " + std::to_string(dist_dim(dist)) +
                                " does not match n = " + std::to_string(n));
}

std::vector<double> sample_point_n(const Distribution& dist, int n, SeedStream& rng) {
  if (const auto* sd = std::get_if<ScalarDistribution>(&dist)) {
    std::vector<double> x(n);
    for (int r = 0; r < n; ++r) x[r] = sd->sample(rng);
    return x;
  }
  return dist_sample_point(dist, rng);
}

std::string sim_label(const Distribution& dist, int n) {
  if (std::holds_alternative<ScalarDistribution>(dist) && n > 1)
    return dist_label(dist) + "^" + std::to_string(n);
  return dist_label(dist);
}

void validate_config(const SimConfig& cfg) {
  validate_dims(cfg.dist, cfg.n);
  if (cfg.trials < 1 || cfg.probe_count < 1)
    throw std::invalid_argument("trials and probe_count must be at least 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  for (long N : cfg.vertex_counts)
    if (N <= cfg.n)
      throw std::invalid_argument("every vertex count must exceed the dimension");
}

double e_cramer_reference(const Distribution& dist, int n) {
  StatReport rep = stat_report(dist);
  if (std::holds_alternative<ScalarDistribution>(dist)) return n * rep.e_cramer;
  return rep.e_cramer;
}

}  // namespace

DfmBounds dfm_bounds(const Distribution& dist, int n, long n_vertices, double t) {
  validate_dims(dist, n);
  if (n_vertices <= n)
    throw std::domain_error("dfm_bounds: the lower bound needs N > n");
  if (!(t >= 0.0)) {  // q <= 1 everywhere, so A is empty below t = 0
    LevelSet empty;
    return combine_bounds(empty, n, n_vertices, std::max(t, 0.0));
  }
  LevelSet ls;
  if (const auto* sd = std::get_if<ScalarDistribution>(&dist)) {
    LevelSet one = level_scalar(*sd, t);
    ls.mass = std::pow(one.mass, n);
    ls.log_inf_q = n * one.log_inf_q;
  } else if (const auto* rd = std::get_if<RadialDistribution>(&dist)) {
    ls = level_radial(*rd, t);
  } else {
    const auto& pd = std::get<ProductDistribution>(dist);
    ls.mass = 1.0;
    ls.log_inf_q = 0.0;
    for (const auto& f : pd.factors()) {
      LevelSet one = level_scalar(f, t);
      ls.mass *= one.mass;
      ls.log_inf_q += one.log_inf_q;
    }
  }
  if (std::isinf(t)) ls.mass = 1.0;  // A grows to the whole space
  return combine_bounds(ls, n, n_vertices, t);
}

ThresholdReport expected_measure_mc(const SimConfig& config) {
  validate_config(config);
  ThresholdReport rep;
  rep.label = sim_label(config.dist, config.n);
  rep.delta = config.delta;
  const long total_per_n =
      static_cast<long>(config.trials) * static_cast<long>(config.probe_count);
  {
    SeedStream warm(config.seed, ~0ull);  // build lazy tables before the fan-out
    sample_point_n(config.dist, config.n, warm);
  }
  long grand_indet = 0;
  for (std::size_t in = 0; in < config.vertex_counts.size(); ++in) {
    const long N = config.vertex_counts[in];
    std::vector<long> inside(config.trials, 0), indet(config.trials, 0);
    parallel_for(static_cast<std::size_t>(config.trials), [&](std::size_t tr) {
      std::uint64_t base = (static_cast<std::uint64_t>(in) << 32) |
                           (static_cast<std::uint64_t>(tr) << 1);
      SeedStream vs(config.seed, base);
      SeedStream ps(config.seed, base | 1ull);
      std::vector<std::vector<double>> verts(N);
      for (long i = 0; i < N; ++i) verts[i] = sample_point_n(config.dist, config.n, vs);
      for (int p = 0; p < config.probe_count; ++p) {
        std::vector<double> x = sample_point_n(config.dist, config.n, ps);
        HullCertificate cert = hull_membership(verts, x);
        if (cert.status == HullStatus::Inside)
          ++inside[tr];
        else if (cert.status == HullStatus::Indeterminate)
          ++indet[tr];
      }
    });
    ScanRow row;
    row.n_vertices = N;
    long k = std::accumulate(inside.begin(), inside.end(), 0L);
    row.indeterminate = std::accumulate(indet.begin(), indet.end(), 0L);
    grand_indet += row.indeterminate;
    row.estimate = static_cast<double>(k) / static_cast<double>(total_per_n);
    row.ci_halfwidth = wilson_ci(static_cast<double>(k),
                                 static_cast<double>(total_per_n), kZ95)
                           .halfwidth;
    double mean = 0.0, m2 = 0.0;
    for (int tr = 0; tr < config.trials; ++tr)
      mean += static_cast<double>(inside[tr]) / config.probe_count;
    mean /= config.trials;
    for (int tr = 0; tr < config.trials; ++tr)
      m2 += sq(static_cast<double>(inside[tr]) / config.probe_count - mean);
    row.trial_stddev =
        (config.trials > 1) ? std::sqrt(m2 / (config.trials - 1)) : 0.0;
    // best DFM bounds over a ladder of levels; each level is valid on its own
    double lnn = std::log(static_cast<double>(N));
    row.dfm_upper = 1.0;
    row.dfm_lower = 0.0;
    for (int j = 0; j < 120; ++j) {
      double t = 0.70 + (std::max(30.0, 3.0 * lnn + 15.0) - 0.70) * j / 119.0;
      DfmBounds b = dfm_bounds(config.dist, config.n, N, t);
      row.dfm_upper = std::min(row.dfm_upper, b.upper);
      row.dfm_lower = std::max(row.dfm_lower, b.lower);
    }
    rep.rows.push_back(row);
  }
  const double total_probes =
      static_cast<double>(total_per_n) *
      static_cast<double>(std::max<std::size_t>(1, config.vertex_counts.size()));
  rep.flagged = grand_indet > 1e-3 * total_probes;
  rep.rho1_hat = rep.rho2_hat = rep.rho1_ratio = rep.rho2_ratio = kNaN;
  rep.e_cramer_ref = kNaN;
  try {
    rep.e_cramer_ref = e_cramer_reference(config.dist, config.n);
  } catch (const std::exception&) {
    // reference diverges (uniform measure on a sphere): rows stand alone
  }
  rep.status = "ok";
  return rep;
}

ThresholdReport threshold_scan(const SimConfig& config) {
  SimConfig cfg = config;
  validate_dims(cfg.dist, cfg.n);
  double eref = e_cramer_reference(cfg.dist, cfg.n);
  std::string range_note;
  if (cfg.vertex_counts.empty()) {
    const int points = 9;
    const long cap = 200000;
    double lo = 0.4 * eref, hi = 1.6 * eref;
    for (int j = 0; j < points; ++j) {
      double lnN = lo + (hi - lo) * j / (points - 1);
      long N = std::lround(std::exp(lnN));
      N = std::max<long>(N, cfg.n + 1);
      if (N > cap) {
        N = cap;
        range_note = "; vertex range capped at " + std::to_string(cap);
      }
      if (cfg.vertex_counts.empty() || N > cfg.vertex_counts.back())
        cfg.vertex_counts.push_back(N);
    }
  }
  ThresholdReport rep = expected_measure_mc(cfg);
  rep.e_cramer_ref = eref;
  long best1 = -1, best2 = -1;
  for (const auto& row : rep.rows) {
    if (row.estimate + row.ci_halfwidth <= cfg.delta)
      best1 = std::max(best1, row.n_vertices);
    if (row.estimate - row.ci_halfwidth >= 1.0 - cfg.delta)
      best2 = (best2 < 0) ? row.n_vertices : std::min(best2, row.n_vertices);
  }
  const bool have1 = best1 > 0, have2 = best2 > 0;
  rep.rho1_hat = have1 ? std::log(static_cast<double>(best1)) : kNaN;
  rep.rho2_hat = have2 ? std::log(static_cast<double>(best2)) : kNaN;
  rep.rho1_ratio = rep.rho1_hat / eref;
  rep.rho2_ratio = rep.rho2_hat / eref;
  if (have1 && have2)
    rep.status = "ok";
  else if (!have1 && !have2)
    rep.status = "range exhausted (no crossing found)";
  else if (!have1)
    rep.status = "range exhausted (no lower crossing)";
  else
    rep.status = "range exhausted (no upper crossing)";
  rep.status += range_note;
  return rep;
}

RhoBounds rho_bound_eval(double e_cramer, double beta_param, double delta, int n) {
  if (!(e_cramer > 0.0) || !(beta_param >= 0.0))
    throw std::invalid_argument("rho_bound_eval: needs E Lambda* > 0 and beta >= 0");
  RhoBounds out;
  out.note = "n = " + std::to_string(n);
  if (8.0 * beta_param <= delta && delta < 1.0) {
    out.rho1_lower = (1.0 - std::sqrt(8.0 * beta_param / delta)) * e_cramer;
    out.rho1_valid = true;
  } else {
    out.rho1_lower = kNaN;
    out.note += "; rho1 hypothesis not met (needs 8 beta <= delta < 1)";
  }
  if (128.0 * beta_param < delta && delta < 1.0) {
    double eps = std::max(std::sqrt(128.0 * beta_param / delta),
                          8.0 * std::log(std::exp(1.0) * 1.5 * e_cramer) /
                              (3.0 * e_cramer));
    out.rho2_upper = (1.0 + eps) * e_cramer;
    out.rho2_valid = true;
  } else {
    out.rho2_upper = kNaN;
    out.note += "; rho2 hypothesis not met (needs 128 beta < delta < 1)";
  }
  return out;
}

}  // namespace cramerdepth
