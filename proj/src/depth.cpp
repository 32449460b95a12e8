#include "cramerdepth/depth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cramerdepth/rng.hpp"
#include "cramerdepth/specfun.hpp"
#include "cramerdepth/util.hpp"

namespace cramerdepth {

double depth_1d(const ScalarDistribution& d, double x) {
  return std::min(d.cdf(x), d.upper_tail(x));
}

double omega_1d(const ScalarDistribution& d, double x) {
  // -ln min(F, Z) computed on the log scale so deep tails survive underflow
  return -std::min(d.log_cdf(x), d.log_upper_tail(x));
}

double depth_radial_at(const RadialDistribution& d, double r) {
  if (r == 0.0) return 0.5;
  return d.marginal_upper_tail(std::fabs(r));
}

double depth_radial(const RadialDistribution& d, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != d.dim())
    throw std::invalid_argument("depth_radial: point dimension mismatch");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return depth_radial_at(d, std::sqrt(r2));
}

double omega_radial_at(const RadialDistribution& d, double r) {
  if (r == 0.0) return 0.69314718055994530942;
  return -d.log_marginal_upper_tail(std::fabs(r));
}

BetaBand depth_beta_band(int n, double beta, double x) {
  if (n < 1 || !(beta > -1.0)) throw std::invalid_argument("depth_beta_band: bad (n, beta)");
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("depth_beta_band: x in (0,1)");
  BetaBand out;
  const double e = beta + 0.5 * (n + 1);  // exponent beta + (n+1)/2
  out.log_exact = -0.69314718055994530942
                  + specfun::log_reg_inc_beta(e, 0.5, 1.0 - x * x);
  out.exact = std::exp(out.log_exact);
  const double kSqrtPi = 1.77245385090551602730;
  double envelope = std::exp(e * std::log1p(-x * x));
  out.lower = envelope / (2.0 * kSqrtPi * std::sqrt(beta + 0.5 * n + 1.0));
  out.upper = envelope / (2.0 * x * kSqrtPi * std::sqrt(beta + 0.5 * n));
  return out;
}

double depth_mc(const std::vector<std::vector<double>>& cloud, const std::vector<double>& x,
                int M, std::uint64_t seed) {
  if (cloud.empty() || M < 1) throw std::invalid_argument("depth_mc: empty cloud or M < 1");
  const int n = static_cast<int>(x.size());
  const std::size_t N = cloud.size();
  for (const auto& y : cloud)
    if (static_cast<int>(y.size()) != n)
      throw std::invalid_argument("depth_mc: cloud/point dimension mismatch");
  std::vector<double> best(M);
  parallel_for(M, [&](int j) {
    SeedStream rng(seed, static_cast<std::uint64_t>(j));
    std::vector<double> xi(n);
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      xi[i] = rng.next_gaussian();
      norm2 += xi[i] * xi[i];
    }
    if (!(norm2 > 0.0)) xi[0] = 1.0;
    std::size_t cnt = 0;
    for (const auto& y : cloud) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += (y[i] - x[i]) * xi[i];
      if (dot >= 0.0) ++cnt;
    }
    best[j] = static_cast<double>(cnt) / static_cast<double>(N);
  });
  return *std::min_element(best.begin(), best.end());
}

}  // namespace cramerdepth
