#include <cmath>
#include <vector>

#include <doctest.h>

#include "cramerdepth/depth.hpp"
#include "cramerdepth/dist.hpp"
#include "cramerdepth/util.hpp"

using namespace cramerdepth;

TEST_CASE("one dimensional depth is the smaller tail") {
  auto g = ScalarDistribution::gaussian(0.0, 1.0);
  CHECK(depth_1d(g, 0.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(depth_1d(g, 1.3) == doctest::Approx(g.upper_tail(1.3)).epsilon(1e-13));
  CHECK(depth_1d(g, -1.3) == doctest::Approx(depth_1d(g, 1.3)).epsilon(1e-13));

  auto u = ScalarDistribution::uniform(-1.0, 1.0);
  for (double x : {-0.7, 0.0, 0.2, 0.98})
    CHECK(depth_1d(u, x) ==
          doctest::Approx(std::min((x + 1.0) / 2.0, (1.0 - x) / 2.0)).epsilon(1e-13));
  CHECK(depth_1d(u, 1.5) == 0.0);

  // atoms count on both sides
  auto b = ScalarDistribution::binomial(4, 0.5);
  CHECK(depth_1d(b, 2.0) == doctest::Approx(11.0 / 16.0).epsilon(1e-12));
  CHECK(depth_1d(b, 0.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(depth_1d(b, 1.5) == doctest::Approx(5.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("omega survives tail underflow") {
  auto g = ScalarDistribution::gaussian(0.0, 1.0);
  CHECK(omega_1d(g, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(omega_1d(g, 2.0) == doctest::Approx(-std::log(depth_1d(g, 2.0))).epsilon(1e-12));
  // at x = 40 the depth underflows double range but omega stays finite:
  // Mills ratio expansion of -ln Q(40)
  double x = 40.0;
  double mills = std::log1p(-1.0 / (x * x) + 3.0 / std::pow(x, 4));
  double ref = 0.5 * x * x + std::log(x) + 0.5 * std::log(2.0 * std::acos(-1.0)) - mills;
  CHECK(depth_1d(g, x) == 0.0);
  CHECK(omega_1d(g, x) == doctest::Approx(ref).epsilon(1e-6));
  CHECK(omega_1d(g, -40.0) == doctest::Approx(omega_1d(g, 40.0)).epsilon(1e-12));

  auto u = ScalarDistribution::uniform(-1.0, 1.0);
  CHECK(omega_1d(u, 2.0) == kInf);
}

TEST_CASE("radial depth reduces to the tangent half space") {
  auto g3 = RadialDistribution::gaussian(3);
  CHECK(depth_radial_at(g3, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(depth_radial_at(g3, 2.0) ==
        doctest::Approx(g3.marginal_upper_tail(2.0)).epsilon(1e-12));
  CHECK(depth_radial(g3, {1.0, 2.0, 2.0}) ==
        doctest::Approx(depth_radial_at(g3, 3.0)).epsilon(1e-12));

  auto sp = RadialDistribution::sphere_scaled(3, 2.0);
  CHECK(depth_radial_at(sp, 1.0) == doctest::Approx(0.25).epsilon(1e-12));

  for (const auto& d : {RadialDistribution::radial_exp(4),
                        RadialDistribution::beta(5, 2.0),
                        RadialDistribution::power_exp(3, 1.5)}) {
    CHECK(omega_radial_at(d, 0.0) ==
          doctest::Approx(0.69314718055994531).epsilon(1e-12));
    double r = 0.4 * (std::isfinite(d.support_radius()) ? d.support_radius() : 2.0);
    CHECK(omega_radial_at(d, r) ==
          doctest::Approx(-std::log(depth_radial_at(d, r))).epsilon(1e-10));
  }
  // deep radius: omega stays finite after q underflows
  CHECK(omega_radial_at(RadialDistribution::gaussian(2), 100.0) > 4000.0);
  CHECK(omega_radial_at(RadialDistribution::gaussian(2), 100.0) < kInf);
}

TEST_CASE("beta depth band brackets the exact value") {
  for (int n : {2, 3, 5, 10})
    for (double beta : {0.0, 1.0, 4.0})
      for (int i = 0; i < 40; ++i) {
        double x = 0.999 * (i + 0.5) / 40.0;
        auto b = depth_beta_band(n, beta, x);
        CHECK(b.lower <= b.exact * (1.0 + 1e-12) + 1e-300);
        CHECK(b.exact <= b.upper * (1.0 + 1e-12) + 1e-300);
        if (b.exact > 0.0)
          CHECK(b.log_exact == doctest::Approx(std::log(b.exact)).epsilon(1e-10));
      }
  // the exact band value is the marginal tail of the unscaled ball law
  auto d = RadialDistribution::beta(4, 1.5);
  for (double x : {0.1, 0.5, 0.9}) {
    auto b = depth_beta_band(4, 1.5, x);
    CHECK(b.exact ==
          doctest::Approx(depth_radial_at(d, x * d.scale())).epsilon(1e-10));
  }
  // deep in the shoulder the exact value underflows but log_exact does not
  auto deep = depth_beta_band(400, 0.0, 0.999);
  CHECK(deep.exact == 0.0);
  CHECK(deep.log_exact > -kInf);
  CHECK(deep.log_exact < -700.0);
}

TEST_CASE("monte carlo depth of a cloud") {
  SeedStream rng(11, 0);
  auto g2 = RadialDistribution::gaussian(2);
  std::vector<std::vector<double>> cloud;
  for (int i = 0; i < 4000; ++i) cloud.push_back(g2.sample_point(rng));

  double d0 = depth_mc(cloud, {0.0, 0.0}, depth_mc_default_directions(2), 5);
  CHECK(d0 == doctest::Approx(0.5).epsilon(0.08));
  double d2 = depth_mc(cloud, {2.0, 0.0}, depth_mc_default_directions(2), 5);
  CHECK(d2 == doctest::Approx(g2.marginal_upper_tail(2.0)).epsilon(0.5));
  CHECK(d2 < d0);
  // deterministic for a fixed seed, monotone nonincreasing in the direction count
  CHECK(depth_mc(cloud, {2.0, 0.0}, 64, 5) == d2);
  CHECK(depth_mc(cloud, {2.0, 0.0}, 256, 5) <= d2 + 1e-12);
  // far outside every sample
  CHECK(depth_mc(cloud, {100.0, 0.0}, 64, 5) == 0.0);
}
