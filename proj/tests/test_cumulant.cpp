#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "cramerdepth/cumulant.hpp"
#include "cramerdepth/dist.hpp"
#include "cramerdepth/util.hpp"

using namespace cramerdepth;

namespace {

// central difference checks for the analytic derivatives
void check_derivs(const CumulantFn& lam, double t, double rel = 1e-6) {
  double h = 1e-5 * (1.0 + std::fabs(t));
  double d1 = (lam.value(t + h) - lam.value(t - h)) / (2.0 * h);
  double d2 = (lam.value(t + h) - 2.0 * lam.value(t) + lam.value(t - h)) / (h * h);
  CHECK(lam.deriv(t) == doctest::Approx(d1).epsilon(rel));
  CHECK(lam.deriv2(t) == doctest::Approx(d2).epsilon(std::max(rel, 1e-4)));
  CHECK(lam.deriv2(t) > 0.0);
}

}  // namespace

TEST_CASE("gaussian cumulant is a parabola") {
  auto lam = CumulantFn::from_scalar(ScalarDistribution::gaussian(1.5, 2.0));
  for (double t : {-3.0, -0.1, 0.0, 2.7}) {
    CHECK(lam.value(t) == doctest::Approx(1.5 * t + 2.0 * t * t).epsilon(1e-14));
    CHECK(lam.deriv(t) == doctest::Approx(1.5 + 4.0 * t).epsilon(1e-14));
    CHECK(lam.deriv2(t) == doctest::Approx(4.0).epsilon(1e-14));
  }
  CHECK(lam.mean() == 1.5);
  CHECK(lam.variance() == 4.0);
  CHECK(lam.t_hi() == kInf);
  CHECK(lam.has_closed_tilt());
  CHECK(lam.closed_tilt(3.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("exponential and gamma cumulants") {
  auto ex = CumulantFn::from_scalar(ScalarDistribution::exponential(2.0));
  CHECK(ex.t_hi() == doctest::Approx(2.0));
  CHECK(ex.x_lo() == doctest::Approx(0.0));
  for (double t : {-5.0, 0.0, 1.0, 1.9})
    CHECK(ex.value(t) == doctest::Approx(std::log(2.0 / (2.0 - t))).epsilon(1e-12));
  CHECK(ex.value(2.5) == kInf);
  check_derivs(ex, 1.2);

  auto ga = CumulantFn::from_scalar(ScalarDistribution::gamma(3.0));
  for (double t : {-2.0, 0.5, 0.99})
    CHECK(ga.value(t) == doctest::Approx(-3.0 * std::log(1.0 - t)).epsilon(1e-12));
  check_derivs(ga, 0.5);
}

TEST_CASE("laplace and uniform cumulants") {
  auto lap = CumulantFn::from_scalar(ScalarDistribution::laplace(3.0));
  CHECK(lap.t_hi() == doctest::Approx(1.0 / 3.0));
  for (double t : {-0.3, 0.0, 0.25})
    CHECK(lap.value(t) == doctest::Approx(-std::log(1.0 - 9.0 * t * t)).epsilon(1e-12));
  check_derivs(lap, 0.2);

  auto uni = CumulantFn::from_scalar(ScalarDistribution::uniform(-1.0, 1.0));
  CHECK(uni.value(0.0) == 0.0);
  for (double t : {-4.0, 0.5, 2.0, 30.0})
    CHECK(uni.value(t) == doctest::Approx(std::log(std::sinh(t) / t)).epsilon(1e-11));
  CHECK(uni.deriv(1e-9) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(uni.deriv2(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  check_derivs(uni, 1.3);
  CHECK(uni.x_hi() == doctest::Approx(1.0));
  CHECK(uni.log_atom_hi() == -kInf);
}

TEST_CASE("mixture cumulant") {
  auto mx =
      CumulantFn::from_scalar(ScalarDistribution::two_exp_mixture_tail(0.3, 1.0, 4.0));
  CHECK(mx.t_hi() == doctest::Approx(1.0));
  for (double t : {-2.0, 0.0, 0.5, 0.9})
    CHECK(mx.value(t) ==
          doctest::Approx(std::log(0.3 / (1.0 - t) + 2.8 / (4.0 - t))).epsilon(1e-12));
  check_derivs(mx, 0.4);
}

TEST_CASE("discrete cumulants match closed forms inside the stored range") {
  auto po = CumulantFn::from_scalar(ScalarDistribution::poisson(1.0));
  CHECK(po.discrete());
  for (double t : {-3.0, -0.5, 0.0, 0.8, 1.2})
    CHECK(po.value(t) == doctest::Approx(std::expm1(t)).epsilon(1e-9));
  check_derivs(po, 0.5);

  auto bi = CumulantFn::from_scalar(ScalarDistribution::binomial(5, 0.3));
  for (double t : {-10.0, -1.0, 0.0, 2.0, 10.0})
    CHECK(bi.value(t) ==
          doctest::Approx(5.0 * std::log(0.7 + 0.3 * std::exp(t))).epsilon(1e-12));
  CHECK(bi.log_atom_hi() == doctest::Approx(5.0 * std::log(0.3)).epsilon(1e-12));
  CHECK(bi.log_atom_lo() == doctest::Approx(5.0 * std::log(0.7)).epsilon(1e-12));
  CHECK(bi.x_hi() == doctest::Approx(5.0));

  auto ge = CumulantFn::from_scalar(ScalarDistribution::geometric(0.4));
  double th = -std::log(0.6);
  CHECK(ge.t_hi() == doctest::Approx(th).epsilon(1e-12));
  for (double t : {-1.0, 0.0, 0.2})
    CHECK(ge.value(t) ==
          doctest::Approx(std::log(0.4 / (1.0 - 0.6 * std::exp(t)))).epsilon(1e-9));
}

TEST_CASE("grid density cumulant segment sums") {
  // wide knots: the tilt amplifies the truncated tail by e^{200 t}
  auto d =
      ScalarDistribution::grid_density({-200.0, 0.0, 200.0}, {-100.0, 0.0, -100.0});
  auto lam = CumulantFn::from_scalar(d);
  for (double t : {-0.3, -0.1, 0.2, 0.35})
    CHECK(lam.value(t) == doctest::Approx(-std::log(1.0 - 4.0 * t * t)).epsilon(1e-10));
  check_derivs(lam, 0.2);
  // under an extreme tilt the slope resolves the gap to the edge exactly
  CHECK(lam.deriv(1.0e9) == doctest::Approx(200.0 - 1.0e-9).epsilon(1e-12));
  CHECK(lam.deriv(-1.0e9) == doctest::Approx(-200.0 + 1.0e-9).epsilon(1e-12));
}

TEST_CASE("sphere marginal cumulant") {
  auto lam = CumulantFn::sphere_marginal(3);
  CHECK(lam.value(7.0) == doctest::Approx(4.3609418388556766).epsilon(1e-12));
  for (double t : {1e-3, 0.5, 4.0, 20.0, 50.0})
    CHECK(lam.value(t) == doctest::Approx(std::log(std::sinh(t) / t)).epsilon(1e-10));
  CHECK(lam.value(0.0) == 0.0);
  check_derivs(lam, 2.0);
  // uniform on [-1,1] is the 3-sphere shadow; the Bessel-series side carries
  // a little more roundoff than the coth form, so compare at 1e-9
  auto uni = CumulantFn::from_scalar(ScalarDistribution::uniform(-1.0, 1.0));
  for (double t : {0.3, 5.0, 18.0})
    CHECK(lam.value(t) == doctest::Approx(uni.value(t)).epsilon(1e-9));
  // scaled radius dilates the tilt
  auto lam2 = CumulantFn::sphere_marginal(3, 2.0);
  CHECK(lam2.value(1.7) == doctest::Approx(lam.value(3.4)).epsilon(1e-11));
}

TEST_CASE("radial marginal cumulants") {
  auto g = CumulantFn::from_radial(RadialDistribution::gaussian(6));
  for (double t : {-2.0, 0.7, 3.0})
    CHECK(g.value(t) == doctest::Approx(0.5 * t * t).epsilon(1e-12));

  auto re = CumulantFn::from_radial(RadialDistribution::radial_exp(3));
  CHECK(re.t_hi() == doctest::Approx(2.0).epsilon(1e-12));
  for (double t : {-1.5, 0.0, 1.0, 1.9})
    CHECK(re.value(t) == doctest::Approx(-2.0 * std::log(1.0 - t * t / 4.0)).epsilon(1e-12));
  CHECK(re.deriv(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  check_derivs(re, 1.2);

  auto be = CumulantFn::from_radial(RadialDistribution::beta(4, 2.0));
  CHECK(be.value(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(be.variance() == doctest::Approx(be.deriv2(0.0)).epsilon(1e-7));
  check_derivs(be, 0.9, 1e-5);
  CHECK(be.x_hi() == doctest::Approx(1.0).epsilon(1e-12));

  auto pe = CumulantFn::from_radial(RadialDistribution::power_exp(3, 1.5));
  check_derivs(pe, 0.4, 1e-5);
  CHECK(pe.value(0.0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("variant dispatch") {
  Distribution d = ScalarDistribution::gaussian(0.0, 1.0);
  CHECK(CumulantFn::from_distribution(d).value(1.0) == doctest::Approx(0.5));
  Distribution r = RadialDistribution::gaussian(4);
  CHECK(CumulantFn::from_distribution(r).value(1.0) == doctest::Approx(0.5));
  Distribution p = ProductDistribution({ScalarDistribution::gaussian(0.0, 1.0)});
  CHECK_THROWS_AS(CumulantFn::from_distribution(p), std::invalid_argument);
}
