#include <cmath>

#include <doctest.h>

#include "cramerdepth/quadrature.hpp"
#include "cramerdepth/rootfind.hpp"
#include "cramerdepth/util.hpp"

using namespace cramerdepth;

TEST_CASE("integrate on smooth integrands") {
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  r = integrate([](double x) { return std::sin(x); }, 0.0, std::acos(-1.0));
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));

  r = integrate([](double x) { return std::exp(-x * x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(0.74682413281242703).epsilon(1e-13));

  // oscillatory
  r = integrate([](double x) { return std::cos(x); }, 0.0, 10.0);
  CHECK(r.value == doctest::Approx(std::sin(10.0)).epsilon(1e-12));
  CHECK(std::fabs(r.value - std::sin(10.0)) <= 100.0 * r.abs_error + 1e-14);
}

TEST_CASE("integrate splits hard panels") {
  // integrable endpoint singularity: int_0^1 ln(u)^2 du = 2
  auto r = integrate([](double u) { return u > 0.0 ? sq(std::log(u)) : 0.0; }, 0.0,
                     1.0, {1e-12, 1e-10, 20000});
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.panels > 10);

  // narrow spike inside a wide interval; min_panels tells the rule the scale
  r = integrate([](double x) { return std::exp(-sq((x - 3.0) * 200.0)); }, 0.0, 100.0,
                {1e-14, 1e-12, 20000, 4096});
  CHECK(r.value == doctest::Approx(std::sqrt(std::acos(-1.0)) / 200.0).epsilon(1e-10));
}

TEST_CASE("log_integral handles scale and location") {
  double l2pi = 0.5 * std::log(2.0 * std::acos(-1.0));
  CHECK(log_integral([](double x) { return -0.5 * x * x; }, -kInf, kInf, 0.0) ==
        doctest::Approx(l2pi).epsilon(1e-11));
  // peak far from the hint
  CHECK(log_integral([](double x) { return -0.5 * sq(x - 40.0); }, -kInf, kInf, 0.0) ==
        doctest::Approx(l2pi).epsilon(1e-11));
  // huge offset must not overflow
  CHECK(log_integral([](double x) { return 1000.0 - 0.5 * x * x; }, -kInf, kInf,
                     0.0) == doctest::Approx(1000.0 + l2pi).epsilon(1e-11));
  // one-sided domain
  CHECK(log_integral([](double x) { return -3.0 * x; }, 0.0, kInf, 0.5) ==
        doctest::Approx(-std::log(3.0)).epsilon(1e-11));
}

TEST_CASE("locate_mass finds the peak") {
  auto w = locate_mass([](double x) { return -0.5 * sq(x - 40.0); }, -kInf, kInf, 0.0);
  CHECK(w.peak_x == doctest::Approx(40.0).epsilon(1e-6));
  CHECK(w.peak_log == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(w.lo < 35.0);
  CHECK(w.hi > 45.0);
}

TEST_CASE("solve_increasing") {
  CHECK(solve_increasing([](double t) { return t * t * t; }, 27.0, 0.0, 10.0) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(solve_increasing([](double t) { return std::exp(t); }, 5.0, -10.0, 10.0) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-12));
  // steep then flat
  auto g = [](double t) { return t < 1.0 ? t : 1.0 + 1e-3 * (t - 1.0); };
  CHECK(solve_increasing(g, 1.0005, 0.0, 10.0) == doctest::Approx(1.5).epsilon(1e-6));
  // target at a bracket endpoint
  CHECK(solve_increasing([](double t) { return t; }, 2.0, -2.0, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-10));
}
