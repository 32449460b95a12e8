#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "cramerdepth/funcstats.hpp"
#include "cramerdepth/util.hpp"

using namespace cramerdepth;

namespace {

void check_triple(const StatReport& r, double e, double v, double en, double tol) {
  CHECK(r.e_cramer == doctest::Approx(e).epsilon(tol));
  CHECK(r.var_cramer == doctest::Approx(v).epsilon(tol));
  CHECK(r.exp_neg_cramer == doctest::Approx(en).epsilon(tol));
}

}  // namespace

TEST_CASE("rate function moments of the classic laws") {
  check_triple(stat_report(ScalarDistribution::gaussian(0.0, 1.0)), 0.5, 0.5,
               0.70710678118654752, 1e-8);
  check_triple(stat_report(ScalarDistribution::exponential(1.0)),
               0.57721566490153286, 0.64493406684822644, 0.67957045711476131, 1e-8);
  check_triple(stat_report(ScalarDistribution::laplace(1.0)), 0.33556715734198735,
               0.30801567653310597, 0.78727171014519963, 1e-8);
  check_triple(stat_report(ScalarDistribution::uniform(-1.0, 1.0)),
               0.76066140150781262, 0.90013132286353385, 0.61035119676336393, 1e-8);
  check_triple(stat_report(ScalarDistribution::poisson(1.0)), 0.57340280912262024,
               0.34115046982002196, 0.64625211082616821, 1e-8);
}

TEST_CASE("depth exponent moments are universal for continuous laws") {
  for (const auto& d :
       {ScalarDistribution::gaussian(3.0, 0.2), ScalarDistribution::laplace(2.0),
        ScalarDistribution::uniform(0.0, 5.0), ScalarDistribution::gamma(2.0),
        ScalarDistribution::two_exp_mixture_tail(0.4, 1.0, 3.0)}) {
    auto r = stat_report(d);
    CHECK(r.e_omega == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-8));
    CHECK(r.var_omega == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.tau_param ==
          doctest::Approx(1.0 / sq(1.0 + std::log(2.0))).epsilon(1e-7));
  }
}

TEST_CASE("rate statistics are affine invariant") {
  auto base = stat_report(ScalarDistribution::laplace(1.0));
  // 3X - 7 for laplace X is an exp-linear grid law, so exactly representable
  auto moved = stat_report(
      ScalarDistribution::grid_density({-7.0 - 240.0, -7.0, -7.0 + 240.0},
                                       {-80.0, 0.0, -80.0}));
  // the grid handle inverts its cdf segment by segment: ~1e-6 quantile noise
  CHECK(moved.e_cramer == doctest::Approx(base.e_cramer).epsilon(1e-5));
  CHECK(moved.var_cramer == doctest::Approx(base.var_cramer).epsilon(1e-5));
  CHECK(moved.exp_neg_cramer == doctest::Approx(base.exp_neg_cramer).epsilon(1e-5));
  CHECK(moved.e_omega == doctest::Approx(base.e_omega).epsilon(1e-5));

  auto g2 = stat_report(ScalarDistribution::gaussian(-11.0, 0.01));
  check_triple(g2, 0.5, 0.5, 0.70710678118654752, 1e-8);
}

TEST_CASE("gaussian in dimension n") {
  for (int n : {2, 5}) {
    auto r = stat_report(RadialDistribution::gaussian(n));
    CHECK(r.e_cramer == doctest::Approx(0.5 * n).epsilon(1e-8));
    CHECK(r.var_cramer == doctest::Approx(0.5 * n).epsilon(1e-7));
    CHECK(r.exp_neg_cramer == doctest::Approx(std::pow(2.0, -0.5 * n)).epsilon(1e-8));
  }
  // dimension one radial exponential is a scaled two-sided exponential
  auto r1 = stat_report(RadialDistribution::radial_exp(1));
  CHECK(r1.exp_neg_cramer == doctest::Approx(0.78727171014519963).epsilon(1e-8));
}

TEST_CASE("every report keeps E Lambda* below E omega") {
  for (const auto& d :
       {ScalarDistribution::gaussian(0.0, 1.0), ScalarDistribution::exponential(1.0),
        ScalarDistribution::uniform(-1.0, 1.0), ScalarDistribution::poisson(1.0),
        ScalarDistribution::geometric(0.3), ScalarDistribution::gamma(3.0)}) {
    auto r = stat_report(d);
    CHECK(r.e_cramer <= r.e_omega + 1e-9);
  }
  auto rr = stat_report(RadialDistribution::radial_exp(5));
  CHECK(rr.e_cramer <= rr.e_omega + 1e-9);
}

TEST_CASE("depth moments") {
  // q = min(U, 1-U) for continuous laws, so E q^p = 1/(2^p (p+1)) exactly
  for (const auto& d :
       {ScalarDistribution::gaussian(0.0, 1.0), ScalarDistribution::gamma(2.0)})
    for (double p : {-0.9, -0.5, 0.5, 1.0, 2.0})
      CHECK(depth_moment(d, p) ==
            doctest::Approx(1.0 / (std::pow(2.0, p) * (p + 1.0))).epsilon(1e-8));
  // the same expression is only an upper bound once atoms appear
  for (double eps : {0.3, 0.7, 1.0})
    CHECK(depth_moment(ScalarDistribution::poisson(1.0), eps - 1.0) <=
          std::pow(2.0, 1.0 - eps) / eps + 1e-10);
  CHECK_THROWS_AS(depth_moment(ScalarDistribution::gaussian(0.0, 1.0), -1.0),
                  std::domain_error);
}

TEST_CASE("rate lower bounds from omega") {
  // two-sided exponential witness: equality at x = 2 ln 2, eps = 1/ln 2
  double om = 2.0 * std::log(2.0);
  double eps = 1.0 / std::log(2.0);
  CHECK(depth_rate_bound(om, eps) ==
        doctest::Approx(0.059660101141609634).epsilon(1e-12));
  CHECK(depth_rate_bound(om, eps) ==
        doctest::Approx(om - 1.0 - std::log(om)).epsilon(1e-12));

  CHECK(depth_rate_bound_opt(0.05) ==
        doctest::Approx(0.46855264774608973).epsilon(1e-12));
  // the optimized form only holds below 1/(2e)
  CHECK_THROWS_AS(depth_rate_bound_opt(0.25), std::domain_error);
  CHECK_THROWS_AS(depth_rate_bound_opt(0.0), std::domain_error);
  CHECK_THROWS_AS(depth_rate_bound(1.0, 0.0), std::domain_error);
  // large eps is allowed: the maximizer leaves (0,1) at moderate omega
  CHECK(depth_rate_bound(om, 1.2) < depth_rate_bound(om, eps) + 1e-12);
}

TEST_CASE("beta digamma formulas") {
  auto f = beta_digamma_stats(10, 0.0);
  CHECK(f.e_omega_formula == doctest::Approx(12.558333333333334).epsilon(1e-12));
  CHECK(f.e_omega2_formula == doctest::Approx(201.98597222222219).epsilon(1e-10));
  // MC agreement at a loose scale
  auto mc = stat_report(RadialDistribution::beta(10, 0.0), monte_carlo_method(40000, 3));
  CHECK(std::fabs(mc.e_omega - f.e_omega_formula) < 5.0 * std::log(10.0));
}

TEST_CASE("products split the rate and lose the depth reduction") {
  std::vector<ScalarDistribution> fs = {ScalarDistribution::gaussian(0.0, 1.0),
                                        ScalarDistribution::gaussian(2.0, 0.5),
                                        ScalarDistribution::gaussian(-1.0, 3.0)};
  CHECK(separability_product(fs) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-8));

  std::vector<ScalarDistribution> mixed = {ScalarDistribution::laplace(1.0),
                                           ScalarDistribution::exponential(1.0)};
  CHECK(separability_product(mixed) ==
        doctest::Approx(0.78727171014519963 * 0.67957045711476131).epsilon(1e-7));

  auto rep = stat_report(ProductDistribution(mixed));
  CHECK(rep.e_cramer ==
        doctest::Approx(0.33556715734198735 + 0.57721566490153286).epsilon(1e-7));
  CHECK(rep.var_cramer ==
        doctest::Approx(0.30801567653310597 + 0.64493406684822644).epsilon(1e-7));
  CHECK(std::isnan(rep.e_omega));
  CHECK(std::isnan(rep.tau_param));
  CHECK(!rep.note.empty());
}

TEST_CASE("monte carlo reports agree with quadrature") {
  auto q = stat_report(ScalarDistribution::gaussian(0.0, 1.0));
  auto m = stat_report(ScalarDistribution::gaussian(0.0, 1.0),
                       monte_carlo_method(200000, 17));
  CHECK(m.method == StatMethodKind::MonteCarlo);
  CHECK(m.samples == 200000);
  CHECK(std::fabs(m.e_cramer - q.e_cramer) < 5.0 * m.se_e_cramer + 1e-4);
  CHECK(std::fabs(m.e_omega - q.e_omega) < 5.0 * m.se_e_omega + 1e-4);
  CHECK(std::fabs(m.exp_neg_cramer - q.exp_neg_cramer) <
        5.0 * m.se_exp_neg_cramer + 1e-4);
  CHECK(m.se_e_cramer > 0.0);
  // bitwise reproducible
  auto m2 = stat_report(ScalarDistribution::gaussian(0.0, 1.0),
                        monte_carlo_method(200000, 17));
  CHECK(m.e_cramer == m2.e_cramer);
  CHECK(m.var_omega == m2.var_omega);
}

TEST_CASE("sphere report diverges") {
  CHECK_THROWS_AS(stat_report(RadialDistribution::sphere_scaled(3, 1.0)),
                  std::domain_error);
}

TEST_CASE("battery passes on the reference laws") {
  for (const Distribution& d :
       {Distribution(ScalarDistribution::gaussian(0.0, 1.0)),
        Distribution(ScalarDistribution::laplace(1.0)),
        Distribution(RadialDistribution::gaussian(5)),
        Distribution(RadialDistribution::radial_exp(4)),
        Distribution(RadialDistribution::beta(6, 1.0))}) {
    auto rep = verify_battery(d);
    INFO(rep.label);
    CHECK(rep.all_passed());
    CHECK(rep.checks.size() == 10);
  }
}

TEST_CASE("battery gates checks on the class tags") {
  auto g = verify_battery(RadialDistribution::gaussian(4));
  auto* vsg = g.find("exp-neg-vs-gaussian");
  REQUIRE(vsg != nullptr);
  CHECK(vsg->status == CheckStatus::Pass);
  CHECK(std::fabs(vsg->margin) < 1e-6);  // equality case
  CHECK(g.find("poincare-variance")->status == CheckStatus::Pass);
  CHECK(g.find("radius-sq-convex-order")->status == CheckStatus::Pass);

  auto re = verify_battery(RadialDistribution::radial_exp(3));
  CHECK(re.find("radius-sq-convex-order")->status == CheckStatus::Skipped);
  CHECK(re.find("e-cramer-band-lcconv")->status == CheckStatus::Pass);

  auto be = verify_battery(RadialDistribution::beta(4, 1.0));
  CHECK(be.find("poincare-variance")->status == CheckStatus::Skipped);
  CHECK(be.find("radius-sq-convex-order")->status == CheckStatus::Pass);

  auto sp = verify_battery(RadialDistribution::sphere_scaled(3, 1.0));
  CHECK(sp.all_passed());
  for (const auto& c : sp.checks) {
    CHECK(c.status == CheckStatus::Skipped);
    CHECK(!c.note.empty());
  }

  auto pr = verify_battery(ProductDistribution({ScalarDistribution::gaussian(0.0, 1.0),
                                                ScalarDistribution::laplace(1.0)}));
  CHECK(pr.all_passed());
  for (const auto& c : pr.checks) CHECK(c.status == CheckStatus::Skipped);

  // heavy mixture tail: not log-concave, so the rate bounds are not claimed
  auto mx = verify_battery(ScalarDistribution::two_exp_mixture_tail(0.2, 1.0, 6.0));
  CHECK(mx.all_passed());
  CHECK(mx.find("rate-depth-lower-grid")->status == CheckStatus::Skipped);
  CHECK(mx.find("exp-neg-upper-1d")->status == CheckStatus::Skipped);
}

TEST_CASE("battery is deterministic") {
  auto a = verify_battery(ScalarDistribution::gaussian(0.0, 1.0));
  auto b = verify_battery(ScalarDistribution::gaussian(0.0, 1.0));
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].status == b.checks[i].status);
    // skipped checks carry NaN margins; bitwise equality covers those too
    CHECK(std::memcmp(&a.checks[i].margin, &b.checks[i].margin, sizeof(double)) == 0);
  }
  // names arrive sorted
  for (std::size_t i = 1; i < a.checks.size(); ++i)
    CHECK(a.checks[i - 1].name < a.checks[i].name);
}

TEST_CASE("variance and expectation bounds") {
  auto r = var_exp_bounds_check(ScalarDistribution::gaussian(0.0, 1.0));
  CHECK(r.pass);
  CHECK(r.var_cramer < 4.0);
  CHECK(r.e_cramer > 0.1484);
  CHECK(std::fabs(r.proof_integral_sq - 3.8667473750380920) < 1e-8);
  CHECK(std::fabs(r.proof_integral_lower - 0.14849550677592205) < 1e-8);
  CHECK(r.quoted_constant == doctest::Approx(3.1736001944781469).epsilon(1e-12));
  CHECK(!r.note.empty());

  for (const auto& d : {ScalarDistribution::laplace(1.0),
                        ScalarDistribution::uniform(-1.0, 1.0),
                        ScalarDistribution::gamma(2.0)})
    CHECK(var_exp_bounds_check(d).pass);
}
