#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>

#include <doctest.h>

#include "cramerdepth/json_io.hpp"
#include "cramerdepth/util.hpp"

using namespace cramerdepth;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(CRAMERDEPTH_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {};
  CliResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, got);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("distribution specs parse strictly") {
  auto g1 = parse_dist_spec(json::parse(R"({"family":"gaussian","dim":1})"));
  CHECK(dist_label(g1) == "gaussian(0,1)");
  auto g3 = parse_dist_spec(json::parse(R"({"family":"gaussian","dim":3})"));
  CHECK(std::holds_alternative<RadialDistribution>(g3));
  CHECK(dist_dim(g3) == 3);
  auto lp = parse_dist_spec(
      json::parse(R"({"family":"laplace","dim":1,"params":{"scale":2.0}})"));
  CHECK(dist_label(lp) == "laplace(2)");
  auto be = parse_dist_spec(
      json::parse(R"({"family":"beta","dim":5,"params":{"beta":1.5}})"));
  CHECK(dist_label(be) == "beta_n5_b1.5");
  auto po = parse_dist_spec(
      json::parse(R"({"family":"poisson","dim":1,"params":{"lambda":2.0}})"));
  CHECK(std::get<ScalarDistribution>(po).discrete());
  auto pr = parse_dist_spec(json::parse(
      R"({"family":"product","dim":2,"factors":[
           {"family":"uniform","dim":1},{"family":"exponential","dim":1}]})"));
  CHECK(std::holds_alternative<ProductDistribution>(pr));
  auto gd = parse_dist_spec(json::parse(
      R"({"family":"grid_density","dim":1,
          "params":{"x":[-1.0,0.0,1.0],"log_density":[-2.0,0.0,-2.0]}})"));
  CHECK(std::get<ScalarDistribution>(gd).log_concave());
}

TEST_CASE("spec rejections name the offending field") {
  auto parse = [](const char* text) { return parse_dist_spec(json::parse(text)); };
  CHECK_THROWS_WITH_AS(parse(R"({"family":"cauchy","dim":1})"),
                       doctest::Contains("cauchy"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse(R"({"family":"gaussian","dim":1,"params":{"sigma":2.0}})"),
      doctest::Contains("sigma"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"family":"gamma","dim":1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"family":"uniform","dim":2})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"family":"gaussian","dim":0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"family":"product","dim":1})"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse(R"({"family":"product","dim":2,"factors":[
                 {"family":"gaussian","dim":3},{"family":"gaussian","dim":1}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"family":"beta","dim":3})"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(R"({"dim":1})"), doctest::Contains("family"),
                       std::invalid_argument);
}

TEST_CASE("spec text loads from strings and files") {
  auto j = load_spec_text(R"({"family":"gaussian","dim":1})");
  CHECK(j["family"] == "gaussian");
  std::string path = "/tmp/cramerdepth_spec_test.json";
  {
    std::ofstream f(path);
    f << R"({"family":"laplace","dim":1})";
  }
  CHECK(load_spec_text(path)["family"] == "laplace");
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(load_spec_text("{not json"),
                       doctest::Contains("spec is not valid JSON"),
                       std::invalid_argument);
}

TEST_CASE("sim config parsing") {
  auto cfg = parse_sim_config(json::parse(R"({"dist":{"family":"gaussian","dim":2}})"));
  CHECK(cfg.n == 2);
  CHECK(cfg.trials == 20);
  CHECK(cfg.probe_count == 50);
  CHECK(cfg.delta == 0.2);
  auto full = parse_sim_config(json::parse(
      R"({"dist":{"family":"uniform","dim":1},"n":3,"vertex_counts":[5,9],
          "trials":7,"probes":11,"delta":0.3,"seed":99})"));
  CHECK(full.n == 3);
  CHECK(full.vertex_counts == std::vector<long>{5, 9});
  CHECK(full.seed == 99);
  CHECK_THROWS_AS(
      parse_sim_config(json::parse(R"({"dist":{"family":"uniform","dim":1},"x":1})")),
      std::invalid_argument);
}

TEST_CASE("report serialization") {
  auto rep = stat_report(ProductDistribution(
      {ScalarDistribution::gaussian(0.0, 1.0), ScalarDistribution::laplace(1.0)}));
  auto j = stat_report_json(rep);
  CHECK(j["e_omega"].is_null());
  CHECK(j["tau_param"].is_null());
  CHECK(j["e_cramer"].is_number());
  CHECK(j["method"] == "quadrature");
  CHECK(!j["note"].get<std::string>().empty());

  auto bj = battery_report_json(verify_battery(ScalarDistribution::gaussian(0.0, 1.0)));
  CHECK(bj["all_passed"] == true);
  CHECK(bj["checks"].size() == 10);
  CHECK(bj["checks"][0]["name"] == "beta-tau-two-sided");
}

TEST_CASE("csv formatting is byte exact") {
  CHECK(csv_table({"a", "b"}, {{0.5, 1.0}, {0.25, -3.0}}) ==
        "a,b\n0.5,1\n0.25,-3\n");
  CHECK(csv_table({"x"}, {{1.0 / 3.0}}) == "x\n0.33333333333333331\n");
  CHECK_THROWS_AS(csv_table({"a", "b"}, {{1.0}}), std::invalid_argument);
}

TEST_CASE("cli stats") {
  auto r = run_cli("stats --dist '{\"family\":\"gaussian\",\"dim\":1}'");
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["exp_neg_cramer"].get<double>() ==
        doctest::Approx(0.70710678118654752).epsilon(1e-6));
  CHECK(j["label"] == "gaussian(0,1)");
  auto again = run_cli("stats --dist '{\"family\":\"gaussian\",\"dim\":1}'");
  CHECK(again.out == r.out);
}

TEST_CASE("cli verify") {
  auto r = run_cli("verify --dist '{\"family\":\"laplace\",\"dim\":1}'");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["all_passed"] == true);
}

TEST_CASE("cli conjugate grid matches the closed form") {
  auto r = run_cli(
      "conjugate --dist '{\"family\":\"radial_exp\",\"dim\":3}' --grid 0:5:26 "
      "--format csv");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,cramer,tilt");
  int rows = 0;
  while (std::getline(in, line)) {
    double x, v, tilt;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &v, &tilt) == 3);
    double ref = 0.0;
    if (x > 0.0) {
      double t = 4.0 * (std::sqrt(1.0 + x * x) - 1.0) / (2.0 * x);
      ref = x * t + 2.0 * std::log(1.0 - t * t / 4.0);
    }
    CHECK(v == doctest::Approx(ref).epsilon(1e-8));
    ++rows;
  }
  CHECK(rows == 26);
}

TEST_CASE("cli depth grid") {
  auto r = run_cli(
      "depth --dist '{\"family\":\"gaussian\",\"dim\":1}' --grid -2:2:5 --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("x,q,omega") == 0);
  CHECK(r.out.find("0.5") != std::string::npos);
}

TEST_CASE("cli betadist") {
  auto r = run_cli("betadist --n 10 --beta 0 --samples 20000 --seed 3");
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["e_omega_formula"].get<double>() ==
        doctest::Approx(12.558333333333334).epsilon(1e-10));
  CHECK(j["abs_err_e_omega"].get<double>() < 5.0 * std::log(10.0));
}

TEST_CASE("cli simulate and output files") {
  std::string out = "/tmp/cramerdepth_sim_test.json";
  auto r = run_cli("simulate --dist '{\"family\":\"uniform\",\"dim\":1}' --n 1 "
                   "--N 2,5 --trials 10 --probes 20 --out " + out);
  REQUIRE(r.code == 0);
  std::ifstream f(out);
  REQUIRE(f.good());
  json j;
  f >> j;
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["n_vertices"] == 2);
  std::remove(out.c_str());
}

TEST_CASE("cli usage errors exit with 2") {
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("stats").code == 2);  // missing --dist
  CHECK(run_cli("stats --dist '{\"family\":\"nope\",\"dim\":1}'").code == 2);
  CHECK(run_cli("stats --dist '{not json'").code == 2);
  CHECK(run_cli("conjugate --dist '{\"family\":\"product\",\"dim\":1,\"factors\":"
                "[{\"family\":\"uniform\",\"dim\":1}]}' --grid 0:1:5").code == 2);
  CHECK(run_cli("conjugate --dist '{\"family\":\"gaussian\",\"dim\":1}' "
                "--grid 5:0:10").code == 2);
  CHECK(run_cli("stats --dist '{\"family\":\"gaussian\",\"dim\":1}' "
                "--format yaml").code == 2);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("cli report table") {
  auto r = run_cli("report --n 2 --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("n,exp_neg_cramer,dim_root") == 0);
}
