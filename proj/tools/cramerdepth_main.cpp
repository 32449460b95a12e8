#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cramerdepth/cramer.hpp"
#include "cramerdepth/cumulant.hpp"
#include "cramerdepth/depth.hpp"
#include "cramerdepth/dist.hpp"
#include "cramerdepth/funcstats.hpp"
#include "cramerdepth/json_io.hpp"
#include "cramerdepth/polytope.hpp"
#include "cramerdepth/util.hpp"

namespace cd = cramerdepth;

namespace {

struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  int count = 101;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.start >> c1 >> g.stop >> c2 >> g.count) || c1 != ':' || c2 != ':' ||
      g.count < 2 || !(g.stop > g.start))
    throw std::invalid_argument("--grid expects start:stop:count with stop > start");
  return g;
}

std::vector<long> parse_vertex_counts(const std::string& text) {
  std::vector<long> out;
  if (text.rfind("logspace:", 0) == 0) {
    double a = 0, b = 0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text.substr(9));
    if (!(in >> a >> c1 >> b >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2 ||
        !(b > a) || !(a > 0))
      throw std::invalid_argument("--N expects logspace:a:b:count with 0 < a < b");
    for (int j = 0; j < count; ++j) {
      long N = std::lround(std::exp(std::log(a) + (std::log(b) - std::log(a)) * j /
                                                      (count - 1)));
      if (out.empty() || N > out.back()) out.push_back(N);
    }
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stol(tok));
  }
  if (out.empty()) throw std::invalid_argument("--N lists no vertex counts");
  return out;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + out_path);
  out << payload;
}

std::string grid_payload(const std::string& label,
                         const std::vector<std::string>& cols,
                         const std::vector<std::vector<double>>& rows,
                         const std::string& format) {
  if (format == "csv") return cd::csv_table(cols, rows);
  cd::json j;
  j["label"] = label;
  j["columns"] = cols;
  cd::json jr = cd::json::array();
  for (const auto& row : rows) {
    cd::json r = cd::json::array();
    for (double v : row) r.push_back(std::isfinite(v) ? cd::json(v) : cd::json(nullptr));
    jr.push_back(r);
  }
  j["rows"] = jr;
  return j.dump(2) + "\n";
}

cd::Distribution load_dist(const std::string& spec) {
  return cd::parse_dist_spec(cd::load_spec_text(spec));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cramer transform, half-space depth and random polytope toolkit"};
  app.require_subcommand(1);

  std::string dist_spec, out_path, format = "json", grid_text, n_text;
  int dim = 0, trials = 100, probes = 100, table_n = 8;
  long samples = 200000;
  double beta = 0.0, delta = 0.2;
  std::uint64_t seed = 1;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  auto* conj = app.add_subcommand("conjugate", "tabulate x, Lambda*(x), tilt");
  conj->add_option("--dist", dist_spec, "distribution spec (JSON path or inline)")
      ->required();
  conj->add_option("--grid", grid_text, "start:stop:count")->required();
  add_io(conj);

  auto* dep = app.add_subcommand("depth", "tabulate x, q(x), omega(x)");
  dep->add_option("--dist", dist_spec, "distribution spec")->required();
  dep->add_option("--grid", grid_text, "start:stop:count")->required();
  add_io(dep);

  auto* stats = app.add_subcommand("stats", "Lambda* and omega statistics");
  stats->add_option("--dist", dist_spec, "distribution spec")->required();
  add_io(stats);

  auto* verify = app.add_subcommand("verify", "run the inequality battery");
  verify->add_option("--dist", dist_spec, "distribution spec")->required();
  add_io(verify);

  auto* betad = app.add_subcommand("betadist", "digamma moment formulas vs MC");
  betad->add_option("--n", dim, "dimension (>= 2)")->required();
  betad->add_option("--beta", beta, "exponent (> -1)")->required();
  betad->add_option("--samples", samples, "MC sample count");
  betad->add_option("--seed", seed, "RNG seed");
  add_io(betad);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo E mu(K_N) at fixed counts");
  sim->add_option("--dist", dist_spec, "distribution spec")->required();
  sim->add_option("--n", dim, "ambient dimension")->required();
  sim->add_option("--N", n_text, "logspace:a:b:count or comma list")->required();
  sim->add_option("--trials", trials, "independent hulls per count");
  sim->add_option("--probes", probes, "membership probes per hull");
  sim->add_option("--delta", delta, "threshold level in (0,1)");
  sim->add_option("--seed", seed, "RNG seed");
  add_io(sim);

  auto* scan = app.add_subcommand("scan", "threshold scan with rho crossings");
  scan->add_option("--dist", dist_spec, "distribution spec")->required();
  scan->add_option("--n", dim, "ambient dimension")->required();
  scan->add_option("--N", n_text, "vertex counts (default: auto around exp(E Lambda*))");
  scan->add_option("--trials", trials, "independent hulls per count");
  scan->add_option("--probes", probes, "membership probes per hull");
  scan->add_option("--delta", delta, "threshold level in (0,1)");
  scan->add_option("--seed", seed, "RNG seed");
  add_io(scan);

  auto* report = app.add_subcommand("report", "exploratory comparison-law table");
  report->add_option("--n", table_n, "largest dimension tabulated");
  add_io(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (conj->parsed() || dep->parsed()) {
      cd::Distribution d = load_dist(dist_spec);
      GridSpec g = parse_grid(grid_text);
      if (std::holds_alternative<cd::ProductDistribution>(d))
        throw std::invalid_argument(
            "grids need a 1-D or rotationally invariant handle");
      std::vector<std::vector<double>> rows;
      if (conj->parsed()) {
        cd::Cramer cr(std::holds_alternative<cd::ScalarDistribution>(d)
                          ? cd::CumulantFn::from_scalar(
                                std::get<cd::ScalarDistribution>(d))
                          : cd::CumulantFn::from_radial(
                                std::get<cd::RadialDistribution>(d)));
        cd::TiltCache cache;
        for (int i = 0; i < g.count; ++i) {
          double x = g.start + (g.stop - g.start) * i / (g.count - 1);
          cd::ConjResult r = cr.conjugate(x, &cache);
          rows.push_back({x, r.value, r.tilt});
        }
        emit(grid_payload(cd::dist_label(d), {"x", "cramer", "tilt"}, rows, format),
             out_path);
      } else {
        for (int i = 0; i < g.count; ++i) {
          double x = g.start + (g.stop - g.start) * i / (g.count - 1);
          double q, w;
          if (const auto* sd = std::get_if<cd::ScalarDistribution>(&d)) {
            q = cd::depth_1d(*sd, x);
            w = cd::omega_1d(*sd, x);
          } else {
            const auto& rd = std::get<cd::RadialDistribution>(d);
            q = cd::depth_radial_at(rd, x);
            w = cd::omega_radial_at(rd, x);
          }
          rows.push_back({x, q, w});
        }
        emit(grid_payload(cd::dist_label(d), {"x", "q", "omega"}, rows, format),
             out_path);
      }
      return 0;
    }

    if (stats->parsed()) {
      cd::StatReport rep = cd::stat_report(load_dist(dist_spec));
      if (format == "csv") {
        emit(cd::csv_table({"e_cramer", "var_cramer", "exp_neg_cramer", "e_omega",
                            "var_omega", "beta_param", "tau_param"},
                           {{rep.e_cramer, rep.var_cramer, rep.exp_neg_cramer,
                             rep.e_omega, rep.var_omega, rep.beta_param,
                             rep.tau_param}}),
             out_path);
      } else {
        emit(cd::stat_report_json(rep).dump(2) + "\n", out_path);
      }
      return 0;
    }

    if (verify->parsed()) {
      cd::BatteryReport rep = cd::verify_battery(load_dist(dist_spec));
      emit(cd::battery_report_json(rep).dump(2) + "\n", out_path);
      return rep.all_passed() ? 0 : 1;
    }

    if (betad->parsed()) {
      cd::BetaDigamma f = cd::beta_digamma_stats(dim, beta);
      cd::StatMethod m = cd::monte_carlo_method(samples, seed);
      cd::StatReport mc =
          cd::stat_report(cd::RadialDistribution::beta(dim, beta), m);
      double e2_mc = mc.var_omega + mc.e_omega * mc.e_omega;
      cd::json j;
      j["n"] = dim;
      j["beta"] = beta;
      j["samples"] = samples;
      j["seed"] = seed;
      j["e_omega_formula"] = f.e_omega_formula;
      j["e_omega2_formula"] = f.e_omega2_formula;
      j["e_omega_mc"] = mc.e_omega;
      j["e_omega2_mc"] = e2_mc;
      j["abs_err_e_omega"] = std::fabs(f.e_omega_formula - mc.e_omega);
      j["abs_err_e_omega2"] = std::fabs(f.e_omega2_formula - e2_mc);
      emit(j.dump(2) + "\n", out_path);
      return 0;
    }

    if (sim->parsed() || scan->parsed()) {
      cd::SimConfig cfg;
      cfg.dist = load_dist(dist_spec);
      cfg.n = dim;
      cfg.trials = trials;
      cfg.probe_count = probes;
      cfg.delta = delta;
      cfg.seed = seed;
      if (!n_text.empty()) cfg.vertex_counts = parse_vertex_counts(n_text);
      cd::ThresholdReport rep =
          sim->parsed() ? cd::expected_measure_mc(cfg) : cd::threshold_scan(cfg);
      if (format == "csv")
        emit(cd::csv_scan_rows(rep), out_path);
      else
        emit(cd::threshold_report_json(rep).dump(2) + "\n", out_path);
      return 0;
    }

    // exploratory table: no inequality in any direction is asserted here
    if (report->parsed()) {
      if (table_n < 1) throw std::invalid_argument("--n must be at least 1");
      std::vector<std::vector<double>> rows;
      for (int n = 1; n <= table_n; ++n) {
        cd::StatReport rep = cd::stat_report(cd::RadialDistribution::radial_exp(n));
        rows.push_back({static_cast<double>(n), rep.exp_neg_cramer,
                        std::pow(rep.exp_neg_cramer, 1.0 / n)});
      }
      if (format == "csv") {
        emit(cd::csv_table({"n", "exp_neg_cramer", "dim_root"}, rows), out_path);
      } else {
        cd::json j;
        j["label"] = "exploratory";
        j["note"] = "dimension root of E exp(-Lambda*) for the comparison law";
        j["columns"] = std::vector<std::string>{"n", "exp_neg_cramer", "dim_root"};
        cd::json jr = cd::json::array();
        for (const auto& row : rows) jr.push_back(row);
        j["rows"] = jr;
        emit(j.dump(2) + "\n", out_path);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
