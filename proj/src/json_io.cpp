#include "cramerdepth/json_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cramerdepth/util.hpp"

namespace cramerdepth {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(where + ": expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      bad(where + ": unknown field \"" + item.key() + "\"");
}

double num_at(const json& p, const std::string& where, const std::string& key) {
  if (!p.contains(key)) bad(where + ": missing \"" + key + "\"");
  if (!p[key].is_number()) bad(where + ": \"" + key + "\" must be a number");
  return p[key].get<double>();
}

double num_or(const json& p, const std::string& where, const std::string& key,
              double dflt) {
  if (!p.contains(key)) return dflt;
  if (!p[key].is_number()) bad(where + ": \"" + key + "\" must be a number");
  return p[key].get<double>();
}

long int_at(const json& p, const std::string& where, const std::string& key) {
  if (!p.contains(key)) bad(where + ": missing \"" + key + "\"");
  if (!p[key].is_number_integer()) bad(where + ": \"" + key + "\" must be an integer");
  return p[key].get<long>();
}

std::vector<double> array_at(const json& p, const std::string& where,
                             const std::string& key) {
  if (!p.contains(key)) bad(where + ": missing \"" + key + "\"");
  if (!p[key].is_array() || p[key].empty())
    bad(where + ": \"" + key + "\" must be a nonempty array");
  std::vector<double> out;
  for (const auto& v : p[key]) {
    if (!v.is_number()) bad(where + ": \"" + key + "\" must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ScalarDistribution parse_scalar(const std::string& family, const json& params,
                                const std::string& where) {
  auto only = [&](std::set<std::string> keys) { check_keys(params, where, keys); };
  if (family == "uniform") {
    only({"a", "b"});
    return ScalarDistribution::uniform(num_or(params, where, "a", -1.0),
                                       num_or(params, where, "b", 1.0));
  }
  if (family == "gaussian") {
    only({"mean", "sd"});
    return ScalarDistribution::gaussian(num_or(params, where, "mean", 0.0),
                                        num_or(params, where, "sd", 1.0));
  }
  if (family == "laplace") {
    only({"scale"});
    return ScalarDistribution::laplace(num_or(params, where, "scale", 1.0));
  }
  if (family == "exponential") {
    only({"rate"});
    return ScalarDistribution::exponential(num_or(params, where, "rate", 1.0));
  }
  if (family == "gamma") {
    only({"alpha"});
    return ScalarDistribution::gamma(num_at(params, where, "alpha"));
  }
  if (family == "two_exp_mixture") {
    only({"p", "lambda1", "lambda2"});
    return ScalarDistribution::two_exp_mixture_tail(num_at(params, where, "p"),
                                                    num_at(params, where, "lambda1"),
                                                    num_at(params, where, "lambda2"));
  }
  if (family == "grid_density") {
    only({"x", "log_density"});
    return ScalarDistribution::grid_density(array_at(params, where, "x"),
                                            array_at(params, where, "log_density"));
  }
  if (family == "poisson") {
    only({"lambda"});
    return ScalarDistribution::poisson(num_at(params, where, "lambda"));
  }
  if (family == "geometric") {
    only({"p"});
    return ScalarDistribution::geometric(num_at(params, where, "p"));
  }
  if (family == "binomial") {
    only({"m", "p"});
    long m = int_at(params, where, "m");
    return ScalarDistribution::binomial(static_cast<int>(m),
                                        num_at(params, where, "p"));
  }
  if (family == "discrete_log_concave") {
    only({"k0", "pmf"});
    long k0 = params.contains("k0") ? int_at(params, where, "k0") : 0;
    return ScalarDistribution::discrete_log_concave(k0, array_at(params, where, "pmf"));
  }
  bad(where + ": \"" + family + "\" is not a 1-D family");
}

RadialDistribution parse_radial(const std::string& family, int dim,
                                const json& params, const std::string& where) {
  auto only = [&](std::set<std::string> keys) { check_keys(params, where, keys); };
  if (family == "gaussian") {
    only({});
    return RadialDistribution::gaussian(dim);
  }
  if (family == "radial_exp") {
    only({});
    return RadialDistribution::radial_exp(dim);
  }
  if (family == "beta") {
    only({"beta"});
    return RadialDistribution::beta(dim, num_at(params, where, "beta"));
  }
  if (family == "sphere") {
    only({"radius"});
    return RadialDistribution::sphere_scaled(dim, num_at(params, where, "radius"));
  }
  if (family == "power_exp") {
    only({"p"});
    return RadialDistribution::power_exp(dim, num_at(params, where, "p"));
  }
  if (family == "radial_grid") {
    only({"r", "log_profile"});
    return RadialDistribution::radial_grid(dim, array_at(params, where, "r"),
                                           array_at(params, where, "log_profile"));
  }
  bad(where + ": \"" + family + "\" is not a rotationally invariant family");
}

const std::set<std::string> kRadialOnly{"radial_exp", "beta", "sphere", "power_exp",
                                        "radial_grid"};

}  // namespace

Distribution parse_dist_spec(const json& spec) {
  check_keys(spec, "dist", {"family", "dim", "params", "factors"});
  if (!spec.contains("family") || !spec["family"].is_string())
    bad("dist: \"family\" must be a string");
  const std::string family = spec["family"].get<std::string>();

  if (family == "product") {
    if (spec.contains("params")) bad("dist: product takes \"factors\", not \"params\"");
    if (!spec.contains("factors") || !spec["factors"].is_array() ||
        spec["factors"].empty())
      bad("dist: product needs a nonempty \"factors\" array");
    if (spec.contains("dim") &&
        spec["dim"].get<long>() != static_cast<long>(spec["factors"].size()))
      bad("dist: product \"dim\" must match the factor count");
    std::vector<ScalarDistribution> factors;
    int idx = 0;
    for (const auto& f : spec["factors"]) {
      std::string where = "factors[" + std::to_string(idx++) + "]";
      check_keys(f, where, {"family", "dim", "params"});
      if (!f.contains("family") || !f["family"].is_string())
        bad(where + ": \"family\" must be a string");
      if (f.contains("dim") && f["dim"].get<long>() != 1)
        bad(where + ": factors must be 1-D");
      factors.push_back(parse_scalar(f["family"].get<std::string>(),
                                     f.contains("params") ? f["params"] : json::object(),
                                     where));
    }
    return ProductDistribution(std::move(factors));
  }

  if (spec.contains("factors")) bad("dist: \"factors\" is only valid for product");
  long dim = 1;
  if (spec.contains("dim")) {
    if (!spec["dim"].is_number_integer() || spec["dim"].get<long>() < 1)
      bad("dist: \"dim\" must be a positive integer");
    dim = spec["dim"].get<long>();
  }
  const json params = spec.contains("params") ? spec["params"] : json::object();
  const bool radial = kRadialOnly.count(family) || (family == "gaussian" && dim >= 2);
  if (radial) return parse_radial(family, static_cast<int>(dim), params, "params");
  if (dim != 1) bad("dist: family \"" + family + "\" requires dim = 1");
  return parse_scalar(family, params, "params");
}

json load_spec_text(const std::string& path_or_inline) {
  std::string text = path_or_inline;
  {
    std::ifstream in(path_or_inline);
    if (in.good()) {
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("spec is not valid JSON: ") + e.what());
  }
}

SimConfig parse_sim_config(const json& spec) {
  check_keys(spec, "config",
             {"dist", "n", "vertex_counts", "trials", "probes", "delta", "seed"});
  if (!spec.contains("dist")) bad("config: missing \"dist\"");
  SimConfig cfg;
  cfg.dist = parse_dist_spec(spec["dist"]);
  if (spec.contains("n")) cfg.n = static_cast<int>(int_at(spec, "config", "n"));
  if (spec.contains("trials"))
    cfg.trials = static_cast<int>(int_at(spec, "config", "trials"));
  if (spec.contains("probes"))
    cfg.probe_count = static_cast<int>(int_at(spec, "config", "probes"));
  if (spec.contains("delta")) cfg.delta = num_at(spec, "config", "delta");
  if (spec.contains("seed"))
    cfg.seed = static_cast<std::uint64_t>(int_at(spec, "config", "seed"));
  if (spec.contains("vertex_counts")) {
    if (!spec["vertex_counts"].is_array())
      bad("config: \"vertex_counts\" must be an array of integers");
    for (const auto& v : spec["vertex_counts"]) {
      if (!v.is_number_integer())
        bad("config: \"vertex_counts\" must be an array of integers");
      cfg.vertex_counts.push_back(v.get<long>());
    }
  }
  return cfg;
}

namespace {

json num_or_null(double v) {
  if (!finite(v)) return nullptr;
  return v;
}

const char* method_name(StatMethodKind k) {
  return k == StatMethodKind::Quadrature ? "quadrature" : "monte_carlo";
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    default:
      return "skipped";
  }
}

}  // namespace

json stat_report_json(const StatReport& rep) {
  json j;
  j["label"] = rep.label;
  j["method"] = method_name(rep.method);
  if (rep.method == StatMethodKind::MonteCarlo) j["samples"] = rep.samples;
  j["e_cramer"] = num_or_null(rep.e_cramer);
  j["var_cramer"] = num_or_null(rep.var_cramer);
  j["exp_neg_cramer"] = num_or_null(rep.exp_neg_cramer);
  j["e_omega"] = num_or_null(rep.e_omega);
  j["var_omega"] = num_or_null(rep.var_omega);
  j["beta_param"] = num_or_null(rep.beta_param);
  j["tau_param"] = num_or_null(rep.tau_param);
  json se;
  se["e_cramer"] = num_or_null(rep.se_e_cramer);
  se["var_cramer"] = num_or_null(rep.se_var_cramer);
  se["exp_neg_cramer"] = num_or_null(rep.se_exp_neg_cramer);
  se["e_omega"] = num_or_null(rep.se_e_omega);
  se["var_omega"] = num_or_null(rep.se_var_omega);
  se["beta_param"] = num_or_null(rep.se_beta_param);
  se["tau_param"] = num_or_null(rep.se_tau_param);
  j["se"] = se;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

json battery_report_json(const BatteryReport& rep) {
  json j;
  j["label"] = rep.label;
  j["all_passed"] = rep.all_passed();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json cj;
    cj["name"] = c.name;
    cj["status"] = status_name(c.status);
    cj["margin"] = num_or_null(c.margin);
    cj["location"] = num_or_null(c.location);
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j;
}

json threshold_report_json(const ThresholdReport& rep) {
  json j;
  j["label"] = rep.label;
  j["delta"] = rep.delta;
  j["e_cramer_ref"] = num_or_null(rep.e_cramer_ref);
  j["rho1_hat"] = num_or_null(rep.rho1_hat);
  j["rho2_hat"] = num_or_null(rep.rho2_hat);
  j["rho1_ratio"] = num_or_null(rep.rho1_ratio);
  j["rho2_ratio"] = num_or_null(rep.rho2_ratio);
  j["status"] = rep.status;
  j["flagged"] = rep.flagged;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json rj;
    rj["n_vertices"] = r.n_vertices;
    rj["estimate"] = r.estimate;
    rj["ci_halfwidth"] = r.ci_halfwidth;
    rj["dfm_upper"] = r.dfm_upper;
    rj["dfm_lower"] = r.dfm_lower;
    rj["trial_stddev"] = r.trial_stddev;
    rj["indeterminate"] = r.indeterminate;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j;
}

json rho_bounds_json(const RhoBounds& b) {
  json j;
  j["rho1_lower"] = num_or_null(b.rho1_lower);
  j["rho2_upper"] = num_or_null(b.rho2_upper);
  j["rho1_valid"] = b.rho1_valid;
  j["rho2_valid"] = b.rho2_valid;
  j["note"] = b.note;
  return j;
}

std::string csv_table(const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < headers.size(); ++i)
    out << (i ? "," : "") << headers[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != headers.size())
      throw std::invalid_argument("csv_table: row arity does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << fmt17(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string csv_scan_rows(const ThresholdReport& rep) {
  std::ostringstream out;
  out << "N,estimate,ci_halfwidth,dfm_upper,dfm_lower\n";
  for (const auto& r : rep.rows)
    out << r.n_vertices << "," << fmt17(r.estimate) << "," << fmt17(r.ci_halfwidth)
        << "," << fmt17(r.dfm_upper) << "," << fmt17(r.dfm_lower) << "\n";
  return out.str();
}

}  // namespace cramerdepth
