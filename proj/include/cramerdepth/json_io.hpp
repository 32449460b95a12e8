#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cramerdepth/dist.hpp"
#include "cramerdepth/funcstats.hpp"
#include "cramerdepth/polytope.hpp"

namespace cramerdepth {

using json = nlohmann::ordered_json;

// Strict distribution spec: {"family": ..., "dim": ..., "params": {...}} with
// "factors" in place of "params" for products. Unknown families, unknown
// keys, wrong types and out-of-range values all throw std::invalid_argument
// naming the offending field; nothing is silently ignored.
//
//   family        dim      params
//   uniform        1       a, b                  (default -1, 1)
//   gaussian       1       mean, sd              (default 0, 1)
//   gaussian       >=2     -                     (rotationally invariant)
//   laplace        1       scale                 (default 1)
//   exponential    1       rate                  (default 1)
//   gamma          1       alpha
//   two_exp_mixture 1      p, lambda1, lambda2
//   grid_density   1       x[], log_density[]
//   poisson        1       lambda
//   geometric      1       p
//   binomial       1       m, p
//   discrete_log_concave 1 k0 (default 0), pmf[]
//   radial_exp     >=1     -
//   beta           >=1     beta
//   sphere         >=1     radius
//   power_exp      >=1     p
//   radial_grid    >=1     r[], log_profile[]
//   product        -       factors: [scalar specs]
Distribution parse_dist_spec(const json& spec);

// Accepts a file path (existing file) or inline JSON text and parses it,
// wrapping syntax errors with their location diagnostic.
json load_spec_text(const std::string& path_or_inline);

// {"dist": ..., "n": ..., "vertex_counts": [...], "trials": ..., "probes": ...,
//  "delta": ..., "seed": ...}; only "dist" is required.
SimConfig parse_sim_config(const json& spec);

json stat_report_json(const StatReport& rep);
json battery_report_json(const BatteryReport& rep);
json threshold_report_json(const ThresholdReport& rep);
json rho_bounds_json(const RhoBounds& b);

// CSV with '.' decimals and 17 significant digits so downstream diffs are
// byte-exact. Every row must match the header arity.
std::string csv_table(const std::vector<std::string>& headers,
                      const std::vector<std::vector<double>>& rows);
std::string csv_scan_rows(const ThresholdReport& rep);

}  // namespace cramerdepth
