#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cramerdepth/dist.hpp"

namespace cramerdepth {

// Random polytope simulator. K_N is the convex hull of N iid draws from the
// handle's law and the object of study is E mu(K_N), estimated by membership
// probing with certificates.

enum class HullStatus { Inside, Outside, Indeterminate };

// Inside: convex coefficients over at most n+1 vertices reproducing the probe.
// Outside: separating direction xi with <xi,x> - max_i <xi,v_i> = margin > 0.
// Indeterminate: iteration budget exhausted before either certificate; callers
// count these separately and must not classify them.
struct HullCertificate {
  HullStatus status = HullStatus::Indeterminate;
  std::vector<int> support;    // vertex indices carrying the coefficients
  std::vector<double> coeffs;  // aligned with support, nonnegative, sums to 1
  std::vector<double> xi;      // separating direction when outside
  double margin = 0.0;
  int iterations = 0;
};

// Re-checks a certificate against the vertex list by direct arithmetic:
// coefficients reproduce x within tol*(1+|x|) and sum to 1, or the separating
// margin recomputed over every vertex is positive.
bool certificate_ok(const HullCertificate& cert,
                    const std::vector<std::vector<double>>& vertices,
                    const std::vector<double>& x, double tol = 1e-9);

// Nearest-point Frank-Wolfe over the hull with away steps. Terminates inside
// when |y - x| <= 1e-10 (1+|x|), outside as soon as the direction x - y
// separates x from every vertex. Certificates are re-verified before return;
// the 1e5 iteration budget turns into Indeterminate, never a guess.
HullCertificate hull_membership(const std::vector<std::vector<double>>& vertices,
                                const std::vector<double>& x);

// A scalar handle is tensorized to the n-fold product of itself; radial and
// product handles must already have dimension n.
struct SimConfig {
  Distribution dist = ScalarDistribution::uniform(-1.0, 1.0);
  int n = 2;
  std::vector<long> vertex_counts;  // each N > n; auto-filled by threshold_scan
  int trials = 20;
  int probe_count = 50;
  double delta = 0.2;
  std::uint64_t seed = 1;
};

struct ScanRow {
  long n_vertices = 0;
  double estimate = 0.0;       // mean over trials of the inside fraction
  double ci_halfwidth = 0.0;   // Wilson 95% on the pooled count
  double dfm_upper = 1.0;
  double dfm_lower = 0.0;
  double trial_stddev = 0.0;   // spread of per-trial inside fractions
  long indeterminate = 0;
};

struct ThresholdReport {
  std::string label;
  std::vector<ScanRow> rows;
  double rho1_hat = 0.0;    // ln of the largest N with estimate + hw <= delta
  double rho2_hat = 0.0;    // ln of the smallest N with estimate - hw >= 1-delta
  double rho1_ratio = 0.0;  // rho_hat / e_cramer_ref
  double rho2_ratio = 0.0;
  double e_cramer_ref = 0.0;
  double delta = 0.0;
  std::string status;  // "ok" or the reason a crossing is missing
  bool flagged = false;  // indeterminate membership rate above 0.1%
};

struct DfmBounds {
  double upper = 1.0;
  double lower = 0.0;
};

// Sandwich bounds on E mu(K_N) from the level set A = {q >= e^{-t}}, both
// clamped to [0,1]:
//   upper = mu(A) + N e^{-t}
//   lower = mu(A) (1 - 2 binom(N,n) (1 - inf_A q)^{N-n})
// For 1-D and radial handles A is the depth trimmed region itself and
// inf_A q = e^{-t}. For product laws (including tensorized scalars) A is the
// coordinate box {max_i omega_i(x_i) <= t}: independence gives
// q(x) >= prod_i q_i(x_i) >= e^{-nt} on the box, while any x off the box
// sits in a coordinate half-space of measure < e^{-t}, so both displays
// remain valid with those surrogates. binom and the power are evaluated in
// log space so N ~ e^50 survives.
DfmBounds dfm_bounds(const Distribution& dist, int n, long n_vertices, double t);

// Per-N Monte Carlo estimates of E mu(K_N): trials x probe_count independent
// membership probes against freshly drawn hulls, Wilson 95% half-widths, and
// DFM columns optimized over a log-spaced ladder of levels t. Probes and
// vertices use separate seed streams keyed by (N index, trial), so results
// do not depend on thread count and adding probes never shifts vertex draws.
ThresholdReport expected_measure_mc(const SimConfig& config);

// expected_measure_mc plus the CI-adjusted threshold crossings. An empty
// vertex_counts list is auto-filled log-spaced across exp((1 +- 0.6) E L*).
// Crossings err outward: rho1 uses estimate + hw, rho2 uses estimate - hw;
// a missing crossing yields NaN and an explicit range-exhausted status.
ThresholdReport threshold_scan(const SimConfig& config);

struct RhoBounds {
  double rho1_lower = 0.0;
  double rho2_upper = 0.0;
  bool rho1_valid = false;
  bool rho2_valid = false;
  std::string note;
};

// rho1_lower = (1 - sqrt(8 beta/delta)) E L*   [needs 8 beta < delta < 1]
// rho2_upper = (1 + max{sqrt(128 beta/delta),
//                       8 ln(e (3/2) E L*) / (3 E L*)}) E L*
//                                              [needs 128 beta < delta < 1]
// A violated hypothesis leaves the side NaN/invalid; no number is fabricated.
RhoBounds rho_bound_eval(double e_cramer, double beta_param, double delta, int n);

}  // namespace cramerdepth
