#pragma once

// Sampling, reducibility predicates, structure fits and the consistency check
// of "generalized P-reducible + vanishing S-curvature => Berwald or
// C-reducible" over a chart box.
//
// Every scan is deterministic: sample i draws from its own generator seeded
// by (seed, i), and reductions run in sample order, so reports do not depend
// on the number of worker threads.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/alphabeta.hpp"
#include "finsler/finsler_core.hpp"
#include "finsler/metric.hpp"

namespace finsler {

struct Tolerances {
  double eps_tensor = 1e-8;
  double eps_S = 1e-6;
  double eps_fit = 1e-8;
  double nonzero_floor = 1e-3;
  /// Throws InputError unless 0 < eps_tensor < nonzero_floor and the other bounds are positive.
  void validate() const;
};

enum class Verdict { Holds, Fails, Inconclusive };
const char* to_string(Verdict v);
/// holds iff residual <= tol, fails iff residual >= floor.
Verdict verdict_of(double residual, double tol, double floor);

// ---------------------------------------------------------------- sampling

struct Sample {
  Vector x, y;  // y normalized to F(x, y) = 1
};

struct SampleSet {
  std::vector<Sample> samples;
  int requested = 0;
  int rejected = 0;
  std::map<std::string, int> rejections;  // by guard name
};

/// Admissibility used by every sampler: |s| < 0.95 b0 for two-sided
/// families, s > 0.05 b (after flipping to the admissible half) for
/// one-sided ones, all F guards, and positive definite g.
inline constexpr double kEdgeFraction = 0.95;
inline constexpr double kOneSidedFloor = 0.05;
inline constexpr int kMaxAttempts = 200;

/// `count` samples; x uniform in the box, y uniform on the alpha-unit sphere.
SampleSet draw_samples(const MetricSpec& spec, int count, std::uint64_t seed);
/// `nx` base points with `ny` directions each (x shared within a group).
SampleSet draw_grouped_samples(const MetricSpec& spec, int nx, int ny, std::uint64_t seed);

/// Runs fn(i) for i in [0, count) on worker threads with a fixed contiguous partition.
void parallel_for(int count, const std::function<void(int)>& fn);

// ---------------------------------------------------------------- fits

struct SemiCFit {
  bool defined = false;  // false at Riemannian points (|I|^2 <= eps)
  double p = 0, q = 0, residual = 0;
};
/// C = p sym(h (x) I)/(n+1) + q I(x)I(x)I/|I|^2 with q = 1 - p, p by least squares.
SemiCFit semi_c_fit(const PointState& ps, double eps_tensor = 1e-8);

struct GprFit {
  bool degenerate = false;  // |M| <= eps, lambda set to 0
  double lambda = 0;
  Vector a;
  double residual = 0;  // |L - lambda C - sym(a (x) h)| / (1 + |L|)
};
/// lambda = <PRED, M> / <M, M>, a_i = (J_i - lambda I_i) / (n + 1).
GprFit gpr_fit(const PointState& ps, double eps_tensor = 1e-8);

/// Normalized residuals of the six vanishing/reducibility predicates at one state.
struct PredicateResiduals {
  double riemannian = 0, berwald = 0, landsberg = 0, weakly_landsberg = 0, c_reducible = 0, p_reducible = 0;
};
PredicateResiduals predicate_residuals(const PointState& ps);

// ---------------------------------------------------------------- scans

struct PredicateSummary {
  std::string name;
  double tolerance = 0;
  double max_residual = 0;
  Verdict verdict = Verdict::Inconclusive;
};

struct Spread {
  int count = 0;
  double min = 0, max = 0, mean = 0;
  void add(double v);
};

struct PredicateScan {
  int samples = 0;
  std::vector<PredicateSummary> predicates;  // riemannian .. p-reducible, semi-c-reducible, generalized-p-reducible
  Spread lambda, p, q;
  double pq_sum_deviation = 0;  // max |p + q - 1|
  int semi_c_undefined = 0;     // Riemannian points
  int gpr_degenerate = 0;       // points with M = 0
  double gpr_fail_fraction = 0; // fraction of samples with gpr residual >= floor
  std::vector<std::string> diagnostics;
  const PredicateSummary& get(const std::string& name) const;
};
PredicateScan predicate_scan(const MetricSpec& spec, const SampleSet& samples, const Tolerances& tol);

struct SScan {
  int points = 0, directions = 0;
  int excluded_points = 0;      // quadrature did not converge
  double max_abs_S = 0;
  double max_discrepancy = 0;   // quadrature two-resolution discrepancy
  double c = 0;                 // S = (n + 1) c F fitted by least squares
  double isotropy_residual = 0; // max |S - (n + 1) c F|
  Verdict vanishing = Verdict::Inconclusive, isotropic = Verdict::Inconclusive;
};
SScan s_scan(const MetricSpec& spec, const SampleSet& grouped, int directions_per_point, const Tolerances& tol);

struct CS0Check {
  int points = 0;
  bool degenerate = false;      // b^2 < 1e-12 somewhere
  double max_r = 0;             // case (b): |r|_a
  double max_s_vec = 0;         // |s_j|_a, both cases
  Spread epsilon;               // case (a): tr_a(r) / (b^2 (n - 1))
  double case_a_residual = 0;   // |r - eps (b^2 a - b b)|_a
  double k = 0;                 // Phi = -2 (n + 1) k phi Delta^2 / (b^2 - s^2)
  double phi_residual = 0;
  Verdict case_a = Verdict::Inconclusive, case_b = Verdict::Inconclusive;
};
inline constexpr double kCs0Tolerance = 1e-9;
CS0Check cs0_check(const MetricSpec& spec, const std::vector<Vector>& xs, const Tolerances& tol);

struct CrossCheck {
  int samples = 0;
  double spray = 0, mean_landsberg = 0, jbar = 0, mean_cartan = 0, landsberg = 0;
  double premise_fraction = 0;  // share of samples in the r = 0, s_j = 0 regime
  std::string mean_cartan_covector = "alpha b_i - s a_ij y^j";
};
/// Normalized discrepancies between the closed forms and the definition path.
CrossCheck crosscheck(const MetricSpec& spec, const SampleSet& samples);

enum class TheoremOutcome { Consistent, Violation, Inconclusive };
const char* to_string(TheoremOutcome t);

struct TheoremCheck {
  TheoremOutcome outcome = TheoremOutcome::Inconclusive;
  Verdict gpr = Verdict::Inconclusive, vanishing_S = Verdict::Inconclusive;
  Verdict berwald = Verdict::Inconclusive, c_reducible = Verdict::Inconclusive;
  std::string explanation;
};
TheoremCheck theorem_check(const PredicateScan& scan, const SScan& s);

// ---------------------------------------------------------------- report

struct ClassifyOptions {
  int samples = 200;
  std::uint64_t seed = 1;
  Tolerances tol;
  int s_points = 20;
  int s_directions = 10;
  bool with_crosscheck = true;
};

struct ClassificationReport {
  std::string metric_id;
  std::map<std::string, double> params;
  int n = 0;
  std::string phi_family;
  std::map<std::string, double> phi_params;
  ClassifyOptions options;
  SampleSet sampling;  // main sample set (samples themselves are not reported)
  PredicateScan scan;
  SScan s;
  CS0Check cs0;
  std::optional<CrossCheck> cross;
  TheoremCheck theorem;
};

ClassificationReport classify(const MetricSpec& spec, const ClassifyOptions& options);

}  // namespace finsler
