#include "finsler/classify.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "finsler/errors.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

void Tolerances::validate() const {
  if (!(eps_tensor > 0 && eps_tensor < nonzero_floor)) throw InputError("tolerances: need 0 < eps_tensor < nonzero_floor");
  if (!(eps_S > 0 && eps_fit > 0)) throw InputError("tolerances: eps_S and eps_fit must be positive");
  if (!(eps_S < nonzero_floor && eps_fit < nonzero_floor)) throw InputError("tolerances: eps_S and eps_fit must be below nonzero_floor");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(TheoremOutcome t) {
  switch (t) {
    case TheoremOutcome::Consistent: return "CONSISTENT";
    case TheoremOutcome::Violation: return "VIOLATION";
    case TheoremOutcome::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Verdict verdict_of(double residual, double tol, double floor) {
  if (!std::isfinite(residual)) return Verdict::Inconclusive;
  if (residual <= tol) return Verdict::Holds;
  if (residual >= floor) return Verdict::Fails;
  return Verdict::Inconclusive;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  const int chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (int i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------- sampling

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t tag, std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag, index};
  return std::mt19937_64(seq);
}

Vector uniform_in_box(const ChartBox& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(box.lo.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = box.lo(i) + u(rng) * (box.hi(i) - box.lo(i));
  return x;
}

struct BaseData {
  Matrix l_inv_t;  // y = l_inv_t u has alpha(y) = |u|
  Vector b;
  double b_norm = 0, b_sq = 0;
};

// On failure returns false with the violated guard name.
bool base_data(const MetricSpec& spec, const Vector& x, BaseData& out, std::string& guard) {
  try {
    const Matrix a = a_value(spec, x);
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) {
      guard = "metric-positive-definite";
      return false;
    }
    const Matrix L = llt.matrixL();
    out.l_inv_t = L.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(spec.n, spec.n));
    out.b = b_value(spec, x);
    out.b_sq = out.b.dot(llt.solve(out.b));
    out.b_norm = std::sqrt(std::max(0.0, out.b_sq));
    return true;
  } catch (const DomainError& e) {
    guard = e.guard();
    return false;
  }
}

// One attempt at an admissible direction at x; returns false with a guard name.
bool draw_direction(const MetricSpec& spec, const Vector& x, const BaseData& base, std::mt19937_64& rng, Vector& y,
                    std::string& guard) {
  std::normal_distribution<double> normal;
  Vector u(spec.n);
  for (int i = 0; i < spec.n; ++i) u(i) = normal(rng);
  const double len = u.norm();
  if (!(len > 1e-12)) {
    guard = "alpha-positive";
    return false;
  }
  y = base.l_inv_t * (u / len);
  double s = base.b.dot(y);
  const auto& phi = spec.phi;
  if (phi.one_sided()) {
    if (s * phi.admissible_sign() < 0) {
      y = -y;
      s = -s;
    }
    if (!(std::abs(s) > kOneSidedFloor * base.b_norm)) {
      guard = "one-sided-floor";
      return false;
    }
  } else if (!(std::abs(s) < kEdgeFraction * phi.b0())) {
    guard = "domain-edge";
    return false;
  }
  if (auto g = phi.violated_guard(s, base.b_sq)) {
    guard = *g;
    return false;
  }
  y /= phi.value(s);
  try {
    (void)fundamental(spec, x, y);
  } catch (const DomainError& e) {
    guard = e.guard();
    return false;
  }
  return true;
}

struct Draw {
  std::vector<Sample> samples;
  std::map<std::string, int> rejections;
  bool ok = false;
};

// A group of `ny` directions at one base point, drawn from one stream.
Draw draw_group(const MetricSpec& spec, int ny, std::mt19937_64 rng) {
  Draw d;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Vector x = uniform_in_box(spec.box, rng);
    BaseData base;
    std::string guard;
    if (!base_data(spec, x, base, guard)) {
      ++d.rejections[guard];
      continue;
    }
    d.samples.clear();
    int tries = 0;
    while (static_cast<int>(d.samples.size()) < ny && tries < kMaxAttempts) {
      ++tries;
      Vector y;
      if (draw_direction(spec, x, base, rng, y, guard))
        d.samples.push_back({x, y});
      else
        ++d.rejections[guard];
    }
    if (static_cast<int>(d.samples.size()) == ny) {
      d.ok = true;
      return d;
    }
  }
  ++d.rejections["attempts-exhausted"];
  return d;
}

SampleSet collect(const MetricSpec& spec, int groups, int per_group, std::uint64_t seed, std::uint32_t tag) {
  std::vector<Draw> draws(static_cast<std::size_t>(std::max(0, groups)));
  parallel_for(groups, [&](int i) {
    draws[static_cast<std::size_t>(i)] = draw_group(spec, per_group, stream(seed, tag, static_cast<std::uint32_t>(i)));
  });
  SampleSet out;
  out.requested = groups * per_group;
  for (const auto& d : draws) {
    if (d.ok) out.samples.insert(out.samples.end(), d.samples.begin(), d.samples.end());
    for (const auto& [k, v] : d.rejections) {
      out.rejections[k] += v;
      out.rejected += v;
    }
  }
  return out;
}

}  // namespace

SampleSet draw_samples(const MetricSpec& spec, int count, std::uint64_t seed) { return collect(spec, count, 1, seed, 0); }

SampleSet draw_grouped_samples(const MetricSpec& spec, int nx, int ny, std::uint64_t seed) {
  return collect(spec, nx, ny, seed, 1);
}

// ---------------------------------------------------------------- fits

SemiCFit semi_c_fit(const PointState& ps, double eps_tensor) {
  SemiCFit fit;
  const Matrix& gi = ps.g_inv;
  const double I_sq = norm_covector(ps.I, gi) * norm_covector(ps.I, gi);
  if (!(I_sq > eps_tensor)) return fit;
  const int n = ps.n;
  const Tensor3 III = outer3(ps.I, ps.I, ps.I) * (1.0 / I_sq);
  const Tensor3 E = sym_vh(ps.I, ps.h) * (1.0 / (n + 1)) - III;
  const Tensor3 D = ps.C - III;
  const double EE = inner3(E, E, gi);
  fit.defined = true;
  fit.p = EE > 1e-300 ? inner3(D, E, gi) / EE : 1.0;
  fit.q = 1 - fit.p;
  const Tensor3 R = D - E * fit.p;
  fit.residual = norm3(R, gi) / (1 + norm3(ps.C, gi));
  return fit;
}

GprFit gpr_fit(const PointState& ps, double eps_tensor) {
  GprFit fit;
  const Matrix& gi = ps.g_inv;
  const int n = ps.n;
  const double MM = inner3(ps.M, ps.M, gi);
  if (std::sqrt(MM) > eps_tensor)
    fit.lambda = inner3(ps.PRED, ps.M, gi) / MM;
  else
    fit.degenerate = true;
  fit.a = (ps.J - fit.lambda * ps.I) / (n + 1);
  const Tensor3 R = ps.L - ps.C * fit.lambda - sym_vh(fit.a, ps.h);
  fit.residual = norm3(R, gi) / (1 + norm3(ps.L, gi));
  return fit;
}

PredicateResiduals predicate_residuals(const PointState& ps) {
  const Matrix& gi = ps.g_inv;
  PredicateResiduals r;
  r.riemannian = norm3(ps.C, gi);
  r.berwald = norm_mixed4(ps.B, ps.g, gi);
  r.landsberg = norm3(ps.L, gi);
  r.weakly_landsberg = norm_covector(ps.J, gi);
  r.c_reducible = norm3(ps.M, gi) / (1 + r.riemannian);
  r.p_reducible = norm3(ps.PRED, gi) / (1 + r.landsberg);
  return r;
}

// ---------------------------------------------------------------- scans

void Spread::add(double v) {
  if (count == 0) {
    min = max = v;
  } else {
    min = std::min(min, v);
    max = std::max(max, v);
  }
  mean += (v - mean) / ++count;
}

const PredicateSummary& PredicateScan::get(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return p;
  throw InputError("unknown predicate: " + name);
}

namespace {

inline constexpr int kMinSamples = 10;

struct PointResult {
  bool ok = false;
  std::string error;
  PredicateResiduals pr;
  SemiCFit semi;
  GprFit gpr;
};

}  // namespace

PredicateScan predicate_scan(const MetricSpec& spec, const SampleSet& samples, const Tolerances& tol) {
  const int count = static_cast<int>(samples.samples.size());
  std::vector<PointResult> results(static_cast<std::size_t>(count));
  parallel_for(count, [&](int i) {
    auto& r = results[static_cast<std::size_t>(i)];
    const auto& smp = samples.samples[static_cast<std::size_t>(i)];
    try {
      const auto ps = point_state(spec, smp.x, smp.y);
      r.pr = predicate_residuals(ps);
      r.semi = semi_c_fit(ps, tol.eps_tensor);
      r.gpr = gpr_fit(ps, tol.eps_tensor);
      r.ok = true;
    } catch (const DomainError& e) {
      r.error = e.guard();
    }
  });

  PredicateScan scan;
  const char* names[] = {"riemannian", "berwald", "landsberg", "weakly-landsberg", "c-reducible", "p-reducible",
                         "semi-c-reducible", "generalized-p-reducible"};
  double max_res[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  int gpr_failing = 0;
  std::map<std::string, int> errors;
  for (const auto& r : results) {
    if (!r.ok) {
      ++errors[r.error];
      continue;
    }
    ++scan.samples;
    const double vals[6] = {r.pr.riemannian, r.pr.berwald, r.pr.landsberg, r.pr.weakly_landsberg, r.pr.c_reducible,
                            r.pr.p_reducible};
    for (int k = 0; k < 6; ++k) max_res[k] = std::max(max_res[k], vals[k]);
    if (r.semi.defined) {
      max_res[6] = std::max(max_res[6], r.semi.residual);
      scan.p.add(r.semi.p);
      scan.q.add(r.semi.q);
      scan.pq_sum_deviation = std::max(scan.pq_sum_deviation, std::abs(r.semi.p + r.semi.q - 1));
    } else {
      ++scan.semi_c_undefined;
    }
    max_res[7] = std::max(max_res[7], r.gpr.residual);
    scan.lambda.add(r.gpr.lambda);
    if (r.gpr.degenerate) ++scan.gpr_degenerate;
    if (r.gpr.residual >= tol.nonzero_floor) ++gpr_failing;
  }
  for (const auto& [guard, k] : errors)
    scan.diagnostics.push_back(std::to_string(k) + " sample(s) failed evaluation: " + guard);
  scan.gpr_fail_fraction = scan.samples > 0 ? double(gpr_failing) / scan.samples : 0.0;

  const bool enough = scan.samples >= kMinSamples;
  if (!enough) scan.diagnostics.push_back("fewer than " + std::to_string(kMinSamples) + " admissible samples");
  for (int k = 0; k < 8; ++k) {
    PredicateSummary s;
    s.name = names[k];
    s.tolerance = k < 6 ? tol.eps_tensor : tol.eps_fit;
    s.max_residual = max_res[k];
    s.verdict = enough ? verdict_of(s.max_residual, s.tolerance, tol.nonzero_floor) : Verdict::Inconclusive;
    scan.predicates.push_back(s);
  }
  if (scan.samples > 0 && scan.semi_c_undefined == scan.samples) {
    // Riemannian everywhere: the semi-C fit has nothing to fit.
    scan.predicates[6].verdict = Verdict::Inconclusive;
    scan.diagnostics.push_back("semi-C fit undefined at every sample (Riemannian)");
  }
  return scan;
}

SScan s_scan(const MetricSpec& spec, const SampleSet& grouped, int directions_per_point, const Tolerances& tol) {
  SScan out;
  const int groups = directions_per_point > 0 ? static_cast<int>(grouped.samples.size()) / directions_per_point : 0;
  out.points = groups;
  out.directions = directions_per_point;
  struct GroupResult {
    bool converged = false;
    double discrepancy = 0;
    std::vector<double> S, F;
  };
  std::vector<GroupResult> results(static_cast<std::size_t>(groups));
  parallel_for(groups, [&](int gi) {
    auto& r = results[static_cast<std::size_t>(gi)];
    const auto& x = grouped.samples[static_cast<std::size_t>(gi * directions_per_point)].x;
    const auto vol = volume_density(spec, x);
    r.converged = vol.converged;
    r.discrepancy = vol.discrepancy;
    if (!vol.converged) return;
    for (int j = 0; j < directions_per_point; ++j) {
      const auto& y = grouped.samples[static_cast<std::size_t>(gi * directions_per_point + j)].y;
      r.S.push_back(s_curvature(spec, vol, x, y));
      r.F.push_back(F_value(spec, x, y));
    }
  });
  double sf = 0, ff = 0;
  for (const auto& r : results) {
    out.max_discrepancy = std::max(out.max_discrepancy, r.discrepancy);
    if (!r.converged) {
      ++out.excluded_points;
      continue;
    }
    for (std::size_t j = 0; j < r.S.size(); ++j) {
      out.max_abs_S = std::max(out.max_abs_S, std::abs(r.S[j]));
      sf += r.S[j] * r.F[j];
      ff += r.F[j] * r.F[j];
    }
  }
  const int n1 = spec.n + 1;
  out.c = ff > 0 ? sf / (n1 * ff) : 0.0;
  for (const auto& r : results)
    for (std::size_t j = 0; j < r.S.size(); ++j)
      out.isotropy_residual = std::max(out.isotropy_residual, std::abs(r.S[j] - n1 * out.c * r.F[j]));
  const bool usable = groups > 0 && out.excluded_points < groups;
  out.vanishing = usable ? verdict_of(out.max_abs_S, tol.eps_S, tol.nonzero_floor) : Verdict::Inconclusive;
  out.isotropic = usable ? verdict_of(out.isotropy_residual, tol.eps_S, tol.nonzero_floor) : Verdict::Inconclusive;
  // An excluded point can hide a nonzero S, so "holds" needs every point.
  if (out.excluded_points > 0) {
    if (out.vanishing == Verdict::Holds) out.vanishing = Verdict::Inconclusive;
    if (out.isotropic == Verdict::Holds) out.isotropic = Verdict::Inconclusive;
  }
  return out;
}

CS0Check cs0_check(const MetricSpec& spec, const std::vector<Vector>& xs, const Tolerances& tol) {
  CS0Check out;
  const int n = spec.n;
  double sum_w2 = 0, sum_pw = 0;
  std::vector<std::pair<double, double>> phi_pairs;  // (Phi, w)
  for (const auto& x : xs) {
    const auto st = riemann_state(spec, x);
    ++out.points;
    out.max_r = std::max(out.max_r, norm2(st.r, st.a_inv));
    out.max_s_vec = std::max(out.max_s_vec, norm_covector(st.s_vec, st.a_inv));
    if (st.b_sq < 1e-12) {
      out.degenerate = true;
      continue;
    }
    const double eps = (st.a_inv * st.r).trace() / (st.b_sq * (n - 1));
    out.epsilon.add(eps);
    const Matrix model = eps * (st.b_sq * st.a - st.b * st.b.transpose());
    out.case_a_residual = std::max(out.case_a_residual, norm2(st.r - model, st.a_inv));

    // s grid for the phi condition at this b^2
    const auto& phi = spec.phi;
    const double b = std::sqrt(st.b_sq);
    double lo, hi;
    if (phi.one_sided()) {
      const double sign = phi.admissible_sign();
      lo = std::min(sign * kOneSidedFloor * b, sign * kEdgeFraction * b);
      hi = std::max(sign * kOneSidedFloor * b, sign * kEdgeFraction * b);
    } else {
      hi = kEdgeFraction * std::min(b, phi.b0());
      lo = -hi;
    }
    constexpr int kGrid = 9;
    for (int g = 0; g < kGrid; ++g) {
      const double s = lo + (hi - lo) * g / (kGrid - 1);
      try {
        const auto k = ab_scalars(phi, s, st.b_sq, n);
        const double w = -2.0 * (n + 1) * k.phi * k.Delta * k.Delta / (st.b_sq - s * s);
        phi_pairs.emplace_back(k.Phi, w);
        sum_w2 += w * w;
        sum_pw += k.Phi * w;
      } catch (const DomainError&) {
      }
    }
  }
  out.k = sum_w2 > 0 ? sum_pw / sum_w2 : 0.0;
  double max_phi = 0;
  for (const auto& [P, w] : phi_pairs) {
    out.phi_residual = std::max(out.phi_residual, std::abs(P - out.k * w));
    max_phi = std::max(max_phi, std::abs(P));
  }
  out.phi_residual /= (1 + max_phi);

  const double floor = tol.nonzero_floor;
  out.case_b = out.points > 0 ? verdict_of(std::max(out.max_r, out.max_s_vec), kCs0Tolerance, floor) : Verdict::Inconclusive;
  if (out.degenerate || out.points == 0) {
    out.case_a = Verdict::Inconclusive;
  } else {
    const double geometric = std::max(out.case_a_residual, out.max_s_vec);
    const bool eps_zero = std::max(std::abs(out.epsilon.min), std::abs(out.epsilon.max)) <= kCs0Tolerance;
    // With eps = 0 case (a) collapses to case (b) and the phi condition is vacuous.
    out.case_a = verdict_of(eps_zero ? geometric : std::max(geometric, out.phi_residual), kCs0Tolerance, floor);
  }
  return out;
}

CrossCheck crosscheck(const MetricSpec& spec, const SampleSet& samples) {
  const int count = static_cast<int>(samples.samples.size());
  struct Row {
    bool ok = false, premise = false;
    double v[5] = {0, 0, 0, 0, 0};
  };
  std::vector<Row> rows(static_cast<std::size_t>(count));
  parallel_for(count, [&](int i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    const auto& smp = samples.samples[static_cast<std::size_t>(i)];
    try {
      const auto st = riemann_state(spec, smp.x);
      const auto p = ab_point(spec, st, smp.y);
      const auto ps = point_state(spec, smp.x, smp.y);
      const Matrix& gi = ps.g_inv;
      auto rel_v = [&](const Vector& a, const Vector& b) { return norm_covector(a - b, gi) / (1 + norm_covector(b, gi)); };
      row.v[0] = norm_vector(spray_cf(p) - ps.G, ps.g) / (1 + norm_vector(ps.G, ps.g));
      row.v[1] = rel_v(mean_landsberg_cf(p), ps.J);
      const double jb = st.b_up.dot(ps.J);
      row.v[2] = std::abs(jbar_cf(p) - jb) / (1 + std::abs(jb));
      row.v[3] = rel_v(mean_cartan_cf(p), ps.I);
      const Tensor3 dL = landsberg_cf(p) - ps.L;
      row.v[4] = norm3(dL, gi) / (1 + norm3(ps.L, gi));
      row.premise = std::max(norm2(st.r, st.a_inv), norm_covector(st.s_vec, st.a_inv)) <= 1e-9;
      row.ok = true;
    } catch (const DomainError&) {
    }
  });
  CrossCheck out;
  int premise = 0;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    ++out.samples;
    premise += row.premise;
    out.spray = std::max(out.spray, row.v[0]);
    out.mean_landsberg = std::max(out.mean_landsberg, row.v[1]);
    out.jbar = std::max(out.jbar, row.v[2]);
    out.mean_cartan = std::max(out.mean_cartan, row.v[3]);
    out.landsberg = std::max(out.landsberg, row.v[4]);
  }
  out.premise_fraction = out.samples > 0 ? double(premise) / out.samples : 0.0;
  return out;
}

TheoremCheck theorem_check(const PredicateScan& scan, const SScan& s) {
  TheoremCheck t;
  t.gpr = scan.get("generalized-p-reducible").verdict;
  t.vanishing_S = s.vanishing;
  t.berwald = scan.get("berwald").verdict;
  t.c_reducible = scan.get("c-reducible").verdict;
  if (t.gpr == Verdict::Fails || t.vanishing_S == Verdict::Fails) {
    t.outcome = TheoremOutcome::Consistent;
    t.explanation = t.gpr == Verdict::Fails ? "premise fails: not generalized P-reducible"
                                            : "premise fails: S-curvature does not vanish";
  } else if (t.berwald == Verdict::Holds || t.c_reducible == Verdict::Holds) {
    t.outcome = TheoremOutcome::Consistent;
    t.explanation = t.berwald == Verdict::Holds ? "conclusion holds: Berwald" : "conclusion holds: C-reducible";
  } else if (t.gpr == Verdict::Holds && t.vanishing_S == Verdict::Holds && t.berwald == Verdict::Fails &&
             t.c_reducible == Verdict::Fails) {
    t.outcome = TheoremOutcome::Violation;
    t.explanation = "premises hold but the metric is neither Berwald nor C-reducible";
  } else {
    t.outcome = TheoremOutcome::Inconclusive;
    t.explanation = "a premise or conclusion verdict is inconclusive";
  }
  return t;
}

ClassificationReport classify(const MetricSpec& spec, const ClassifyOptions& options) {
  options.tol.validate();
  if (options.samples < 1 || options.s_points < 1 || options.s_directions < 1)
    throw InputError("sample counts must be positive");
  ClassificationReport rep;
  rep.metric_id = spec.id;
  rep.params = spec.params;
  rep.n = spec.n;
  rep.phi_family = spec.phi.name();
  rep.phi_params = spec.phi.params();
  rep.options = options;
  rep.sampling = draw_samples(spec, options.samples, options.seed);
  rep.scan = predicate_scan(spec, rep.sampling, options.tol);
  const auto grouped = draw_grouped_samples(spec, options.s_points, options.s_directions, options.seed);
  rep.s = s_scan(spec, grouped, options.s_directions, options.tol);
  std::vector<Vector> xs;
  for (std::size_t i = 0; i < grouped.samples.size(); i += static_cast<std::size_t>(options.s_directions))
    xs.push_back(grouped.samples[i].x);
  rep.cs0 = cs0_check(spec, xs, options.tol);
  if (options.with_crosscheck) rep.cross = crosscheck(spec, rep.sampling);
  rep.theorem = theorem_check(rep.scan, rep.s);
  // Samples are not kept in the report.
  rep.sampling.samples.clear();
  return rep;
}

}  // namespace finsler
