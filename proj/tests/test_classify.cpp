#include <doctest.h>

#include "finsler/classify.hpp"
#include "finsler/zoo.hpp"
#include "helpers.hpp"

using namespace finsler;
using namespace testing_support;

namespace {

PointState state_at(const MetricSpec& spec, const Sample& s) { return point_state(spec, s.x, s.y); }

}  // namespace

TEST_CASE("tolerances and verdicts") {
  Tolerances tol;
  CHECK_NOTHROW(tol.validate());
  tol.eps_tensor = 1e-2;
  CHECK_THROWS_AS(tol.validate(), InputError);
  tol = Tolerances{};
  tol.eps_S = -1;
  CHECK_THROWS_AS(tol.validate(), InputError);

  CHECK(verdict_of(1e-9, 1e-8, 1e-3) == Verdict::Holds);
  CHECK(verdict_of(1e-2, 1e-8, 1e-3) == Verdict::Fails);
  CHECK(verdict_of(1e-5, 1e-8, 1e-3) == Verdict::Inconclusive);
  CHECK(verdict_of(std::nan(""), 1e-8, 1e-3) == Verdict::Inconclusive);
}

TEST_CASE("sampling") {
  for (const auto& entry : zoo_list()) {
    const auto spec = zoo_get(entry.id);
    const auto set = draw_samples(spec, 100, 4);
    CHECK(set.requested == 100);
    REQUIRE(set.samples.size() == 100);
    const double acceptance = 100.0 / (100.0 + set.rejected);
    CHECK_MESSAGE(acceptance >= 0.9, entry.id);
    for (const auto& s : set.samples) {
      CHECK(spec.box.contains(s.x));
      CHECK(F_value(spec, s.x, s.y) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  // Independent of thread scheduling: the same seed gives the same samples.
  const auto spec = zoo_get("hopf-matsumoto");
  const auto a = draw_samples(spec, 40, 9), b = draw_samples(spec, 40, 9), c = draw_samples(spec, 40, 10);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].x == b.samples[i].x);
    CHECK(a.samples[i].y == b.samples[i].y);
  }
  CHECK(a.samples[0].x != c.samples[0].x);
  // A prefix of a longer run reproduces the shorter run.
  const auto longer = draw_samples(spec, 60, 9);
  CHECK(longer.samples[39].y == a.samples[39].y);

  const auto grouped = draw_grouped_samples(spec, 4, 5, 9);
  REQUIRE(grouped.samples.size() == 20);
  CHECK(grouped.samples[0].x == grouped.samples[4].x);
  CHECK(grouped.samples[0].x != grouped.samples[5].x);
}

TEST_CASE("semi-C fit") {
  const auto randers = zoo_get("hopf-randers");
  for (const auto& s : draw_samples(randers, 10, 2).samples) {
    const auto fit = semi_c_fit(state_at(randers, s));
    REQUIRE(fit.defined);
    CHECK(fit.p == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(fit.q) <= 1e-8);
    CHECK(fit.residual <= 1e-8);
  }

  const auto mats = zoo_get("hopf-matsumoto");
  Spread p;
  for (const auto& s : draw_samples(mats, 20, 2).samples) {
    const auto fit = semi_c_fit(state_at(mats, s));
    REQUIRE(fit.defined);
    CHECK(fit.residual <= 1e-8);
    CHECK(fit.p + fit.q == doctest::Approx(1.0));
    p.add(fit.p);
  }
  CHECK(p.max - p.min > 1e-3);

  const auto riem = euclid({0, 0, 0}, PhiFamily::randers());
  const auto ps = point_state(riem, Vector::Zero(3), Vector::Ones(3));
  CHECK_FALSE(semi_c_fit(ps).defined);
}

TEST_CASE("generalized P-reducible fit") {
  const auto riem = euclid({0, 0, 0}, PhiFamily::randers());
  const auto fit0 = gpr_fit(point_state(riem, Vector::Zero(3), Vector::Ones(3)));
  CHECK(fit0.degenerate);
  CHECK(fit0.lambda == 0.0);
  CHECK(fit0.a.norm() == 0.0);
  CHECK(fit0.residual == 0.0);

  const auto randers = zoo_get("hopf-randers");
  for (const auto& s : draw_samples(randers, 20, 3).samples) {
    const auto ps = state_at(randers, s);
    const auto fit = gpr_fit(ps);
    CHECK(fit.residual <= 1e-8);
    CHECK(std::abs(fit.a.dot(s.y)) <= 1e-10 * (1 + fit.a.norm()));
  }

  const auto mats = zoo_get("hopf-matsumoto");
  int failing = 0, total = 0;
  for (const auto& s : draw_samples(mats, 40, 3).samples) {
    ++total;
    if (gpr_fit(state_at(mats, s)).residual >= 1e-3) ++failing;
  }
  CHECK(failing * 2 > total);
}

TEST_CASE("gpr residual equals the P-reducible residual where M vanishes") {
  for (const char* id : {"hopf-randers", "hopf-kropina", "rk-change"}) {
    const auto spec = zoo_get(id);
    for (const auto& s : draw_samples(spec, 20, 6).samples) {
      const auto ps = state_at(spec, s);
      const auto pr = predicate_residuals(ps);
      REQUIRE(pr.c_reducible <= 1e-8);
      const auto fit = gpr_fit(ps);
      CHECK(fit.degenerate);
      CHECK(std::abs(fit.residual - pr.p_reducible) <= 1e-10);
    }
  }
}

TEST_CASE("hierarchy monotonicity") {
  const double eps = 1e-8;
  for (const auto& entry : zoo_list()) {
    const auto spec = zoo_get(entry.id);
    for (const auto& s : draw_samples(spec, 20, 8).samples) {
      const auto r = predicate_residuals(state_at(spec, s));
      if (r.riemannian <= eps) CHECK(r.berwald <= eps);
      if (r.berwald <= eps) CHECK(r.landsberg <= eps);
      if (r.landsberg <= eps) {
        CHECK(r.weakly_landsberg <= eps);
        CHECK(r.p_reducible <= eps);
      }
      if (r.c_reducible <= eps) CHECK(r.p_reducible <= eps);
    }
  }
  // Same on a non-Berwald background with a general beta.
  const auto spec = curved(PhiFamily::randers());
  for (const auto& s : draw_samples(spec, 10, 8).samples) {
    const auto r = predicate_residuals(state_at(spec, s));
    CHECK(r.c_reducible <= eps);
    CHECK(r.p_reducible <= eps);
    CHECK(r.berwald > 1e-3);
  }
}

TEST_CASE("predicate scan needs ten samples") {
  const auto spec = zoo_get("hopf-randers");
  const auto scan = predicate_scan(spec, draw_samples(spec, 5, 1), Tolerances{});
  for (const auto& p : scan.predicates) CHECK(p.verdict == Verdict::Inconclusive);
  CHECK_FALSE(scan.diagnostics.empty());
}

TEST_CASE("S-curvature scan") {
  Tolerances tol;
  const auto randers = zoo_get("euclid-randers");
  const auto sr = s_scan(randers, draw_grouped_samples(randers, 4, 5, 1), 5, tol);
  CHECK(sr.vanishing == Verdict::Holds);
  CHECK(std::abs(sr.c) <= 1e-8);
  CHECK(sr.excluded_points == 0);
  for (const char* id : {"hopf-kropina", "hopf-matsumoto"}) {
    const auto spec = zoo_get(id);
    const auto s = s_scan(spec, draw_grouped_samples(spec, 4, 5, 1), 5, tol);
    CHECK(s.max_abs_S <= tol.eps_S);
    CHECK(s.vanishing == Verdict::Holds);
  }
  const auto curved_spec = curved(PhiFamily::randers());
  const auto sc = s_scan(curved_spec, draw_grouped_samples(curved_spec, 4, 5, 1), 5, tol);
  CHECK(sc.vanishing == Verdict::Fails);
}

TEST_CASE("conditions for vanishing S") {
  Tolerances tol;
  std::vector<Vector> xs;
  for (int i = 0; i < 5; ++i) xs.push_back(Vector::Constant(3, 0.1 * i - 0.2));

  const auto hopf = zoo_get("hopf-matsumoto");
  const auto hb = cs0_check(hopf, xs, tol);
  CHECK(hb.case_b == Verdict::Holds);
  CHECK(hb.max_r <= 1e-9);

  const auto flat = zoo_get("euclid-randers");
  const auto fb = cs0_check(flat, xs, tol);
  CHECK(fb.case_b == Verdict::Holds);
  CHECK(fb.case_a == Verdict::Holds);
  CHECK(fb.epsilon.max == 0.0);
  CHECK(fb.epsilon.min == 0.0);

  // b = c x / |x| on Euclidean space: r_ij = (b^2 delta_ij - b_i b_j) / (c |x|), s_ij = 0.
  const double c = 0.5;
  const auto radial = MetricSpec::from_strings(
      "radial", 3, {{"1"}, {"0", "1"}, {"0", "0", "1"}},
      {"0.5*x1/sqrt(x1^2+x2^2+x3^2)", "0.5*x2/sqrt(x1^2+x2^2+x3^2)", "0.5*x3/sqrt(x1^2+x2^2+x3^2)"}, PhiFamily::randers(),
      box(3, 0.5, 1.5));
  std::vector<Vector> pts;
  double eps_lo = 1e300, eps_hi = 0;
  for (int i = 0; i < 6; ++i) {
    Vector x(3);
    x << 0.5 + 0.2 * i, 1.5 - 0.15 * i, 0.7 + 0.1 * i;
    pts.push_back(x);
    eps_lo = std::min(eps_lo, 1 / (c * x.norm()));
    eps_hi = std::max(eps_hi, 1 / (c * x.norm()));
  }
  const auto ra = cs0_check(radial, pts, tol);
  CHECK(ra.case_a_residual <= 1e-9);
  CHECK(ra.max_s_vec <= 1e-9);
  CHECK(ra.epsilon.min == doctest::Approx(eps_lo).epsilon(1e-12));
  CHECK(ra.epsilon.max == doctest::Approx(eps_hi).epsilon(1e-12));
  CHECK(ra.case_b == Verdict::Fails);
}

TEST_CASE("theorem check logic") {
  PredicateScan scan;
  for (const char* name : {"berwald", "c-reducible", "generalized-p-reducible"}) scan.predicates.push_back({name, 1e-8, 0, Verdict::Holds});
  SScan s;
  s.vanishing = Verdict::Holds;
  auto set = [&](const char* name, Verdict v) {
    for (auto& p : scan.predicates)
      if (p.name == name) p.verdict = v;
  };
  CHECK(theorem_check(scan, s).outcome == TheoremOutcome::Consistent);
  set("berwald", Verdict::Fails);
  CHECK(theorem_check(scan, s).outcome == TheoremOutcome::Consistent);
  set("c-reducible", Verdict::Fails);
  CHECK(theorem_check(scan, s).outcome == TheoremOutcome::Violation);
  set("c-reducible", Verdict::Inconclusive);
  CHECK(theorem_check(scan, s).outcome == TheoremOutcome::Inconclusive);
  set("generalized-p-reducible", Verdict::Fails);
  CHECK(theorem_check(scan, s).outcome == TheoremOutcome::Consistent);
  set("generalized-p-reducible", Verdict::Holds);
  s.vanishing = Verdict::Fails;
  CHECK(theorem_check(scan, s).outcome == TheoremOutcome::Consistent);
}

TEST_CASE("classification of zoo entries") {
  ClassifyOptions opt;
  opt.samples = 60;
  opt.s_points = 6;
  opt.s_directions = 4;

  const auto er = classify(zoo_get("euclid-randers"), opt);
  CHECK(er.theorem.outcome == TheoremOutcome::Consistent);
  CHECK(er.theorem.berwald == Verdict::Holds);

  const auto hr = classify(zoo_get("hopf-randers"), opt);
  CHECK(hr.theorem.outcome == TheoremOutcome::Consistent);
  CHECK(hr.theorem.gpr == Verdict::Holds);
  CHECK(hr.theorem.vanishing_S == Verdict::Holds);
  CHECK(hr.theorem.berwald == Verdict::Fails);
  CHECK(hr.theorem.c_reducible == Verdict::Holds);
  REQUIRE(hr.cross.has_value());
  CHECK(hr.cross->spray <= 1e-8);

  const auto hm = classify(zoo_get("hopf-matsumoto"), opt);
  CHECK(hm.theorem.outcome == TheoremOutcome::Consistent);
  CHECK(hm.theorem.gpr == Verdict::Fails);
  CHECK(hm.theorem.c_reducible == Verdict::Fails);
  CHECK(hm.theorem.vanishing_S == Verdict::Holds);
  CHECK(hm.sampling.samples.empty());

  opt.samples = 0;
  CHECK_THROWS_AS(classify(zoo_get("hopf-randers"), opt), InputError);
}
