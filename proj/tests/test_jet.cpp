#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/jet.hpp"
#include "finsler/phi.hpp"

using namespace finsler;

namespace {

MultiIndex mi(int a, int b = 0, int c = 0, int d = 0) { return {a, b, c, d}; }

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Random jet with every coefficient inside the truncation box filled.
Jetd random_jet(const LayoutPtr& layout, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Jetd j(layout);
  for (auto& c : j.coeffs()) c = u(rng);
  return j;
}

}  // namespace

TEST_CASE("seeded fibers") {
  const auto t = Jetd::seed_fiber(2.0, 0, 2, 3, 0);
  CHECK(t.extract(mi(1), 0) == 1.0);
  CHECK((t * t).extract(mi(2), 0) == 2.0);
  CHECK(Jetd::seed_fiber(0.0, 1, 3, 5, 2).value() == 0.0);
  CHECK_THROWS_AS(Jetd::seed_fiber(0.0, 3, 3, 5, 2), InputError);
}

TEST_CASE("arithmetic and elementary functions") {
  const auto L = JetLayout::get(1, 5, 0);
  const auto t = Jetd::seed_fiber(0.0, 0, L);

  const auto one_plus_t = 1.0 + t;
  const auto r = sqrt(one_plus_t * one_plus_t);
  CHECK(r.value() == doctest::Approx(1.0));
  CHECK(r.extract(mi(1), 0) == doctest::Approx(1.0));
  for (int k = 2; k <= 5; ++k) CHECK(std::abs(r.extract(mi(k), 0)) < 1e-14);

  const auto x = 0.7 + t;
  const auto id = (1.0 / x) * x;
  CHECK(id.value() == doctest::Approx(1.0));
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(id.extract(mi(k), 0)) < 1e-13);

  CHECK((t * t * t * t * t).extract(mi(5), 0) == 120.0);

  const auto e = exp(x), s = sin(x), c = cos(x);
  for (int k = 0; k <= 5; ++k) {
    CHECK(e.extract(mi(k), 0) == doctest::Approx(std::exp(0.7)).epsilon(1e-14));
    const double ds[4] = {std::sin(0.7), std::cos(0.7), -std::sin(0.7), -std::cos(0.7)};
    CHECK(s.extract(mi(k), 0) == doctest::Approx(ds[k % 4]).epsilon(1e-14));
    CHECK(c.extract(mi(k), 0) == doctest::Approx(ds[(k + 1) % 4]).epsilon(1e-14));
  }
  const auto p = pow(x, 2.5);
  double coef = 1;
  for (int k = 0; k <= 5; ++k) {
    CHECK(p.extract(mi(k), 0) == doctest::Approx(coef * std::pow(0.7, 2.5 - k)).epsilon(1e-13));
    coef *= 2.5 - k;
  }
  CHECK_THROWS_AS(sqrt(t), DomainError);
  CHECK_THROWS_AS(1.0 / t, DomainError);
}

TEST_CASE("extract") {
  const auto L = JetLayout::get(2, 4, 1);
  const Jetd c(L, 3.0);
  CHECK(c.extract(mi(1, 2), 0) == 0.0);
  CHECK(c.extract(mi(0, 0), 1) == 0.0);
  const auto y0 = Jetd::seed_fiber(0.3, 0, L), y1 = Jetd::seed_fiber(-0.4, 1, L);
  CHECK((y0 * y1).extract(mi(1, 1), 0) == doctest::Approx(1.0));
  const auto z0 = Jetd::seed_fiber(0.0, 0, L), z1 = Jetd::seed_fiber(0.0, 1, L);
  CHECK((z0 * z0 * z1).extract(mi(2, 1), 0) == 2.0);
  CHECK_THROWS_AS(c.extract(mi(0, 0), 2), InputError);
}

TEST_CASE("polynomials are reproduced exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 1; n <= 4; ++n) {
    const auto L = JetLayout::get(n, 5, 2);
    // p(y, t) = sum over monomials of random coefficients, evaluated at the origin
    // shifted by y0, t0 through seeded jets.
    std::vector<double> y0(static_cast<std::size_t>(n));
    for (auto& v : y0) v = u(rng);
    std::vector<Jetd> ys;
    for (int i = 0; i < n; ++i) ys.push_back(Jetd::seed_fiber(y0[static_cast<std::size_t>(i)], i, L));
    const auto t = Jetd::seed_base(0.2, 1.0, L);

    const auto& monos = L->monomials();
    std::vector<double> coef(monos.size() * 3);
    for (auto& c : coef) c = u(rng);
    Jetd p(L);
    for (std::size_t m = 0; m < monos.size(); ++m)
      for (int q = 0; q <= 2; ++q) {
        Jetd term(L, coef[m * 3 + static_cast<std::size_t>(q)]);
        for (int i = 0; i < n; ++i)
          for (int e = 0; e < monos[m][static_cast<std::size_t>(i)]; ++e) term = term * (ys[static_cast<std::size_t>(i)] - y0[static_cast<std::size_t>(i)]);
        for (int e = 0; e < q; ++e) term = term * (t - 0.2);
        p += term;
      }
    // In shifted coordinates every partial is the coefficient times the factorials.
    for (std::size_t m = 0; m < monos.size(); ++m)
      for (int q = 0; q <= 2; ++q) {
        double f = factorial(q);
        for (int i = 0; i < n; ++i) f *= factorial(monos[m][static_cast<std::size_t>(i)]);
        const double expected = coef[m * 3 + static_cast<std::size_t>(q)] * f;
        CHECK(p.extract(monos[m], q) == doctest::Approx(expected).epsilon(1e-14));
      }
  }
}

TEST_CASE("Leibniz rule on random jets") {
  std::mt19937_64 rng(5);
  const auto L = JetLayout::get(3, 5, 2);
  const auto a = random_jet(L, rng), b = random_jet(L, rng);
  const auto ab = a * b;
  double worst = 0;
  for (const auto& m : L->monomials())
    for (int q = 0; q <= 2; ++q) {
      double sum = 0;
      // sum over sub-multi-indices k <= m, r <= q of binomials * d^k a * d^(m-k) b
      for (const auto& k : L->monomials()) {
        bool le = true;
        for (int i = 0; i < 3; ++i) le = le && k[static_cast<std::size_t>(i)] <= m[static_cast<std::size_t>(i)];
        if (!le) continue;
        MultiIndex rest{};
        double binom = 1;
        for (int i = 0; i < 3; ++i) {
          const auto ii = static_cast<std::size_t>(i);
          rest[ii] = m[ii] - k[ii];
          binom *= factorial(m[ii]) / (factorial(k[ii]) * factorial(rest[ii]));
        }
        for (int r = 0; r <= q; ++r)
          sum += binom * factorial(q) / (factorial(r) * factorial(q - r)) * a.extract(k, r) * b.extract(rest, q - r);
      }
      worst = std::max(worst, std::abs(ab.extract(m, q) - sum) / (1 + std::abs(sum)));
    }
  CHECK(worst < 1e-12);
}

TEST_CASE("fiber and base differentiation") {
  const auto L = JetLayout::get(2, 3, 2);
  const auto y0 = Jetd::seed_fiber(0.5, 0, L), y1 = Jetd::seed_fiber(2.0, 1, L);
  const auto t = Jetd::seed_base(1.5, 1.0, L);
  const auto f = y0 * y0 * y1 * t * t;
  const auto d0 = f.diff_fiber(0);
  CHECK(d0.value() == doctest::Approx(2 * 0.5 * 2.0 * 1.5 * 1.5));
  const auto dt = f.diff_base();
  CHECK(dt.value() == doctest::Approx(0.25 * 2.0 * 2 * 1.5));
  CHECK(dt.layout()->deg_x() == 1);
}

TEST_CASE("phi composition matches Richardson finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::vector<PhiFamily> families = {PhiFamily::randers(), PhiFamily::kropina(), PhiFamily::matsumoto(),
                                           PhiFamily::randers_type(1, 0.5, 0.3), PhiFamily::rk_change(-0.5, -1)};
  const auto L = JetLayout::get(2, 2, 0);
  for (const auto& phi : families) {
    for (int trial = 0; trial < 10; ++trial) {
      // s(y) = (c0 + c1 y0 + c2 y1) / sqrt(1 + y0^2 + y1^2) evaluated near a point inside the domain
      const double c1 = 0.2 * u(rng), c2 = 0.2 * u(rng);
      const double target = phi.one_sided() ? phi.admissible_sign() * (0.3 + 0.2 * std::abs(u(rng))) : 0.3 * u(rng);
      const double p0 = 0.1 * u(rng), p1 = 0.1 * u(rng);
      auto s_of = [&](auto y0, auto y1) { return target + c1 * (y0 - p0) + c2 * (y1 - p1) + 0.05 * (y0 - p0) * (y1 - p1); };
      const auto y0 = Jetd::seed_fiber(p0, 0, L), y1 = Jetd::seed_fiber(p1, 1, L);
      const auto s = s_of(y0, y1);
      const auto composed = compose(s, phi.expand(s.value(), s.total_degree()));
      auto f = [&](double a, double b) { return phi.value(s_of(a, b)); };
      auto central = [&](double h) { return (f(p0 + h, p1) - f(p0 - h, p1)) / (2 * h); };
      const double h = 1e-5;
      const double fd = (4 * central(h / 2) - central(h)) / 3;
      CHECK(composed.value() == doctest::Approx(f(p0, p1)).epsilon(1e-14));
      CHECK(std::abs(composed.extract(mi(1, 0), 0) - fd) <= 1e-7 * (1 + std::abs(fd)));
    }
  }
}

TEST_CASE("phi family derivatives") {
  auto d = PhiFamily::randers().derivatives(0.2, 5);
  CHECK(d[0] == doctest::Approx(1.2));
  CHECK(d[1] == doctest::Approx(1.0));
  for (int k = 2; k <= 5; ++k) CHECK(d[static_cast<std::size_t>(k)] == 0.0);

  d = PhiFamily::kropina().derivatives(0.5, 1);
  CHECK(d[0] == doctest::Approx(2.0));
  CHECK(d[1] == doctest::Approx(-4.0));

  d = PhiFamily::matsumoto().derivatives(0.0, 5);
  const double expected[] = {1, 1, 2, 6, 24, 120};
  for (int k = 0; k <= 5; ++k) CHECK(d[static_cast<std::size_t>(k)] == doctest::Approx(expected[k]));

  CHECK_THROWS_AS(PhiFamily::kropina().expand(-0.1, 2), DomainError);
  CHECK_THROWS_AS(PhiFamily::matsumoto().expand(1.0, 2), DomainError);
  CHECK_THROWS_AS(PhiFamily::from_name("nope", {}), InputError);
}

TEST_CASE("phi derivatives agree with Richardson differences on the validity interval") {
  const std::vector<PhiFamily> families = {PhiFamily::kropina(), PhiFamily::matsumoto(), PhiFamily::randers_type(1, 0.5, 0.3),
                                           PhiFamily::rk_change(-0.5, -1)};
  for (const auto& phi : families) {
    for (double frac : {0.2, 0.45, 0.7}) {
      const auto dom = phi.domain();
      const double lo = std::max(dom.lo, -2.0), hi = std::min(dom.hi, 2.0);
      const double s = lo + frac * (hi - lo);
      const auto d = phi.derivatives(s, 5);
      for (int k = 1; k <= 5; ++k) {
        auto g = [&](double t) { return phi.derivatives(t, k - 1)[static_cast<std::size_t>(k - 1)]; };
        auto central = [&](double h) { return (g(s + h) - g(s - h)) / (2 * h); };
        const double fd = (4 * central(0.5e-5) - central(1e-5)) / 3;
        CHECK(std::abs(d[static_cast<std::size_t>(k)] - fd) <= 1e-7 * (1 + std::abs(fd)));
      }
    }
  }
}
