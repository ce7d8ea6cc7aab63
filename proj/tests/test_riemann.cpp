#include <doctest.h>

#include <random>

#include "finsler/riemann.hpp"
#include "finsler/zoo.hpp"
#include "helpers.hpp"

using namespace finsler;
using namespace testing_support;

TEST_CASE("Euclidean background") {
  const auto spec = MetricSpec::from_strings("e", 2, {{"1"}, {"0", "1"}}, {"x1*x2", "sin(x1)"}, PhiFamily::randers(), box(2, -1, 1));
  Vector x(2);
  x << 0.3, -0.4;
  const auto st = riemann_state(spec, x);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) CHECK(st.gamma(i, j, k) == 0.0);
  Matrix db(2, 2);
  db << x(1), x(0), std::cos(x(0)), 0;
  CHECK((st.nabla_b - db).norm() < 1e-14);
  CHECK((st.r - 0.5 * (db + db.transpose())).norm() < 1e-14);
}

TEST_CASE("parallel form") {
  const auto spec = euclid({0.3, 0.1, 0}, PhiFamily::randers());
  const auto st = riemann_state(spec, Vector::Constant(3, 0.2));
  CHECK(st.r.norm() == 0.0);
  CHECK(st.s.norm() == 0.0);
  CHECK(st.s_vec.norm() == 0.0);
  Vector y(3);
  y << 1, -2, 0.5;
  const auto rs = rs_contractions(st, y);
  CHECK(rs.r00 == 0.0);
  CHECK(rs.r0 == 0.0);
  CHECK(rs.s0 == 0.0);
  CHECK(rs.r_i0.norm() == 0.0);
  CHECK(rs.s_i0.norm() == 0.0);
  CHECK(rs.s_up_i0.norm() == 0.0);
}

TEST_CASE("Hopf form is Killing of constant length") {
  const auto spec = zoo_get("hopf-kropina");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  double r = 0, s_vec = 0, s_max = 0, db2 = 0;
  for (int k = 0; k < 50; ++k) {
    Vector x(3);
    x << u(rng), u(rng), u(rng);
    const auto st = riemann_state(spec, x);
    r = std::max(r, st.r.cwiseAbs().maxCoeff());
    s_vec = std::max(s_vec, st.s_vec.cwiseAbs().maxCoeff());
    s_max = std::max(s_max, st.s.cwiseAbs().maxCoeff());
    db2 = std::max(db2, st.d_b_sq.cwiseAbs().maxCoeff());
    CHECK(st.b_sq == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(r <= 1e-9);
  CHECK(s_vec <= 1e-9);
  CHECK(db2 <= 1e-9);
  CHECK(s_max > 0.1);
}

TEST_CASE("metric compatibility, symmetric Christoffel symbols and ybar s^i_0 = 0") {
  const auto spec = curved(PhiFamily::randers());
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    Vector x(3), y(3);
    x << u(rng), u(rng), u(rng);
    y << u(rng), u(rng), u(rng);
    const auto st = riemann_state(spec, x);
    CHECK(metric_compatibility_residual(st) <= 1e-10);
    double asym = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) asym = std::max(asym, std::abs(st.gamma(i, j, l) - st.gamma(i, l, j)));
    CHECK(asym == 0.0);
    const auto rs = rs_contractions(st, y);
    const Vector y_bar = st.a * y;
    CHECK(std::abs(y_bar.dot(rs.s_up_i0)) <= 1e-13 * (1 + y.squaredNorm() * st.s.norm()));
    CHECK((st.r + st.s - st.nabla_b).norm() < 1e-14);
    CHECK(rs.r00 == doctest::Approx(y.dot(st.r * y)));
  }
}

TEST_CASE("riemann errors") {
  const auto spec = MetricSpec::from_strings("bad", 2, {{"1"}, {"2", "1"}}, {"0", "0"}, PhiFamily::randers(), box(2, -1, 1));
  CHECK_THROWS_AS(riemann_state(spec, Vector::Zero(2)), DomainError);
  CHECK_THROWS_AS(MetricSpec::from_strings("bad", 2, {{"1"}, {"0", "x3"}}, {"0", "0"}, PhiFamily::randers(), box(2, -1, 1)),
                  InputError);
}
