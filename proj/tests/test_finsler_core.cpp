#include <doctest.h>

#include <cmath>
#include <numbers>

#include "finsler/classify.hpp"
#include "finsler/finsler_core.hpp"
#include "finsler/quadrature.hpp"
#include "finsler/zoo.hpp"
#include "helpers.hpp"

using namespace finsler;
using namespace testing_support;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

// Busemann-Hausdorff density in n = 2 by the area of the indicatrix,
// 1/2 * integral of F(cos t, sin t)^-2 over a fine uniform grid.
double sigma_polar(const MetricSpec& spec, const Vector& x, int m) {
  double area = 0;
  for (int k = 0; k < m; ++k) {
    const double t = 2 * std::numbers::pi * (k + 0.5) / m;
    const double f = F_value(spec, x, vec({std::cos(t), std::sin(t)}));
    area += 0.5 / (f * f);
  }
  area *= 2 * std::numbers::pi / m;
  return std::numbers::pi / area;
}

}  // namespace

TEST_CASE("F values") {
  CHECK(F_value(euclid({0, 0}, PhiFamily::randers()), Vector::Zero(2), vec({3, 4})) == doctest::Approx(5.0));
  CHECK(F_value(euclid({1, 0}, PhiFamily::kropina()), Vector::Zero(2), vec({1, 0})) == doctest::Approx(1.0));
  const auto spec = euclid({0, 0, 0}, PhiFamily::matsumoto());
  CHECK(F_value(spec, Vector::Zero(3), vec({1, 2, 2})) == doctest::Approx(3.0));
  CHECK_THROWS_AS(F_value(euclid({1, 0}, PhiFamily::kropina()), Vector::Zero(2), vec({-1, 0})), DomainError);
  CHECK_THROWS_AS(F_value(spec, Vector::Zero(3), Vector::Zero(3)), DomainError);
}

TEST_CASE("Euclidean fundamental tensor") {
  const auto fd = fundamental(euclid({0, 0}, PhiFamily::randers()), Vector::Zero(2), vec({1, 0}));
  CHECK((fd.g - Matrix::Identity(2, 2)).norm() < 1e-15);
  Matrix h(2, 2);
  h << 0, 0, 0, 1;
  CHECK((fd.h - h).norm() < 1e-15);
  CHECK((fd.y_low - vec({1, 0})).norm() < 1e-15);
}

TEST_CASE("Cartan tensors") {
  const auto riem = cartan_tensors(euclid({0, 0, 0}, PhiFamily::randers()), Vector::Zero(3), vec({1, 2, 3}));
  CHECK(Eigen::Tensor<double, 0>(riem.C.abs().maximum())() == 0.0);

  const auto randers = zoo_get("euclid-randers");
  const auto samples = draw_samples(randers, 20, 3);
  for (const auto& s : samples.samples) {
    const auto ct = cartan_tensors(randers, s.x, s.y);
    CHECK(Eigen::Tensor<double, 0>(ct.M.abs().maximum())() <= 1e-10);
    CHECK(Eigen::Tensor<double, 0>(ct.C.abs().maximum())() > 1e-3);
  }

  const auto kropina = zoo_get("hopf-kropina");
  for (const auto& s : draw_samples(kropina, 20, 4).samples) {
    const auto ct = cartan_tensors(kropina, s.x, s.y);
    CHECK(Eigen::Tensor<double, 0>(ct.M.abs().maximum())() <= 1e-8);
  }
}

TEST_CASE("Berwald background has vanishing spray and curvature") {
  for (const auto& phi : {PhiFamily::randers(), PhiFamily::matsumoto(), PhiFamily::randers_type(1, 0.5, 0.3)}) {
    const auto spec = euclid({0.3, -0.1, 0.2}, phi);
    const Vector x = vec({0.1, 0.5, -0.3}), y = vec({1, 0.4, -0.7});
    CHECK(spray(spec, x, y).norm() == 0.0);
    const auto bl = berwald_landsberg(spec, x, y);
    CHECK(Eigen::Tensor<double, 0>(bl.B.abs().maximum())() == 0.0);
    CHECK(Eigen::Tensor<double, 0>(bl.L.abs().maximum())() == 0.0);
    CHECK(Eigen::Tensor<double, 0>(bl.PRED.abs().maximum())() == 0.0);
    CHECK(bl.J.norm() == 0.0);
    CHECK(std::abs(s_curvature(spec, x, y)) <= 1e-8);
  }
  const auto kropina = euclid({0.5, 0, 0}, PhiFamily::kropina());
  CHECK(spray(kropina, Vector::Zero(3), vec({1, 0.2, 0.1})).norm() == 0.0);
}

TEST_CASE("volume density") {
  for (int n : {2, 3, 4}) {
    const auto spec = euclid(std::vector<double>(static_cast<std::size_t>(n), 0.0), PhiFamily::randers());
    const auto v = volume_density(spec, Vector::Zero(n));
    CHECK(v.converged);
    CHECK(std::abs(v.sigma - 1) <= 1e-10);
    CHECK(v.grad_ln_sigma.norm() <= 1e-12);
  }

  const auto randers = euclid({0.5, 0}, PhiFamily::randers());
  const auto v = volume_density(randers, Vector::Zero(2));
  const double oracle = sigma_polar(randers, Vector::Zero(2), 8192);
  CHECK(std::abs(v.sigma - oracle) <= 1e-8);
  CHECK(std::abs(v.sigma - std::pow(0.75, 1.5)) <= 1e-10);

  const auto v3 = volume_density(euclid({0.3, 0.2, 0}, PhiFamily::randers()), Vector::Zero(3));
  CHECK(std::abs(v3.sigma - std::pow(1 - 0.13, 2.0)) <= 1e-10);

  // Kropina indicatrix is the sphere |y - b/2| = b/2.
  for (int n : {2, 3}) {
    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    b[0] = 0.5;
    const auto vk = volume_density(euclid(b, PhiFamily::kropina()), Vector::Zero(n));
    CHECK(vk.converged);
    CHECK(vk.sigma == doctest::Approx(std::pow(4.0, n)).epsilon(1e-10));
  }

  // A curved alpha: sigma scales with sqrt(det a).
  const auto hopf = zoo_get("hopf-randers");
  const Vector x = vec({0.2, -0.1, 0.4});
  const auto vh = volume_density(hopf, x);
  const double det = a_value(hopf, x).determinant();
  CHECK(vh.sigma == doctest::Approx(std::sqrt(det) * std::pow(1 - 0.16, 2.0)).epsilon(1e-9));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * std::numbers::pi / 3));
}

TEST_CASE("S-curvature") {
  const auto kropina = zoo_get("hopf-kropina");
  for (const auto& s : draw_samples(kropina, 5, 8).samples) CHECK(std::abs(s_curvature(kropina, s.x, s.y)) <= 1e-6);

  // A non-Killing beta has nonzero S; S is 1-homogeneous in y.
  const auto spec = curved(PhiFamily::randers());
  const Vector x = vec({0.1, 0.3, -0.2}), y = vec({0.5, -0.3, 0.8});
  const double s1 = s_curvature(spec, x, y), s2 = s_curvature(spec, x, 2.5 * y);
  CHECK(std::abs(s1) > 1e-4);
  CHECK(s2 == doctest::Approx(2.5 * s1).epsilon(1e-10));
}

TEST_CASE("invariants on zoo samples") {
  for (const auto& entry : zoo_list()) {
    const auto spec = zoo_get(entry.id);
    for (const auto& s : draw_samples(spec, 10, 21).samples) {
      const auto ps = point_state(spec, s.x, s.y);
      const auto r = invariant_residuals(spec, ps);
      CHECK_MESSAGE(r.max_contraction() <= 1e-9, entry.id);
      CHECK_MESSAGE(r.max_symmetry() <= 1e-10, entry.id);
      CHECK(ps.F == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(ps.div_G == doctest::Approx(ps.N.trace()));
    }
  }
  const auto spec = curved(PhiFamily::matsumoto());
  const auto ps = point_state(spec, vec({0.1, 0.2, 0.3}), vec({1, 0.2, -0.1}));
  const auto r = invariant_residuals(spec, ps);
  CHECK(r.max_contraction() <= 1e-9);
  CHECK(r.max_symmetry() <= 1e-10);
}

TEST_CASE("point state") {
  const auto spec = zoo_get("hopf-randers");
  const Vector x = vec({0.1, 0.2, 0.3}), y = vec({1, 0.2, -0.1});
  const auto vol = volume_density(spec, x);
  const auto ps = point_state(spec, x, y, &vol);
  REQUIRE(ps.S.has_value());
  CHECK(std::abs(*ps.S) <= 1e-6);
  CHECK((ps.G - spray(spec, x, y)).norm() <= 1e-14 * (1 + ps.G.norm()));
  CHECK(!point_state(spec, x, y).S.has_value());
}
