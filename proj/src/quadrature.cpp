#include "finsler/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "finsler/errors.hpp"

namespace finsler {

Rule1D gauss_legendre(int m, double a, double b) {
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(m));
  r.weights.resize(static_cast<std::size_t>(m));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= m; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = mid - half * z;
    r.weights[static_cast<std::size_t>(i)] = 2.0 * half / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

namespace {

Rule1D split_gauss(int m_half, double a, double mid, double b) {
  auto lo = gauss_legendre(m_half, a, mid);
  const auto hi = gauss_legendre(m_half, mid, b);
  lo.nodes.insert(lo.nodes.end(), hi.nodes.begin(), hi.nodes.end());
  lo.weights.insert(lo.weights.end(), hi.weights.begin(), hi.weights.end());
  return lo;
}

SphereRule build(int n, int level) {
  const double scale = level == 0 ? 0.5 : 1.0;
  const double two_pi = 2.0 * std::numbers::pi;
  SphereRule rule;
  if (n == 2) {
    const int m = static_cast<int>(4096 * scale);
    // Start on the equator {u_0 = 0} so both hemisphere boundaries are nodes.
    for (int k = 0; k < m; ++k) {
      const double t = 0.5 * std::numbers::pi + two_pi * k / m;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      rule.nodes.push_back(u);
      rule.weights.push_back(two_pi / m);
    }
  } else if (n == 3) {
    const auto polar = split_gauss(static_cast<int>(32 * scale), -1.0, 0.0, 1.0);
    const int m_az = static_cast<int>(128 * scale);
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
      const double t = polar.nodes[i], st = std::sqrt(1.0 - t * t);
      for (int k = 0; k < m_az; ++k) {
        const double ph = two_pi * k / m_az;
        Vector u(3);
        u << t, st * std::cos(ph), st * std::sin(ph);
        rule.nodes.push_back(u);
        rule.weights.push_back(polar.weights[i] * two_pi / m_az);
      }
    }
  } else if (n == 4) {
    const auto polar = split_gauss(static_cast<int>(24 * scale), 0.0, 0.5 * std::numbers::pi, std::numbers::pi);
    const auto second = gauss_legendre(static_cast<int>(96 * scale), -1.0, 1.0);
    const int m_az = static_cast<int>(96 * scale);
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
      const double th = polar.nodes[i], c1 = std::cos(th), s1 = std::sin(th);
      for (std::size_t j = 0; j < second.nodes.size(); ++j) {
        const double t2 = second.nodes[j], s2 = std::sqrt(1.0 - t2 * t2);
        for (int k = 0; k < m_az; ++k) {
          const double ph = two_pi * k / m_az;
          Vector u(4);
          u << c1, s1 * t2, s1 * s2 * std::cos(ph), s1 * s2 * std::sin(ph);
          rule.nodes.push_back(u);
          rule.weights.push_back(polar.weights[i] * s1 * s1 * second.weights[j] * two_pi / m_az);
        }
      }
    }
  } else {
    throw InputError("sphere_rule: dimension must lie in [2, 4]");
  }
  return rule;
}

}  // namespace

const SphereRule& sphere_rule(int n, int level) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, SphereRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({n, level});
  if (it == cache.end()) it = cache.emplace(std::pair{n, level}, build(n, level)).first;
  return it->second;
}

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

}  // namespace finsler
