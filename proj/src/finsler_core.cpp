#include "finsler/finsler_core.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <type_traits>

#include "finsler/quadrature.hpp"

namespace finsler {

namespace {

MultiIndex mi(std::initializer_list<int> axes) {
  MultiIndex m{};
  for (int a : axes) ++m[static_cast<std::size_t>(a)];
  return m;
}

// The tensor chain below differentiates F^2 up to five times and divides by g.
// Near the pole of a one-sided phi the Taylor coefficients of phi grow like
// 1/s^k and g is badly conditioned, so the chain runs in extended precision
// and only the finished tensors are rounded to double.
using Real = long double;
using Jetx = Jet<Real>;

Jetx widen(const Jetd& j) {
  Jetx w(j.layout());
  std::copy(j.coeffs().begin(), j.coeffs().end(), w.coeffs().begin());
  return w;
}

template <typename Scalar>
Series<Scalar> phi_taylor(const PhiFamily& phi, Scalar s, int order) {
  if constexpr (std::is_same_v<Scalar, double>)
    return phi.expand(s, order);
  else
    return phi.expand_extended(s, order);
}

template <typename Scalar>
Jet<Scalar> eval_F2_as(const PhiFamily& phi, const BaseFields& fields, const Vector& y, int deg_y) {
  using J = Jet<Scalar>;
  const int n = fields.n;
  const auto layout = JetLayout::get(n, deg_y, fields.a[0].layout()->deg_x());
  auto field = [&](const Jetd& f) {
    if constexpr (std::is_same_v<Scalar, double>)
      return f.broadcast(layout);
    else
      return widen(f).broadcast(layout);
  };
  std::vector<J> ys;
  ys.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ys.push_back(J::seed_fiber(y(i), i, layout));
  J alpha2(layout), beta(layout);
  for (int i = 0; i < n; ++i) {
    J ybar(layout);
    for (int j = 0; j < n; ++j) ybar += field(fields.a_at(i, j)) * ys[static_cast<std::size_t>(j)];
    alpha2 += ybar * ys[static_cast<std::size_t>(i)];
    beta += field(fields.b[static_cast<std::size_t>(i)]) * ys[static_cast<std::size_t>(i)];
  }
  if (!(alpha2.value() > 1e-16)) throw DomainError("alpha-positive", "alpha(x, y) vanishes");
  const J alpha = sqrt(alpha2);
  const J s = beta / alpha;
  const Scalar s0 = s.value();
  const auto taylor = phi_taylor(phi, s0, s.total_degree());
  const Scalar phi0 = taylor[0], dphi0 = taylor[1];
  const double s0d = static_cast<double>(s0);
  if (!(phi0 > 0)) throw DomainError("phi-positive", "phi(s) <= 0 at s = " + std::to_string(s0d));
  if (!(phi0 - s0 * dphi0 > 0)) throw DomainError("phi-minus-s-dphi-positive", "phi - s phi' <= 0 at s = " + std::to_string(s0d));
  const J p = compose(s, taylor);
  return alpha2 * (p * p);
}

// F^2 as a fiber jet, plus its x^k-derivatives (also fiber jets) when needed
// by the spray.
struct F2Jets {
  Jetx F2;
  std::vector<Jetx> dx;  // dx[k] = d F^2 / d x^k
};

F2Jets f2_jets(const MetricSpec& spec, const Vector& x, const Vector& y, int deg_y, bool with_base) {
  const int n = spec.n;
  if (x.size() != n || y.size() != n) throw InputError("point has wrong dimension");
  F2Jets out;
  if (!with_base) {
    out.F2 = eval_F2_as<Real>(spec.phi, base_fields(spec, x, Vector::Unit(n, 0), 0), y, deg_y);
    return out;
  }
  for (int k = 0; k < n; ++k) {
    const auto jet = eval_F2_as<Real>(spec.phi, base_fields(spec, x, Vector::Unit(n, k), 1), y, deg_y);
    if (k == 0) out.F2 = jet.truncated(deg_y, 0);
    out.dx.push_back(jet.diff_base());
  }
  return out;
}

Fundamental fundamental_from(const Jetx& F2, const Vector& y) {
  const int n = static_cast<int>(y.size());
  Fundamental f;
  const double F2v = static_cast<double>(F2.value());
  f.F = std::sqrt(F2v);
  f.g.resize(n, n);
  f.y_low.resize(n);
  for (int i = 0; i < n; ++i) {
    f.y_low(i) = static_cast<double>(F2.extract(mi({i}), 0) / 2);
    for (int j = 0; j < n; ++j) f.g(i, j) = static_cast<double>(F2.extract(mi({i, j}), 0) / 2);
  }
  Eigen::LLT<Matrix> llt(f.g);
  if (llt.info() != Eigen::Success) throw DomainError("g-positive-definite", "fundamental tensor is not positive definite");
  f.g_inv = llt.solve(Matrix::Identity(n, n));
  f.h = f.g - f.y_low * f.y_low.transpose() / F2v;
  return f;
}

CartanTensors cartan_from(const Jetx& F2, const Fundamental& f) {
  const int n = static_cast<int>(f.g.rows());
  CartanTensors c;
  c.C = zeros3(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const double v = static_cast<double>(F2.extract(mi({i, j, k}), 0) / 4);
        c.C(i, j, k) = c.C(i, k, j) = c.C(j, i, k) = c.C(j, k, i) = c.C(k, i, j) = c.C(k, j, i) = v;
      }
  c.I = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) c.I(i) += f.g_inv(j, k) * c.C(i, j, k);
  const Tensor3 trace_part = sym_vh(c.I, f.h);
  c.M = c.C - trace_part * (1.0 / (n + 1));
  return c;
}

// Inverse of a symmetric matrix of jets by Gauss-Jordan elimination.
std::vector<Jetx> invert(std::vector<Jetx> a, int n) {
  const auto layout = a[0].layout();
  std::vector<Jetx> inv;
  inv.reserve(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.emplace_back(layout, Real(i == j ? 1 : 0));
  auto at = [n](std::vector<Jetx>& m, int i, int j) -> Jetx& { return m[static_cast<std::size_t>(i * n + j)]; };
  for (int c = 0; c < n; ++c) {
    const Jetx& pivot = at(a, c, c);
    if (!(std::abs(pivot.value()) > 1e-300)) throw DomainError("g-nondegenerate", "singular fundamental tensor");
    const Jetx rp = Real(1) / pivot;
    for (int j = 0; j < n; ++j) {
      at(a, c, j) = at(a, c, j) * rp;
      at(inv, c, j) = at(inv, c, j) * rp;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const Jetx factor = at(a, r, c);
      for (int j = 0; j < n; ++j) {
        at(a, r, j) -= factor * at(a, c, j);
        at(inv, r, j) -= factor * at(inv, c, j);
      }
    }
  }
  return inv;
}

// G^i as fiber jets of degree deg_y - 2.
std::vector<Jetx> spray_jets(const F2Jets& jets, const Vector& y) {
  const int n = static_cast<int>(y.size());
  const int deg_y = jets.F2.layout()->deg_y();
  std::vector<Jetx> g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.push_back(Real(0.5) * jets.F2.diff_fiber(i).diff_fiber(j));
  const auto g_inv = invert(std::move(g), n);

  const auto lower = JetLayout::get(n, deg_y - 1, 0);
  std::vector<Jetx> ys;
  for (int k = 0; k < n; ++k) ys.push_back(Jetx::seed_fiber(y(k), k, lower));
  std::vector<Jetx> bracket;
  for (int l = 0; l < n; ++l) {
    Jetx acc = -jets.dx[static_cast<std::size_t>(l)].truncated(deg_y - 1, 0);
    for (int k = 0; k < n; ++k) acc += ys[static_cast<std::size_t>(k)] * jets.dx[static_cast<std::size_t>(k)].diff_fiber(l);
    bracket.push_back(acc.truncated(deg_y - 2, 0));
  }
  std::vector<Jetx> G;
  for (int i = 0; i < n; ++i) {
    Jetx acc(bracket[0].layout());
    for (int l = 0; l < n; ++l) acc += g_inv[static_cast<std::size_t>(i * n + l)] * bracket[static_cast<std::size_t>(l)];
    G.push_back(Real(0.25) * acc);
  }
  return G;
}

BerwaldLandsberg berwald_from(const std::vector<Jetx>& G, const Fundamental& f, const Vector& y) {
  const int n = static_cast<int>(y.size());
  BerwaldLandsberg out;
  out.B = zeros4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int l = k; l < n; ++l) {
          const double v = static_cast<double>(G[static_cast<std::size_t>(i)].extract(mi({j, k, l}), 0));
          out.B(i, j, k, l) = out.B(i, j, l, k) = out.B(i, k, j, l) = out.B(i, k, l, j) = out.B(i, l, j, k) =
              out.B(i, l, k, j) = v;
        }
  out.L = zeros3(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double acc = 0;
        for (int m = 0; m < n; ++m) acc += f.y_low(m) * out.B(m, j, k, l);
        out.L(j, k, l) = -0.5 * acc;
      }
  out.J = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.J(i) += f.g_inv(j, k) * out.L(i, j, k);
  const Tensor3 trace_part = sym_vh(out.J, f.h);
  out.PRED = out.L - trace_part * (1.0 / (n + 1));
  return out;
}

}  // namespace

Jetd eval_F2(const PhiFamily& phi, const BaseFields& fields, const Vector& y, int deg_y) {
  return eval_F2_as<double>(phi, fields, y, deg_y);
}

Jetd eval_F2(const MetricSpec& spec, const Vector& x, const Vector& y, int deg_y, int deg_x, const Vector& direction) {
  return eval_F2(spec.phi, base_fields(spec, x, direction, deg_x), y, deg_y);
}

double F_value(const MetricSpec& spec, const Vector& x, const Vector& y) {
  return std::sqrt(eval_F2(spec, x, y, 0, 0, Vector::Unit(spec.n, 0)).value());
}

Fundamental fundamental(const MetricSpec& spec, const Vector& x, const Vector& y) {
  return fundamental_from(f2_jets(spec, x, y, 2, false).F2, y);
}

CartanTensors cartan_tensors(const MetricSpec& spec, const Vector& x, const Vector& y) {
  const auto jets = f2_jets(spec, x, y, 3, false);
  return cartan_from(jets.F2, fundamental_from(jets.F2, y));
}

Vector spray(const MetricSpec& spec, const Vector& x, const Vector& y) {
  const auto G = spray_jets(f2_jets(spec, x, y, 2, true), y);
  Vector out(spec.n);
  for (int i = 0; i < spec.n; ++i) out(i) = static_cast<double>(G[static_cast<std::size_t>(i)].value());
  return out;
}

BerwaldLandsberg berwald_landsberg(const MetricSpec& spec, const Vector& x, const Vector& y) {
  const auto jets = f2_jets(spec, x, y, 5, true);
  return berwald_from(spray_jets(jets, y), fundamental_from(jets.F2, y), y);
}

VolumeDensity volume_density(const MetricSpec& spec, const Vector& x) {
  const int n = spec.n;
  const auto& phi = spec.phi;
  const Vector b = b_value(spec, x);

  // Align the quadrature pole with the normal of {beta = 0}.
  Matrix frame = Matrix::Identity(n, n);
  if (b.norm() > 1e-14) {
    const Vector pole = b.normalized();
    const Vector v = Vector::Unit(n, 0) - pole;
    if (v.norm() > 1e-14) frame -= 2.0 * v * v.transpose() / v.squaredNorm();
  }

  // One base-direction pass per coordinate; each yields Vol and d_k Vol.
  std::vector<BaseFields> fields;
  for (int k = 0; k < n; ++k) fields.push_back(base_fields(spec, x, Vector::Unit(n, k), 1));
  const int sign = phi.admissible_sign();

  auto integrate = [&](int level, Vector& dvol) {
    const auto& rule = sphere_rule(n, level);
    double vol = 0;
    dvol = Vector::Zero(n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Vector u = frame * rule.nodes[q];
      if (sign != 0) {
        const double beta = b.dot(u);
        if (beta * sign <= 0) continue;  // F = +inf outside the admissible half-space
      }
      for (int k = 0; k < n; ++k) {
        const Jetd F2 = eval_F2(phi, fields[static_cast<std::size_t>(k)], u, 0);
        const Jetd integrand = compose(F2, pow(Seriesd::variable(F2.value(), 1), -0.5 * n));
        if (k == 0) vol += rule.weights[q] * integrand.value();
        dvol(k) += rule.weights[q] * integrand.extract(MultiIndex{}, 1);
      }
    }
    dvol /= n;
    return vol / n;
  };

  Vector d_fine, d_coarse;
  const double vol = integrate(1, d_fine);
  const double vol_coarse = integrate(0, d_coarse);
  VolumeDensity out;
  out.sigma = unit_ball_volume(n) / vol;
  out.grad_ln_sigma = -d_fine / vol;
  const Vector grad_coarse = -d_coarse / vol_coarse;
  out.discrepancy = std::abs(vol - vol_coarse) / vol;
  for (int k = 0; k < n; ++k)
    out.discrepancy = std::max(out.discrepancy, std::abs(out.grad_ln_sigma(k) - grad_coarse(k)) / (1.0 + std::abs(out.grad_ln_sigma(k))));
  out.converged = out.discrepancy <= kQuadratureTolerance;
  return out;
}

double s_curvature(const MetricSpec& spec, const VolumeDensity& vol, const Vector& x, const Vector& y) {
  if (!vol.converged)
    throw DomainError("quadrature-convergence", "volume quadrature discrepancy " + std::to_string(vol.discrepancy));
  const auto G = spray_jets(f2_jets(spec, x, y, 3, true), y);
  double div = 0;
  for (int i = 0; i < spec.n; ++i) div += static_cast<double>(G[static_cast<std::size_t>(i)].extract(mi({i}), 0));
  return div - y.dot(vol.grad_ln_sigma);
}

double s_curvature(const MetricSpec& spec, const Vector& x, const Vector& y) {
  return s_curvature(spec, volume_density(spec, x), x, y);
}

PointState point_state(const MetricSpec& spec, const Vector& x, const Vector& y, const VolumeDensity* volume) {
  const int n = spec.n;
  const auto jets = f2_jets(spec, x, y, 5, true);
  const auto f = fundamental_from(jets.F2, y);
  const auto c = cartan_from(jets.F2, f);
  const auto G = spray_jets(jets, y);
  auto bl = berwald_from(G, f, y);

  PointState st;
  st.n = n;
  st.x = x;
  st.y = y;
  st.F = f.F;
  st.g = f.g;
  st.g_inv = f.g_inv;
  st.h = f.h;
  st.y_low = f.y_low;
  st.C = c.C;
  st.M = c.M;
  st.I = c.I;
  st.G.resize(n);
  st.N.resize(n, n);
  for (int i = 0; i < n; ++i) {
    st.G(i) = static_cast<double>(G[static_cast<std::size_t>(i)].value());
    for (int j = 0; j < n; ++j) st.N(i, j) = static_cast<double>(G[static_cast<std::size_t>(i)].extract(mi({j}), 0));
  }
  st.div_G = st.N.trace();
  st.B = std::move(bl.B);
  st.L = std::move(bl.L);
  st.PRED = std::move(bl.PRED);
  st.J = std::move(bl.J);
  if (volume != nullptr) {
    if (!volume->converged)
      throw DomainError("quadrature-convergence", "volume quadrature discrepancy " + std::to_string(volume->discrepancy));
    st.S = st.div_G - y.dot(volume->grad_ln_sigma);
  }
  return st;
}

}  // namespace finsler

namespace finsler {

InvariantResiduals invariant_residuals(const MetricSpec& spec, const PointState& ps) {
  const auto& y = ps.y;
  const double F = ps.F;
  const Matrix& gi = ps.g_inv;
  auto contraction = [&](const Tensor3& t) { return norm2(contract_first(t, y), gi) / (1 + norm3(t, gi) * F); };
  InvariantResiduals r;
  r.C_y = contraction(ps.C);
  r.M_y = contraction(ps.M);
  r.L_y = contraction(ps.L);
  r.I_y = std::abs(ps.I.dot(y)) / (1 + norm_covector(ps.I, gi) * F);
  r.J_y = std::abs(ps.J.dot(y)) / (1 + norm_covector(ps.J, gi) * F);
  r.h_y = norm_covector(ps.h * y, gi) / (1 + norm2(ps.h, gi) * F);
  r.gyy = std::abs(y.dot(ps.g * y) - F * F) / (F * F);
  r.sym_C = asymmetry3(ps.C, gi);
  r.sym_M = asymmetry3(ps.M, gi);
  r.sym_L = asymmetry3(ps.L, gi);
  const Vector G2 = spray(spec, ps.x, 2 * y);
  r.spray_homogeneity = (G2 - 4 * ps.G).norm() / (1 + 4 * ps.G.norm());
  return r;
}

}  // namespace finsler
