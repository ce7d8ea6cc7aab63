#include "finsler/alphabeta.hpp"

#include <cmath>
#include <limits>

namespace finsler {

ABScalars ab_scalars(const PhiFamily& phi, double s, double b_sq, int n, bool allow_aligned) {
  const bool aligned = allow_aligned && std::abs(b_sq - s * s) <= 1e-12 * b_sq;
  if (aligned) s = std::copysign(std::sqrt(b_sq), s);
  if (auto guard = phi.violated_guard(s, b_sq); guard && !(aligned && *guard == "b2-minus-s2-positive"))
    throw DomainError(*guard, "(alpha, beta) scalars at s = " + std::to_string(s));
  ABScalars k;
  k.n = n;
  k.s = s;
  k.b_sq = b_sq;

  constexpr int order = 5;
  const auto P = phi.expand(s, order);
  const auto S = Seriesd::variable(s, order);
  k.phi = P.derivative(0);
  k.dphi = P.derivative(1);
  k.d2phi = P.derivative(2);

  // Q(s) = phi' / (phi - s phi') as a series in s, then Delta(s) for Psi1.
  const auto dP = P.diff();
  const auto S4 = S.truncated(order - 1);
  const auto Q = dP / (P.truncated(order - 1) - S4 * dP);
  k.Q = Q.derivative(0);
  k.dQ = Q.derivative(1);
  k.d2Q = Q.derivative(2);
  k.d3Q = Q.derivative(3);
  const auto S3 = S.truncated(order - 2);
  const auto Q3 = Q.truncated(order - 2);
  const auto Delta = 1.0 + S3 * Q3 + (b_sq - S3 * S3) * Q.diff();
  k.Delta = Delta.value();
  if (!(k.Delta > 0)) throw DomainError("delta-positive", "Delta <= 0 at s = " + std::to_string(s));
  // Psi1 = sqrt(b^2 - s^2) Delta^(1/2) [sqrt(b^2 - s^2) Phi / Delta^(3/2)]'
  const auto S1 = S.truncated(1), Q1 = Q.truncated(1), dQ1 = Q.diff().truncated(1), D1 = Delta.truncated(1);
  const auto PhiS = -1.0 * (Q1 - S1 * dQ1) * (double(n) * D1 + 1.0 + S1 * Q1) - (b_sq - S1 * S1) * (1.0 + S1 * Q1) * Q.diff().diff().truncated(1);
  if (aligned) {
    k.Psi1 = std::numeric_limits<double>::quiet_NaN();
  } else {
    const auto f = sqrt(b_sq - S1 * S1) * PhiS / pow(D1, 1.5);
    k.Psi1 = std::sqrt(b_sq - s * s) * std::sqrt(k.Delta) * f.derivative(1);
  }

  const double Qm = k.Q - s * k.dQ;  // Q - s Q'
  const double bs = b_sq - s * s;
  k.Theta = Qm / (2 * k.Delta);
  k.Psi = k.dQ / (2 * k.Delta);
  k.Phi = -Qm * (n * k.Delta + 1 + s * k.Q) - bs * (1 + s * k.Q) * k.d2Q;
  k.Psi2 = 2.0 * (n + 1) * Qm + 3 * k.Phi / k.Delta;

  const double pp = k.phi * k.d2phi + k.dphi * k.dphi;
  k.rho = k.phi * (k.phi - s * k.dphi);
  k.rho0 = pp;
  k.rho1 = -(s * pp - k.phi * k.dphi);
  k.rho2 = s * (s * pp - k.phi * k.dphi);

  const double D2 = 2 * k.Delta * k.Delta;
  k.X4 = (-2 * k.Delta * k.d3Q + 3 * Qm * k.d2Q + 3 * bs * k.d2Q * k.d2Q) / D2;
  k.X6 = (Qm * Qm + (2 * (s + b_sq * k.Q) - bs * Qm) * k.d2Q) / D2;
  k.Y4 = -2 * k.Q * k.X4 + 3 * k.dQ * k.d2Q / k.Delta;
  k.Y6 = -2 * k.Q * k.X6 + Qm * k.dQ / k.Delta;
  k.Lambda = -k.d2Q;
  k.mu = -Qm / 3;
  k.Gamma = 1 / k.Delta;
  k.Pi = -k.Q / k.Delta;
  return k;
}

ABPoint ab_point(const MetricSpec& spec, const RiemannState& st, const Vector& y, bool allow_aligned) {
  ABPoint p;
  p.st = &st;
  p.y = y;
  p.y_bar = st.a * y;
  const double alpha2 = y.dot(p.y_bar);
  if (!(alpha2 > 1e-16)) throw DomainError("alpha-positive", "alpha(x, y) vanishes");
  p.alpha = std::sqrt(alpha2);
  p.beta = st.b.dot(y);
  p.s = p.beta / p.alpha;
  p.k = ab_scalars(spec.phi, p.s, st.b_sq, spec.n, allow_aligned);
  p.h_vec = p.alpha * st.b - p.s * p.y_bar;
  p.T = alpha2 * st.a - p.y_bar * p.y_bar.transpose();
  p.rs = rs_contractions(st, y);
  return p;
}

Vector spray_cf(const ABPoint& p) {
  const auto& st = *p.st;
  const int n = st.n;
  Vector G = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G(i) += 0.5 * st.gamma(i, j, k) * p.y(j) * p.y(k);
  const auto& k = p.k;
  const double a = p.alpha;
  G += a * k.Q * p.rs.s_up_i0;
  G += (-2 * k.Q * a * p.rs.s0 + p.rs.r00) * (k.Theta * p.y / a + k.Psi * st.b_up);
  return G;
}

Vector mean_landsberg_cf(const ABPoint& p) {
  const auto& st = *p.st;
  const auto& k = p.k;
  const auto& rs = p.rs;
  const int n = st.n;
  const double a = p.alpha, a2 = a * a;
  const double bs = k.b_sq - k.s * k.s;
  const double Qm = k.Q - k.s * k.dQ;
  const double PhiD = k.Phi / k.Delta;
  const double r_bar = rs.r00 - 2 * a * k.Q * rs.s0;

  Vector bracket = -a * k.dQ * rs.s0 * p.h_vec + a * k.Q * (a2 * st.s_vec - p.y_bar * rs.s0) + a2 * k.Delta * rs.s_i0 +
                   a2 * (rs.r_i0 - 2 * a * k.Q * st.s_vec) - r_bar * p.y_bar;
  Vector J = (2 * a2 / bs) * (PhiD + (n + 1) * Qm) * (rs.r0 + rs.s0) * p.h_vec + (a / bs) * (k.Psi1 + k.s * PhiD) * r_bar * p.h_vec +
             a * bracket * PhiD;
  return -J / (2 * a2 * a2 * k.Delta);
}

double jbar_cf(const ABPoint& p) {
  const auto& k = p.k;
  const auto& rs = p.rs;
  const double a = p.alpha;
  return -(k.Psi1 * (rs.r00 - 2 * a * k.Q * rs.s0) + a * k.Psi2 * (rs.r0 + rs.s0)) / (2 * a * a * k.Delta);
}

Tensor3 landsberg_cf(const ABPoint& p) {
  const auto& st = *p.st;
  const auto& k = p.k;
  const auto& rs = p.rs;
  const int n = st.n;
  const double a = p.alpha, a2 = a * a;
  const Vector D = a2 * (rs.s_i0 + k.Gamma * rs.r_i0 + k.Pi * a * st.s_vec) - (k.Gamma * rs.r00 + k.Pi * a * rs.s0) * p.y_bar;
  const Vector C = (k.X4 * rs.r00 + k.Y4 * a * rs.s0) * p.h_vec + 3 * k.Lambda * D;
  const Vector E = (k.X6 * rs.r00 + k.Y6 * a * rs.s0) * p.h_vec + 3 * k.mu * D;
  const Vector& h = p.h_vec;
  const double pre = -k.rho / (6 * std::pow(a, 5));
  Tensor3 L(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        L(i, j, l) = pre * (h(i) * h(j) * C(l) + h(j) * h(l) * C(i) + h(i) * h(l) * C(j) + 3 * E(i) * p.T(j, l) +
                            3 * E(j) * p.T(i, l) + 3 * E(l) * p.T(i, j));
  return L;
}

Vector mean_cartan_cf(const ABPoint& p) {
  const auto& k = p.k;
  const double a = p.alpha;
  return -k.Phi * (k.phi - k.s * k.dphi) / (2 * k.Delta * k.phi * a * a) * p.h_vec;
}

Vector mean_landsberg_killing_cf(const ABPoint& p) { return -p.k.Phi / (2 * p.alpha * p.k.Delta) * p.rs.s_i0; }

Tensor3 landsberg_killing_cf(const ABPoint& p) {
  const auto& k = p.k;
  const int n = p.st->n;
  const Matrix V = k.rho / (2 * std::pow(p.alpha, 3)) * (k.d2Q * p.h_vec * p.h_vec.transpose() + (k.Q - k.s * k.dQ) * p.T);
  const Vector& s0 = p.rs.s_i0;
  Tensor3 L(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) L(i, j, l) = V(i, j) * s0(l) + V(j, l) * s0(i) + V(l, i) * s0(j);
  return L;
}

Matrix fundamental_cf(const ABPoint& p) {
  const auto& st = *p.st;
  const auto& k = p.k;
  const Vector al = p.y_bar / p.alpha;
  return k.rho * st.a + k.rho0 * st.b * st.b.transpose() + k.rho1 * (st.b * al.transpose() + al * st.b.transpose()) +
         k.rho2 * al * al.transpose();
}

Matrix angular_cf(const ABPoint& p) {
  const auto& st = *p.st;
  const auto& k = p.k;
  const Vector al = p.y_bar / p.alpha;
  const double pp = k.phi * k.d2phi;
  return k.rho * st.a + pp * st.b * st.b.transpose() - k.s * pp * (st.b * al.transpose() + al * st.b.transpose()) -
         (k.rho - k.s * k.s * pp) * al * al.transpose();
}

LemmaResiduals lemma_residuals(const ABPoint& p, const PointState& ps, double premise_tol) {
  const auto& st = *p.st;
  const int n = st.n;
  LemmaResiduals out;
  out.premise_residual = std::max(norm2(st.r, st.a_inv), norm_covector(st.s_vec, st.a_inv));
  out.premise = out.premise_residual <= premise_tol;

  const Vector& yl = ps.y_low;
  const Vector& y = p.y;
  const Vector s_up0 = p.rs.s_up_i0;
  out.L1 = std::abs(yl.dot(s_up0)) / (1 + yl.norm() * s_up0.norm());

  // s^i_{j|k} = a^ih s_{hj|k}
  Vector s00 = Vector::Zero(n);  // s^i_{0|0}
  Vector bs0 = Vector::Zero(n);  // b^j s^i_{j|0}
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double v = st.a_inv(i, h) * st.ds(h, j, k) * y(k);
          s00(i) += v * y(j);
          bs0(i) += v * st.b_up(j);
        }
  // The derivative in y_i s^i_{0|0} = 0 is horizontal along the spray of F
  // (only then is y_i parallel); convert the Levi-Civita value using
  // N^i_m - N_alpha^i_m and G^m - G_alpha^m.
  Vector G_alpha = Vector::Zero(n);
  Matrix N_alpha = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        N_alpha(i, j) += st.gamma(i, j, k) * y(k);
        G_alpha(i) += 0.5 * st.gamma(i, j, k) * y(j) * y(k);
      }
  const Vector s00_F = s00 + (ps.N - N_alpha) * s_up0 - 2 * st.s_mixed * (ps.G - G_alpha);
  out.L2 = std::abs(yl.dot(s00_F)) / (1 + yl.norm() * s00_F.norm());
  const double rhs = p.k.rho * s_up0.dot(p.rs.s_i0);
  out.L3 = std::abs(yl.dot(bs0) - rhs) / (1 + std::abs(rhs) + yl.norm() * bs0.norm());

  const double b_g = norm_vector(st.b_up, ps.g);
  double bbbL = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) bbbL += st.b_up(i) * st.b_up(j) * st.b_up(k) * ps.L(i, j, k);
  out.L4 = std::abs(bbbL) / (1 + norm3(ps.L, ps.g_inv) * b_g * b_g * b_g);
  out.L5 = std::abs(st.b_up.dot(ps.J)) / (1 + norm_covector(ps.J, ps.g_inv) * b_g);
  return out;
}

}  // namespace finsler
