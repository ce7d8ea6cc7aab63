#pragma once

// Closed-form apparatus of (alpha, beta)-metrics: the scalar coefficient
// functions of phi and the closed formulas for the spray, mean Landsberg,
// Landsberg and mean Cartan tensors, evaluated from the Riemannian data of
// alpha and beta alone. Derivatives of Q are taken by univariate Taylor
// arithmetic in s rather than from hand-expanded expressions.

#include "finsler/finsler_core.hpp"
#include "finsler/metric.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

struct ABScalars {
  int n = 0;
  double s = 0, b_sq = 0;
  double phi = 0, dphi = 0, d2phi = 0;
  double Q = 0, dQ = 0, d2Q = 0, d3Q = 0;
  double Delta = 0, Theta = 0, Psi = 0, Phi = 0, Psi1 = 0, Psi2 = 0;
  double rho = 0, rho0 = 0, rho1 = 0, rho2 = 0;
  double X4 = 0, X6 = 0, Y4 = 0, Y6 = 0, Lambda = 0, mu = 0, Gamma = 0, Pi = 0;
};

/// Throws DomainError naming the first violated guard (phi-domain,
/// phi-positive, phi-minus-s-dphi-positive, b2-minus-s2-positive, delta-positive).
/// With allow_aligned, y parallel to b (s^2 = b^2 up to rounding) is accepted
/// and the coefficients that need b^2 - s^2 > 0 (Psi1) are NaN.
ABScalars ab_scalars(const PhiFamily& phi, double s, double b_sq, int n, bool allow_aligned = false);

/// Everything the closed forms need at one (x, y).
struct ABPoint {
  const RiemannState* st = nullptr;
  Vector y;
  double alpha = 0, beta = 0, s = 0;
  Vector y_bar;  // a_ij y^j
  Vector h_vec;  // alpha b_i - s y_bar_i
  Matrix T;      // alpha^2 a_ij - y_bar_i y_bar_j
  RsContractions rs;
  ABScalars k;
};

ABPoint ab_point(const MetricSpec& spec, const RiemannState& st, const Vector& y, bool allow_aligned = false);

/// G^i = G^i_alpha + alpha Q s^i_0 + (r_00 - 2 Q alpha s_0)(Theta y^i / alpha + Psi b^i).
Vector spray_cf(const ABPoint& p);
Vector mean_landsberg_cf(const ABPoint& p);
double jbar_cf(const ABPoint& p);
Tensor3 landsberg_cf(const ABPoint& p);
/// I_i = -Phi (phi - s phi') / (2 Delta phi alpha^2) (alpha b_i - s y_bar_i).
Vector mean_cartan_cf(const ABPoint& p);

/// Reduced forms valid when r_ij = 0 and s_j = 0.
Vector mean_landsberg_killing_cf(const ABPoint& p);
Tensor3 landsberg_killing_cf(const ABPoint& p);

/// g_ij = rho a_ij + rho0 b_i b_j + rho1 (b_i alpha_j + b_j alpha_i) + rho2 alpha_i alpha_j, alpha_i = y_bar_i / alpha.
Matrix fundamental_cf(const ABPoint& p);
/// Angular metric h_ij expanded in a_ij, b_i and alpha_i.
Matrix angular_cf(const ABPoint& p);

struct LemmaResiduals {
  bool premise = false;          // r_ij = 0 and s_j = 0 at x
  double premise_residual = 0;   // max(|r|_a, |s_j|_a)
  double L1 = 0, L2 = 0, L3 = 0, L4 = 0, L5 = 0;
  double max() const { return std::max({L1, L2, L3, L4, L5}); }
};

/// Normalized residuals of the five identities that hold for r_ij = 0,
/// s_j = 0: y_i s^i_0 = 0, y_i s^i_{0|0} = 0, y_i b^j s^i_{j|0} = rho s^j_0 s_j0,
/// b^j b^k b^l L_jkl = 0 and b^i J_i = 0, with y_i = g_ij y^j and L, J
/// from the definition path. s^i_{j|0} is the Levi-Civita derivative of alpha;
/// in the second identity the derivative is the horizontal one along the
/// spray of F (Berwald connection), the only reading under which it holds.
LemmaResiduals lemma_residuals(const ABPoint& p, const PointState& ps, double premise_tol = 1e-9);

}  // namespace finsler
