#pragma once

// Riemannian data of alpha and beta at a base point: Levi-Civita connection,
// covariant derivatives of b, and the r/s tensors with their contractions.
// All x-derivatives come from directional base jets (exact, no differencing);
// mixed second partials are recovered by polarization over e_k + e_l.

#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

struct RiemannState {
  int n = 0;
  Vector x;
  Matrix a, a_inv;
  Tensor3 da;   // da(i,j,k) = d_k a_ij
  Tensor4 d2a;  // d2a(i,j,k,l) = d_k d_l a_ij
  Tensor3 gamma;   // gamma(i,j,k) = Gamma^i_jk
  Tensor4 dgamma;  // dgamma(i,j,k,l) = d_l Gamma^i_jk
  Vector b;        // b_i
  Vector b_up;     // b^i = a^ij b_j
  double b_sq = 0; // a^ij b_i b_j
  Vector d_b_sq;   // d_k (b^2)
  Matrix db;       // db(i,k) = d_k b_i
  Tensor3 d2b;     // d2b(i,k,l) = d_k d_l b_i
  Matrix nabla_b;  // b_{i|j}
  Matrix r, s;     // symmetric / antisymmetric parts of b_{i|j}
  Matrix s_mixed;  // s^i_j = a^ih s_hj
  Vector s_vec;    // s_j = b^i s_ij
  Vector r_vec;    // r_j = b^i r_ij
  Tensor3 ds;      // ds(i,j,k) = s_{ij|k}
};

/// Throws DomainError when a(x) is not positive definite or an expression
/// leaves its domain at x.
RiemannState riemann_state(const MetricSpec& spec, const Vector& x);

struct RsContractions {
  double r00 = 0, r0 = 0, s0 = 0;
  Vector r_i0, s_i0, s_up_i0;  // r_ij y^j, s_ij y^j, s^i_j y^j
};

RsContractions rs_contractions(const RiemannState& st, const Vector& y);

/// Max |d_k a_ij - Gamma^m_ki a_mj - Gamma^m_kj a_im| (should vanish).
double metric_compatibility_residual(const RiemannState& st);

}  // namespace finsler
