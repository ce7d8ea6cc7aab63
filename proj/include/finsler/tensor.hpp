#pragma once

// Small dense tensors over a chart of dimension n <= 4, and the g-weighted
// norms used for all residuals.

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

namespace finsler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
template <typename Scalar>
using Tensor3T = Eigen::Tensor<Scalar, 3>;
template <typename Scalar>
using Tensor4T = Eigen::Tensor<Scalar, 4>;
using Tensor3 = Tensor3T<double>;
using Tensor4 = Tensor4T<double>;

inline Tensor3 zeros3(int n) {
  Tensor3 t(n, n, n);
  t.setZero();
  return t;
}
inline Tensor4 zeros4(int n) {
  Tensor4 t(n, n, n, n);
  t.setZero();
  return t;
}

/// v_i h_jk + v_j h_ik + v_k h_ij.
Tensor3 sym_vh(const Vector& v, const Matrix& h);

/// u_i v_j w_k.
Tensor3 outer3(const Vector& u, const Vector& v, const Vector& w);

/// <T, U> with every index raised by g_inv.
double inner3(const Tensor3& t, const Tensor3& u, const Matrix& g_inv);
inline double norm3(const Tensor3& t, const Matrix& g_inv) { return std::sqrt(std::max(0.0, inner3(t, t, g_inv))); }

/// sqrt(g_im g^jp g^kq g^lr B^i_jkl B^m_pqr) for a (1,3) tensor B^i_jkl.
double norm_mixed4(const Tensor4& b, const Matrix& g, const Matrix& g_inv);

/// sqrt(g^ij v_i v_j) and sqrt(g_ij v^i v^j).
inline double norm_covector(const Vector& v, const Matrix& g_inv) { return std::sqrt(std::max(0.0, v.dot(g_inv * v))); }
inline double norm_vector(const Vector& v, const Matrix& g) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

/// sqrt(T_ij T_kl m^ik m^jl) for a covariant 2-tensor.
inline double norm2(const Matrix& t, const Matrix& m_inv) {
  return std::sqrt(std::max(0.0, (m_inv * t * m_inv * t.transpose()).trace()));
}

/// Largest g-norm of T minus an index permutation of T, divided by (1 + |T|_g).
double asymmetry3(const Tensor3& t, const Matrix& g_inv);

/// T_ijk v^k.
Matrix contract_last(const Tensor3& t, const Vector& v);
/// T_ijk v^i (first slot), returned as T_jk.
Matrix contract_first(const Tensor3& t, const Vector& v);


}  // namespace finsler
