#pragma once

// Definition-based Finsler tensors of F = alpha phi(beta / alpha), computed
// by differentiating jets of F^2 and never through the closed (alpha, beta)
// formulas, so that it can serve as an oracle for them.
//
// The Landsberg tensor is obtained from the Berwald tensor as
// L_jkl = -1/2 y_m B^m_jkl. The P-reducibility deviation
//   PRED_ijk = L_ijk - (J_i h_jk + J_j h_ik + J_k h_ij) / (n + 1)
// also equals M_{ijk|s} y^s: the horizontal derivative along y commutes with
// the Matsumoto construction because h_{ij|s} y^s = 0 and F_{|s} = 0, and
// C_{ijk|s} y^s = L_ijk, I_{i|s} y^s = J_i.

#include <optional>

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

/// Jet of F^2 at fiber point y on the base line described by `fields`
/// (deg_x taken from the fields), truncated at fiber degree deg_y.
/// Throws DomainError naming the guard: alpha-positive, phi-domain,
/// phi-positive, phi-minus-s-dphi-positive.
Jetd eval_F2(const PhiFamily& phi, const BaseFields& fields, const Vector& y, int deg_y);

/// Convenience form: jet of F^2 at (x, y) along base direction `direction`.
Jetd eval_F2(const MetricSpec& spec, const Vector& x, const Vector& y, int deg_y, int deg_x, const Vector& direction);

double F_value(const MetricSpec& spec, const Vector& x, const Vector& y);

struct Fundamental {
  double F = 0;
  Matrix g, g_inv, h;
  Vector y_low;
};
Fundamental fundamental(const MetricSpec& spec, const Vector& x, const Vector& y);

struct CartanTensors {
  Tensor3 C, M;
  Vector I;
};
CartanTensors cartan_tensors(const MetricSpec& spec, const Vector& x, const Vector& y);

/// Spray coefficients G^i at (x, y).
Vector spray(const MetricSpec& spec, const Vector& x, const Vector& y);

struct BerwaldLandsberg {
  Tensor4 B;  // B(i,j,k,l) = B^i_jkl
  Tensor3 L, PRED;
  Vector J;
};
BerwaldLandsberg berwald_landsberg(const MetricSpec& spec, const Vector& x, const Vector& y);

struct VolumeDensity {
  double sigma = 0;
  Vector grad_ln_sigma;
  double discrepancy = 0;  // between production and half resolution
  bool converged = false;
};
inline constexpr double kQuadratureTolerance = 1e-8;

/// Busemann-Hausdorff density and the x-gradient of its logarithm, by
/// spherical quadrature of F(x, u)^{-n}, with first-order base jets carried
/// through the quadrature.
VolumeDensity volume_density(const MetricSpec& spec, const Vector& x);

/// S-curvature; throws DomainError("quadrature-convergence") if the volume
/// quadrature did not converge at x.
double s_curvature(const MetricSpec& spec, const Vector& x, const Vector& y);
double s_curvature(const MetricSpec& spec, const VolumeDensity& vol, const Vector& x, const Vector& y);

struct PointState {
  int n = 0;
  Vector x, y;
  double F = 0;
  Matrix g, g_inv, h;
  Vector y_low;
  Tensor3 C, M;
  Vector I;
  Vector G;
  Matrix N;          // N(i,j) = dG^i/dy^j
  double div_G = 0;  // trace of N
  Tensor4 B;
  Tensor3 L, PRED;
  Vector J;
  std::optional<double> S;
};

/// Every definition-path tensor at one point; S only when a volume density
/// for x is supplied.
PointState point_state(const MetricSpec& spec, const Vector& x, const Vector& y,
                       const VolumeDensity* volume = nullptr);

/// Normalized residuals of the identities every definition-path state must
/// satisfy: C y = 0, I y = 0, h y = 0, L y = 0, M y = 0, J y = 0,
/// g(y, y) = F^2, total symmetry of C, M, L, and G(x, 2y) = 4 G(x, y).
struct InvariantResiduals {
  double C_y = 0, I_y = 0, h_y = 0, L_y = 0, M_y = 0, J_y = 0, gyy = 0;
  double sym_C = 0, sym_M = 0, sym_L = 0;
  double spray_homogeneity = 0;
  double max_contraction() const { return std::max({C_y, I_y, h_y, L_y, M_y, J_y, gyy, spray_homogeneity}); }
  double max_symmetry() const { return std::max({sym_C, sym_M, sym_L}); }
};
InvariantResiduals invariant_residuals(const MetricSpec& spec, const PointState& ps);

}  // namespace finsler
