#pragma once

#include <vector>

#include "finsler/tensor.hpp"

namespace finsler {

struct Rule1D {
  std::vector<double> nodes, weights;
};

/// m-point Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int m, double a, double b);

/// Product rule on the unit sphere S^{n-1} in R^n whose first axis is the
/// pole; the hemisphere boundary {u_0 = 0} is a panel boundary, so integrands
/// that are smooth on each closed hemisphere converge spectrally.
/// level 1 is the production resolution, level 0 the half resolution used for
/// the convergence check.
struct SphereRule {
  std::vector<Vector> nodes;
  std::vector<double> weights;
};

const SphereRule& sphere_rule(int n, int level);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace finsler
