#include "finsler/tensor.hpp"

#include <algorithm>
#include <array>

namespace finsler {

Tensor3 sym_vh(const Vector& v, const Matrix& h) {
  const int n = static_cast<int>(v.size());
  Tensor3 t(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t(i, j, k) = v(i) * h(j, k) + v(j) * h(i, k) + v(k) * h(i, j);
  return t;
}

Tensor3 outer3(const Vector& u, const Vector& v, const Vector& w) {
  const int n = static_cast<int>(u.size());
  Tensor3 t(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t(i, j, k) = u(i) * v(j) * w(k);
  return t;
}

double inner3(const Tensor3& t, const Tensor3& u, const Matrix& g_inv) {
  const int n = static_cast<int>(g_inv.rows());
  // Raise the three indices of u one slot at a time.
  Tensor3 a(n, n, n), b(n, n, n);
  a.setZero();
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) a(p, j, k) += g_inv(p, i) * u(i, j, k);
  b.setZero();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) b(p, q, k) += g_inv(q, j) * a(p, j, k);
  double acc = 0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        double raised = 0;
        for (int k = 0; k < n; ++k) raised += g_inv(r, k) * b(p, q, k);
        acc += t(p, q, r) * raised;
      }
  return acc;
}

double norm_mixed4(const Tensor4& b, const Matrix& g, const Matrix& g_inv) {
  const int n = static_cast<int>(g.rows());
  double acc = 0;
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) {
      if (g(i, m) == 0) continue;
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < n; ++p)
          for (int k = 0; k < n; ++k)
            for (int q = 0; q < n; ++q) {
              const double w = g(i, m) * g_inv(j, p) * g_inv(k, q);
              if (w == 0) continue;
              for (int l = 0; l < n; ++l)
                for (int r = 0; r < n; ++r) acc += w * g_inv(l, r) * b(i, j, k, l) * b(m, p, q, r);
            }
    }
  return std::sqrt(std::max(0.0, acc));
}

double asymmetry3(const Tensor3& t, const Matrix& g_inv) {
  const int n = static_cast<int>(t.dimension(0));
  double worst = 0;
  const std::array<std::array<int, 3>, 5> perms{{{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (const auto& p : perms) {
    Tensor3 d(n, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const std::array<int, 3> idx{i, j, k};
          d(i, j, k) = t(i, j, k) - t(idx[p[0]], idx[p[1]], idx[p[2]]);
        }
    worst = std::max(worst, norm3(d, g_inv));
  }
  return worst / (1.0 + norm3(t, g_inv));
}

Matrix contract_last(const Tensor3& t, const Vector& v) {
  const int n = static_cast<int>(v.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m(i, j) += t(i, j, k) * v(k);
  return m;
}

Matrix contract_first(const Tensor3& t, const Vector& v) {
  const int n = static_cast<int>(v.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m(j, k) += v(i) * t(i, j, k);
  return m;
}

}  // namespace finsler
