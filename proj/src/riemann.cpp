#include "finsler/riemann.hpp"

#include <Eigen/Cholesky>

namespace finsler {

RiemannState riemann_state(const MetricSpec& spec, const Vector& x) {
  const int n = spec.n;
  if (x.size() != n) throw InputError("riemann_state: base point has wrong dimension");
  RiemannState st;
  st.n = n;
  st.x = x;
  st.da = zeros3(n);
  st.d2a = zeros4(n);
  st.db = Matrix::Zero(n, n);
  st.d2b = zeros3(n);

  // Directional second derivatives along e_k (diagonal) and e_k + e_l.
  std::vector<BaseFields> diag;
  for (int k = 0; k < n; ++k) diag.push_back(base_fields(spec, x, Vector::Unit(n, k), 2));
  const auto& f0 = diag[0];
  st.a.resize(n, n);
  st.b.resize(n);
  for (int i = 0; i < n; ++i) {
    st.b(i) = f0.b[static_cast<std::size_t>(i)].value();
    for (int j = 0; j < n; ++j) st.a(i, j) = f0.a_at(i, j).value();
  }
  const MultiIndex none{};
  auto first = [&](const Jetd& j) { return j.extract(none, 1); };
  auto second = [&](const Jetd& j) { return j.extract(none, 2); };
  for (int k = 0; k < n; ++k) {
    const auto& f = diag[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) {
      st.db(i, k) = first(f.b[static_cast<std::size_t>(i)]);
      st.d2b(i, k, k) = second(f.b[static_cast<std::size_t>(i)]);
      for (int j = 0; j < n; ++j) {
        st.da(i, j, k) = first(f.a_at(i, j));
        st.d2a(i, j, k, k) = second(f.a_at(i, j));
      }
    }
  }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const auto f = base_fields(spec, x, Vector::Unit(n, k) + Vector::Unit(n, l), 2);
      for (int i = 0; i < n; ++i) {
        const double mixed_b = 0.5 * (second(f.b[static_cast<std::size_t>(i)]) - st.d2b(i, k, k) - st.d2b(i, l, l));
        st.d2b(i, k, l) = st.d2b(i, l, k) = mixed_b;
        for (int j = 0; j < n; ++j) {
          const double mixed_a = 0.5 * (second(f.a_at(i, j)) - st.d2a(i, j, k, k) - st.d2a(i, j, l, l));
          st.d2a(i, j, k, l) = st.d2a(i, j, l, k) = mixed_a;
        }
      }
    }

  Eigen::LLT<Matrix> llt(st.a);
  if (llt.info() != Eigen::Success) throw DomainError("metric-positive-definite", "a(x) is not positive definite");
  st.a_inv = llt.solve(Matrix::Identity(n, n));

  // Gamma_{ljk} (first kind) and its derivative, then raise.
  Tensor3 first_kind(n, n, n);
  Tensor4 d_first_kind(n, n, n, n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        first_kind(l, j, k) = 0.5 * (st.da(l, k, j) + st.da(j, l, k) - st.da(j, k, l));
        for (int m = 0; m < n; ++m)
          d_first_kind(l, j, k, m) = 0.5 * (st.d2a(l, k, j, m) + st.d2a(j, l, k, m) - st.d2a(j, k, l, m));
      }
  st.gamma = zeros3(n);
  st.dgamma = zeros4(n);
  for (int m = 0; m < n; ++m) {
    // d_m a^il = -a^ip d_m a_pq a^ql
    Matrix da_m(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) da_m(p, q) = st.da(p, q, m);
    const Matrix d_inv = -st.a_inv * da_m * st.a_inv;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0;
          for (int l = 0; l < n; ++l) acc += d_inv(i, l) * first_kind(l, j, k) + st.a_inv(i, l) * d_first_kind(l, j, k, m);
          st.dgamma(i, j, k, m) = acc;
        }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0;
        for (int l = 0; l < n; ++l) acc += st.a_inv(i, l) * first_kind(l, j, k);
        st.gamma(i, j, k) = acc;
      }

  st.b_up = st.a_inv * st.b;
  st.b_sq = st.b.dot(st.b_up);
  // d_k(b^2) = 2 b^i d_k b_i + b_i b_j d_k a^ij
  st.d_b_sq.resize(n);
  for (int k = 0; k < n; ++k) {
    double acc = 2.0 * st.b_up.dot(st.db.col(k));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc -= st.b_up(i) * st.b_up(j) * st.da(i, j, k);
    st.d_b_sq(k) = acc;
  }

  st.nabla_b.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = st.db(i, j);
      for (int m = 0; m < n; ++m) acc -= st.gamma(m, i, j) * st.b(m);
      st.nabla_b(i, j) = acc;
    }
  st.r = 0.5 * (st.nabla_b + st.nabla_b.transpose());
  st.s = 0.5 * (st.nabla_b - st.nabla_b.transpose());
  st.s_mixed = st.a_inv * st.s;
  st.s_vec = st.s.transpose() * st.b_up;
  st.r_vec = st.r.transpose() * st.b_up;

  // s_{ij|k} = d_k s_ij - Gamma^m_ki s_mj - Gamma^m_kj s_im; the Gamma terms
  // of d_k s_ij cancel by symmetry, leaving the antisymmetrized d_k d_j b_i.
  st.ds = zeros3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.5 * (st.d2b(i, j, k) - st.d2b(j, i, k));
        for (int m = 0; m < n; ++m) acc -= st.gamma(m, k, i) * st.s(m, j) + st.gamma(m, k, j) * st.s(i, m);
        st.ds(i, j, k) = acc;
      }
  return st;
}

RsContractions rs_contractions(const RiemannState& st, const Vector& y) {
  RsContractions c;
  c.r_i0 = st.r * y;
  c.s_i0 = st.s * y;
  c.s_up_i0 = st.s_mixed * y;
  c.r00 = y.dot(c.r_i0);
  c.r0 = st.r_vec.dot(y);
  c.s0 = st.s_vec.dot(y);
  return c;
}

double metric_compatibility_residual(const RiemannState& st) {
  const int n = st.n;
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = st.da(i, j, k);
        for (int m = 0; m < n; ++m) acc -= st.gamma(m, k, i) * st.a(m, j) + st.gamma(m, k, j) * st.a(i, m);
        worst = std::max(worst, std::abs(acc));
      }
  return worst;
}

}  // namespace finsler
