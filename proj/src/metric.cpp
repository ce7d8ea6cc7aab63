#include "finsler/metric.hpp"

namespace finsler {

MetricSpec MetricSpec::from_strings(std::string id, int n, const std::vector<std::vector<std::string>>& a_lower,
                                    const std::vector<std::string>& b, PhiFamily phi, ChartBox box) {
  if (n < 2 || n > kMaxFiberDim) throw InputError("metric dimension must lie in [2, 4]");
  if (static_cast<int>(a_lower.size()) != n) throw InputError("metric: a must have one row per dimension");
  if (static_cast<int>(b.size()) != n) throw InputError("metric: b must have n entries");
  if (box.lo.size() != n || box.hi.size() != n || !(box.lo.array() < box.hi.array()).all())
    throw InputError("metric: sampling box must have n coordinates with lo < hi");
  MetricSpec spec;
  spec.id = std::move(id);
  spec.n = n;
  spec.phi = std::move(phi);
  spec.box = std::move(box);
  spec.a.resize(static_cast<std::size_t>(n * n));
  auto checked = [n](const std::string& text, const std::string& what) {
    Expr e;
    try {
      e = Expr::parse(text);
    } catch (const ParseError& err) {
      throw ParseError(err.where(), what + ": " + err.what());
    }
    if (e.arity() > n) throw InputError(what + ": uses a coordinate beyond the chart dimension");
    return e;
  };
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(a_lower[static_cast<std::size_t>(i)].size()) != i + 1)
      throw InputError("metric: row " + std::to_string(i) + " of a must hold " + std::to_string(i + 1) + " lower-triangle entries");
    for (int j = 0; j <= i; ++j) {
      auto e = checked(a_lower[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                       "a[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      spec.a[static_cast<std::size_t>(i * n + j)] = e;
      spec.a[static_cast<std::size_t>(j * n + i)] = e;
    }
  }
  for (int i = 0; i < n; ++i) spec.b.push_back(checked(b[static_cast<std::size_t>(i)], "b[" + std::to_string(i) + "]"));
  return spec;
}

BaseFields base_fields(const MetricSpec& spec, const Vector& x, const Vector& direction, int deg_x) {
  const int n = spec.n;
  const auto layout = JetLayout::get(n, 0, deg_x);
  std::vector<Jetd> coords;
  coords.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) coords.push_back(Jetd::seed_base(x(i), direction(i), layout));
  BaseFields f;
  f.n = n;
  f.a.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      auto v = spec.a_expr(i, j).eval_jet<double>(coords);
      f.a[static_cast<std::size_t>(j * n + i)] = v;
      f.a[static_cast<std::size_t>(i * n + j)] = std::move(v);
    }
  for (int i = 0; i < n; ++i) f.b.push_back(spec.b[static_cast<std::size_t>(i)].eval_jet<double>(coords));
  return f;
}

Matrix a_value(const MetricSpec& spec, const Vector& x) {
  Matrix a(spec.n, spec.n);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = spec.a_expr(i, j).eval(xs);
  return a;
}

Vector b_value(const MetricSpec& spec, const Vector& x) {
  Vector b(spec.n);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (int i = 0; i < spec.n; ++i) b(i) = spec.b[static_cast<std::size_t>(i)].eval(xs);
  return b;
}

}  // namespace finsler
