#pragma once

#include <map>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"
#include "finsler/phi.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

struct ChartBox {
  Vector lo, hi;
  bool contains(const Vector& x) const { return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all(); }
  Vector center() const { return 0.5 * (lo + hi); }
};

/// An (alpha, beta)-metric on one chart: a_ij(x) and b_i(x) as expressions,
/// the profile phi, and the sampling box.
struct MetricSpec {
  std::string id;
  std::map<std::string, double> params;
  int n = 0;
  std::vector<Expr> a;  // row-major n x n, symmetric
  std::vector<Expr> b;
  PhiFamily phi = PhiFamily::randers();
  ChartBox box;
  std::vector<std::string> declared_properties;

  const Expr& a_expr(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }

  /// Build from expression strings; `a_lower[i]` holds entries (i, 0..i).
  /// Throws InputError on dimension mismatch or a variable outside the chart.
  static MetricSpec from_strings(std::string id, int n, const std::vector<std::vector<std::string>>& a_lower,
                                 const std::vector<std::string>& b, PhiFamily phi, ChartBox box);
};

/// a_ij and b_i as fiber-independent jets along the base line x + t v.
struct BaseFields {
  int n = 0;
  std::vector<Jetd> a;  // row-major
  std::vector<Jetd> b;
  const Jetd& a_at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

BaseFields base_fields(const MetricSpec& spec, const Vector& x, const Vector& direction, int deg_x);

Matrix a_value(const MetricSpec& spec, const Vector& x);
Vector b_value(const MetricSpec& spec, const Vector& x);

}  // namespace finsler
