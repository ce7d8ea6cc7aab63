#pragma once

#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace testing_support {

using finsler::ChartBox;
using finsler::MetricSpec;
using finsler::PhiFamily;
using finsler::Vector;

inline ChartBox box(int n, double lo, double hi) { return {Vector::Constant(n, lo), Vector::Constant(n, hi)}; }

/// Euclidean alpha with a constant beta.
inline MetricSpec euclid(const std::vector<double>& b, PhiFamily phi) {
  const int n = static_cast<int>(b.size());
  std::vector<std::vector<std::string>> a(b.size());
  std::vector<std::string> bs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a[static_cast<std::size_t>(i)].push_back(i == j ? "1" : "0");
    bs.push_back(std::to_string(b[static_cast<std::size_t>(i)]));
  }
  return MetricSpec::from_strings("euclid", n, a, bs, std::move(phi), box(n, -1, 1));
}

/// A non-flat alpha with a position-dependent beta, smooth and positive
/// definite on [-1, 1]^3.
inline MetricSpec curved(PhiFamily phi) {
  return MetricSpec::from_strings("curved", 3,
                                  {{"2+sin(x1*x2)"}, {"0.3*cos(x3)", "1.5+x1^2"}, {"0.2*x2*x3", "0.1*exp(x1)", "2+0.5*sin(x2+x3)"}},
                                  {"0.2+0.05*x2", "0.1*sin(x1)", "0.05*x1*x3"}, std::move(phi), box(3, -1, 1));
}

}  // namespace testing_support
