#pragma once

// Univariate truncated Taylor series. Used to obtain the Taylor coefficients
// of elementary functions and of phi(s) at a point, which the multivariate
// jets then compose with.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

template <typename Scalar>
class Series {
 public:
  Series() = default;
  explicit Series(int order, Scalar value = Scalar(0)) : c_(static_cast<std::size_t>(order) + 1, Scalar(0)) {
    c_[0] = value;
  }

  /// The identity series around `value`: value + t.
  static Series variable(Scalar value, int order) {
    Series s(order, value);
    if (order >= 1) s.c_[1] = Scalar(1);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Scalar operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  Scalar& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  Scalar value() const { return c_[0]; }

  /// k-th derivative at the expansion point (coefficient times k!).
  Scalar derivative(int k) const {
    Scalar f = Scalar(1);
    for (int i = 2; i <= k; ++i) f *= Scalar(i);
    return c_[static_cast<std::size_t>(k)] * f;
  }

  /// d/dt of the series; the result has one order less.
  Series diff() const {
    Series d(order() > 0 ? order() - 1 : 0);
    for (int k = 0; k + 1 <= order(); ++k) d[k] = Scalar(k + 1) * c_[static_cast<std::size_t>(k) + 1];
    return d;
  }

  Series truncated(int order) const {
    Series t(order);
    for (int k = 0; k <= order && k <= this->order(); ++k) t[k] = (*this)[k];
    return t;
  }

  Series& operator+=(const Series& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Series& operator-=(const Series& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Series& operator+=(Scalar v) {
    c_[0] += v;
    return *this;
  }
  Series& operator-=(Scalar v) {
    c_[0] -= v;
    return *this;
  }
  Series& operator*=(Scalar v) {
    for (auto& x : c_) x *= v;
    return *this;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator+(Series a, Scalar v) { return a += v; }
  friend Series operator+(Scalar v, Series a) { return a += v; }
  friend Series operator-(Series a, Scalar v) { return a -= v; }
  friend Series operator-(Scalar v, const Series& a) { return (-a) += v; }
  friend Series operator*(Series a, Scalar v) { return a *= v; }
  friend Series operator*(Scalar v, Series a) { return a *= v; }
  friend Series operator/(Series a, Scalar v) { return a *= Scalar(1) / v; }
  friend Series operator-(Series a) { return a *= Scalar(-1); }

  friend Series operator*(const Series& a, const Series& b) {
    a.check(b);
    Series r(a.order());
    for (int k = 0; k <= a.order(); ++k) {
      Scalar acc = Scalar(0);
      for (int j = 0; j <= k; ++j) acc += a[j] * b[k - j];
      r[k] = acc;
    }
    return r;
  }

  friend Series operator/(const Series& a, const Series& b) {
    a.check(b);
    if (b[0] == Scalar(0)) throw DomainError("division", "series denominator has zero constant term");
    Series q(a.order());
    for (int k = 0; k <= a.order(); ++k) {
      Scalar acc = a[k];
      for (int j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
      q[k] = acc / b[0];
    }
    return q;
  }
  friend Series operator/(Scalar v, const Series& b) { return Series(b.order(), v) / b; }

  friend Series sqrt(const Series& a) {
    if (!(a[0] > Scalar(0))) throw DomainError("sqrt", "series argument has nonpositive constant term");
    Series r(a.order());
    r[0] = std::sqrt(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
      Scalar acc = a[k];
      for (int j = 1; j < k; ++j) acc -= r[j] * r[k - j];
      r[k] = acc / (Scalar(2) * r[0]);
    }
    return r;
  }

  friend Series exp(const Series& a) {
    Series e(a.order());
    e[0] = std::exp(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
      Scalar acc = Scalar(0);
      for (int j = 1; j <= k; ++j) acc += Scalar(j) * a[j] * e[k - j];
      e[k] = acc / Scalar(k);
    }
    return e;
  }

  friend Series sin(const Series& a) { return sincos(a).first; }
  friend Series cos(const Series& a) { return sincos(a).second; }

  /// a^r for a real exponent r. Integral r >= 0 is evaluated by repeated
  /// multiplication so that negative bases are allowed there.
  friend Series pow(const Series& a, Scalar r) {
    if (r == std::floor(r) && r >= Scalar(0) && r <= Scalar(64)) {
      Series p(a.order(), Scalar(1));
      for (int i = 0; i < static_cast<int>(r); ++i) p = p * a;
      return p;
    }
    if (!(a[0] > Scalar(0))) throw DomainError("pow", "non-integral power of a nonpositive base");
    Series p(a.order());
    p[0] = std::pow(a[0], r);
    for (int k = 1; k <= a.order(); ++k) {
      Scalar acc = Scalar(0);
      for (int j = 1; j <= k; ++j) acc += ((r + Scalar(1)) * Scalar(j) - Scalar(k)) * a[j] * p[k - j];
      p[k] = acc / (Scalar(k) * a[0]);
    }
    return p;
  }

 private:
  static std::pair<Series, Series> sincos(const Series& a) {
    Series s(a.order()), c(a.order());
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (int k = 1; k <= a.order(); ++k) {
      Scalar as = Scalar(0), ac = Scalar(0);
      for (int j = 1; j <= k; ++j) {
        as += Scalar(j) * a[j] * c[k - j];
        ac += Scalar(j) * a[j] * s[k - j];
      }
      s[k] = as / Scalar(k);
      c[k] = -ac / Scalar(k);
    }
    return {s, c};
  }

  void check(const Series& o) const {
    if (o.c_.size() != c_.size()) throw InputError("series order mismatch");
  }

  std::vector<Scalar> c_{Scalar(0)};
};

using Seriesd = Series<double>;

}  // namespace finsler
