#pragma once

// Truncated multivariate Taylor arithmetic ("jets").
//
// A jet represents a scalar function of n fiber variables y^0..y^{n-1} and of
// one base parameter t (the position along a base direction x + t v),
// truncated at total fiber degree deg_y and base degree deg_x independently.
// Because the truncation is by two separate gradings, every arithmetic
// operation is exact inside the truncation box: for polynomial inputs the
// extracted partials equal the symbolic ones up to rounding.
//
// Coefficients are stored Taylor-normalized (partial derivative divided by
// the multi-index factorial), densely, in graded lexicographic order of the
// fiber multi-index with the base power varying fastest.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/series.hpp"

namespace finsler {

inline constexpr int kMaxFiberDim = 4;
inline constexpr int kMaxFiberDegree = 5;
inline constexpr int kMaxBaseDegree = 2;

using MultiIndex = std::array<int, kMaxFiberDim>;

/// Shape of a jet plus the precomputed tables the arithmetic needs. Layouts
/// are interned: two jets are compatible iff they point to the same layout.
class JetLayout {
 public:
  struct Product {
    std::uint32_t lhs, rhs, out;
  };
  struct DiffEntry {
    std::uint32_t source;  // fiber index of the source monomial
    double factor;         // exponent of the differentiated axis in the source
  };

  static std::shared_ptr<const JetLayout> get(int n, int deg_y, int deg_x);

  int n() const { return n_; }
  int deg_y() const { return deg_y_; }
  int deg_x() const { return deg_x_; }
  std::size_t fiber_size() const { return monomials_.size(); }
  std::size_t base_stride() const { return static_cast<std::size_t>(deg_x_) + 1; }
  std::size_t size() const { return fiber_size() * base_stride(); }

  const std::vector<MultiIndex>& monomials() const { return monomials_; }
  int degree(std::size_t fiber) const { return degrees_[fiber]; }
  /// Position of a fiber multi-index; throws InputError when out of bounds.
  std::size_t fiber_index(const MultiIndex& m) const;

  const std::vector<Product>& products() const { return products_; }
  /// For axis i: entry k maps monomial k of the layout with deg_y - 1 to its
  /// source monomial m + e_i in this layout.
  const std::vector<DiffEntry>& diff_table(int axis) const { return diff_[static_cast<std::size_t>(axis)]; }

  JetLayout(int n, int deg_y, int deg_x);

 private:
  int n_, deg_y_, deg_x_;
  std::vector<MultiIndex> monomials_;
  std::vector<int> degrees_;
  std::vector<std::int32_t> lookup_;
  std::vector<Product> products_;
  std::array<std::vector<DiffEntry>, kMaxFiberDim> diff_;
};

using LayoutPtr = std::shared_ptr<const JetLayout>;

template <typename Scalar>
class Jet {
 public:
  Jet() = default;
  explicit Jet(LayoutPtr layout, Scalar value = Scalar(0)) : layout_(std::move(layout)), c_(layout_->size(), Scalar(0)) {
    c_[0] = value;
  }

  /// The coordinate function y^index around `value`.
  static Jet seed_fiber(Scalar value, int index, LayoutPtr layout) {
    if (index < 0 || index >= layout->n()) throw InputError("seed_fiber: fiber index out of range");
    Jet j(std::move(layout), value);
    if (j.layout_->deg_y() >= 1) {
      MultiIndex m{};
      m[static_cast<std::size_t>(index)] = 1;
      j.c_[j.layout_->fiber_index(m) * j.layout_->base_stride()] = Scalar(1);
    }
    return j;
  }
  static Jet seed_fiber(Scalar value, int index, int n, int deg_y, int deg_x) {
    return seed_fiber(value, index, JetLayout::get(n, deg_y, deg_x));
  }

  /// The base parameter: value + slope * t.
  static Jet seed_base(Scalar value, Scalar slope, LayoutPtr layout) {
    Jet j(std::move(layout), value);
    if (j.layout_->deg_x() >= 1) j.c_[1] = slope;
    return j;
  }

  const LayoutPtr& layout() const { return layout_; }
  Scalar value() const { return c_[0]; }
  std::span<const Scalar> coeffs() const { return c_; }
  std::span<Scalar> coeffs() { return c_; }

  /// Raw Taylor coefficient.
  Scalar coeff(const MultiIndex& m, int base_power) const { return c_[position(m, base_power)]; }

  /// Partial derivative d^{|m|+p} / dy^m dt^p at the expansion point.
  Scalar extract(const MultiIndex& m, int base_power) const {
    const auto pos = position(m, base_power);
    Scalar f = Scalar(1);
    for (int i = 0; i < layout_->n(); ++i)
      for (int k = 2; k <= m[static_cast<std::size_t>(i)]; ++k) f *= Scalar(k);
    for (int k = 2; k <= base_power; ++k) f *= Scalar(k);
    return c_[pos] * f;
  }

  /// d/dy^axis; the result lives in the layout with deg_y - 1.
  Jet diff_fiber(int axis) const {
    if (axis < 0 || axis >= layout_->n()) throw InputError("diff_fiber: fiber index out of range");
    if (layout_->deg_y() == 0) throw InputError("diff_fiber: jet has no fiber degree left");
    Jet d(JetLayout::get(layout_->n(), layout_->deg_y() - 1, layout_->deg_x()));
    const auto stride = layout_->base_stride();
    const auto& table = layout_->diff_table(axis);
    for (std::size_t k = 0; k < table.size(); ++k)
      for (std::size_t p = 0; p < stride; ++p)
        d.c_[k * stride + p] = Scalar(table[k].factor) * c_[table[k].source * stride + p];
    return d;
  }

  /// d/dt; the result lives in the layout with deg_x - 1.
  Jet diff_base() const {
    if (layout_->deg_x() == 0) throw InputError("diff_base: jet has no base degree left");
    Jet d(JetLayout::get(layout_->n(), layout_->deg_y(), layout_->deg_x() - 1));
    const auto s_in = layout_->base_stride();
    const auto s_out = d.layout_->base_stride();
    for (std::size_t f = 0; f < layout_->fiber_size(); ++f)
      for (std::size_t p = 0; p < s_out; ++p) d.c_[f * s_out + p] = Scalar(p + 1) * c_[f * s_in + p + 1];
    return d;
  }

  /// Drop every coefficient outside the smaller truncation box.
  Jet truncated(int deg_y, int deg_x) const {
    if (deg_y > layout_->deg_y() || deg_x > layout_->deg_x()) throw InputError("truncated: cannot raise truncation degree");
    Jet t(JetLayout::get(layout_->n(), deg_y, deg_x));
    const auto s_in = layout_->base_stride();
    const auto s_out = t.layout_->base_stride();
    for (std::size_t f = 0; f < t.layout_->fiber_size(); ++f)
      for (std::size_t p = 0; p < s_out; ++p) t.c_[f * s_out + p] = c_[f * s_in + p];
    return t;
  }

  /// Re-express a fiber-independent jet (deg_y == 0) in a layout with more
  /// fiber degree; the new fiber coefficients are exactly zero.
  Jet broadcast(const LayoutPtr& target) const {
    if (layout_->deg_y() != 0 || target->n() != layout_->n() || target->deg_x() > layout_->deg_x())
      throw InputError("broadcast: source must be fiber-independent with compatible shape");
    Jet t(target);
    for (std::size_t p = 0; p < target->base_stride(); ++p) t.c_[p] = c_[p];
    return t;
  }

  Jet& operator+=(const Jet& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(Scalar v) {
    c_[0] += v;
    return *this;
  }
  Jet& operator-=(Scalar v) {
    c_[0] -= v;
    return *this;
  }
  Jet& operator*=(Scalar v) {
    for (auto& x : c_) x *= v;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, Scalar v) { return a += v; }
  friend Jet operator+(Scalar v, Jet a) { return a += v; }
  friend Jet operator-(Jet a, Scalar v) { return a -= v; }
  friend Jet operator-(Scalar v, const Jet& a) { return (-a) += v; }
  friend Jet operator*(Jet a, Scalar v) { return a *= v; }
  friend Jet operator*(Scalar v, Jet a) { return a *= v; }
  friend Jet operator/(Jet a, Scalar v) { return a *= Scalar(1) / v; }
  friend Jet operator-(Jet a) { return a *= Scalar(-1); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check(b);
    const auto& L = *a.layout_;
    Jet r(a.layout_);
    const auto stride = L.base_stride();
    const int dx = L.deg_x();
    for (const auto& pr : L.products()) {
      const Scalar* pa = &a.c_[pr.lhs * stride];
      const Scalar* pb = &b.c_[pr.rhs * stride];
      Scalar* po = &r.c_[pr.out * stride];
      for (int p = 0; p <= dx; ++p) {
        const Scalar ap = pa[p];
        if (ap == Scalar(0)) continue;
        for (int q = 0; p + q <= dx; ++q) po[p + q] += ap * pb[q];
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.value() == Scalar(0)) throw DomainError("division", "jet denominator has zero constant term");
    return a * compose(b, Scalar(1) / Series<Scalar>::variable(b.value(), b.total_degree()));
  }
  friend Jet operator/(Scalar v, const Jet& b) {
    if (b.value() == Scalar(0)) throw DomainError("division", "jet denominator has zero constant term");
    return compose(b, v / Series<Scalar>::variable(b.value(), b.total_degree()));
  }

  /// f(a) where `taylor` holds the Taylor coefficients of f at a.value();
  /// Horner evaluation on the nonconstant part of a.
  friend Jet compose(const Jet& a, const Series<Scalar>& taylor) {
    const int K = a.total_degree();
    if (taylor.order() < K) throw InputError("compose: Taylor expansion of insufficient order");
    Jet h = a;
    h.c_[0] = Scalar(0);
    Jet r(a.layout_, taylor[K]);
    for (int k = K - 1; k >= 0; --k) {
      r = r * h;
      r.c_[0] += taylor[k];
    }
    return r;
  }

  friend Jet sqrt(const Jet& a) {
    if (!(a.value() > Scalar(0))) throw DomainError("sqrt", "jet argument has nonpositive constant term");
    return compose(a, sqrt(Series<Scalar>::variable(a.value(), a.total_degree())));
  }
  friend Jet exp(const Jet& a) { return compose(a, exp(Series<Scalar>::variable(a.value(), a.total_degree()))); }
  friend Jet sin(const Jet& a) { return compose(a, sin(Series<Scalar>::variable(a.value(), a.total_degree()))); }
  friend Jet cos(const Jet& a) { return compose(a, cos(Series<Scalar>::variable(a.value(), a.total_degree()))); }
  friend Jet pow(const Jet& a, Scalar r) {
    if (r == std::floor(r) && r >= Scalar(0) && r <= Scalar(16)) {
      Jet p(a.layout_, Scalar(1));
      for (int i = 0; i < static_cast<int>(r); ++i) p = p * a;
      return p;
    }
    return compose(a, pow(Series<Scalar>::variable(a.value(), a.total_degree()), r));
  }

  /// Highest power of the nonconstant part that survives truncation.
  int total_degree() const { return layout_->deg_y() + layout_->deg_x(); }

 private:
  std::size_t position(const MultiIndex& m, int base_power) const {
    if (base_power < 0 || base_power > layout_->deg_x()) throw InputError("jet: base power out of truncation bounds");
    return layout_->fiber_index(m) * layout_->base_stride() + static_cast<std::size_t>(base_power);
  }
  void check(const Jet& o) const {
    if (layout_ != o.layout_) throw InputError("jet: incompatible shapes");
  }

  LayoutPtr layout_;
  std::vector<Scalar> c_;
};

using Jetd = Jet<double>;

}  // namespace finsler
