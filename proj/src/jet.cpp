#include "finsler/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace finsler {

namespace {

// All multi-indices of total degree exactly d in n variables, lexicographically
// descending (x0^d first).
void append_degree(int n, int d, std::vector<MultiIndex>& out) {
  MultiIndex m{};
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == n - 1) {
      m[static_cast<std::size_t>(axis)] = left;
      out.push_back(m);
      m[static_cast<std::size_t>(axis)] = 0;
      return;
    }
    for (int e = left; e >= 0; --e) {
      m[static_cast<std::size_t>(axis)] = e;
      self(self, axis + 1, left - e);
    }
    m[static_cast<std::size_t>(axis)] = 0;
  };
  rec(rec, 0, d);
}

}  // namespace

JetLayout::JetLayout(int n, int deg_y, int deg_x) : n_(n), deg_y_(deg_y), deg_x_(deg_x) {
  for (int d = 0; d <= deg_y; ++d) append_degree(n, d, monomials_);
  const std::size_t radix = static_cast<std::size_t>(deg_y) + 1;
  std::size_t table = 1;
  for (int i = 0; i < n; ++i) table *= radix;
  lookup_.assign(table, -1);
  degrees_.reserve(monomials_.size());
  auto key = [&](const MultiIndex& m) {
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) k = k * radix + static_cast<std::size_t>(m[static_cast<std::size_t>(i)]);
    return k;
  };
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    int d = 0;
    for (int a = 0; a < n; ++a) d += monomials_[i][static_cast<std::size_t>(a)];
    degrees_.push_back(d);
    lookup_[key(monomials_[i])] = static_cast<std::int32_t>(i);
  }

  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    for (std::size_t j = 0; j < monomials_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > deg_y) continue;
      MultiIndex s{};
      for (int a = 0; a < n; ++a)
        s[static_cast<std::size_t>(a)] = monomials_[i][static_cast<std::size_t>(a)] + monomials_[j][static_cast<std::size_t>(a)];
      products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                           static_cast<std::uint32_t>(lookup_[key(s)])});
    }
  }

  if (deg_y > 0) {
    std::vector<MultiIndex> lower;
    for (int d = 0; d < deg_y; ++d) append_degree(n, d, lower);
    for (int axis = 0; axis < n; ++axis) {
      auto& tab = diff_[static_cast<std::size_t>(axis)];
      tab.reserve(lower.size());
      for (const auto& m : lower) {
        MultiIndex src = m;
        src[static_cast<std::size_t>(axis)] += 1;
        tab.push_back({static_cast<std::uint32_t>(lookup_[key(src)]),
                       static_cast<double>(src[static_cast<std::size_t>(axis)])});
      }
    }
  }
}

std::size_t JetLayout::fiber_index(const MultiIndex& m) const {
  const std::size_t radix = static_cast<std::size_t>(deg_y_) + 1;
  std::size_t k = 0;
  int d = 0;
  for (int i = 0; i < kMaxFiberDim; ++i) {
    const int e = m[static_cast<std::size_t>(i)];
    if (e < 0 || (i >= n_ && e != 0)) throw InputError("jet: multi-index outside the fiber dimension");
    if (i < n_) {
      k = k * radix + static_cast<std::size_t>(std::min(e, deg_y_));
      d += e;
    }
  }
  if (d > deg_y_) throw InputError("jet: multi-index exceeds the fiber truncation degree");
  return static_cast<std::size_t>(lookup_[k]);
}

LayoutPtr JetLayout::get(int n, int deg_y, int deg_x) {
  if (n < 1 || n > kMaxFiberDim) throw InputError("jet: fiber dimension must lie in [1, 4]");
  if (deg_y < 0 || deg_y > kMaxFiberDegree) throw InputError("jet: fiber degree must lie in [0, 5]");
  if (deg_x < 0 || deg_x > kMaxBaseDegree) throw InputError("jet: base degree must lie in [0, 2]");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, LayoutPtr> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, deg_y, deg_x}];
  if (!slot) slot = std::make_shared<const JetLayout>(n, deg_y, deg_x);
  return slot;
}

}  // namespace finsler
