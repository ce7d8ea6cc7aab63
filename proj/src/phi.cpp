#include "finsler/phi.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PhiFamily PhiFamily::randers_type(double c1, double c2, double c3) {
  if (!(c1 > 0)) throw InputError("randers-type: c1 must be positive");
  return PhiFamily(Kind::RandersType, {{"c1", c1}, {"c2", c2}, {"c3", c3}});
}

PhiFamily PhiFamily::rk_change(double c1, double c2) {
  if (c1 == 0) throw InputError("rk-change: c1 must be nonzero");
  return PhiFamily(Kind::RkChange, {{"c1", c1}, {"c2", c2}});
}

PhiFamily PhiFamily::from_name(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  for (const auto& [key, value] : params) {
    const bool known = key == "c1" || key == "c2" || key == "c3";
    if (!known) throw InputError("phi family '" + name + "': unknown parameter '" + key + "'");
    (void)value;
  }
  if (name == "randers") return randers();
  if (name == "kropina") return kropina();
  if (name == "matsumoto") return matsumoto();
  if (name == "randers-type") return randers_type(get("c1", 1.0), get("c2", 0.0), get("c3", 1.0));
  if (name == "rk-change") return rk_change(get("c1", -0.5), get("c2", -1.0));
  throw InputError("unknown phi family '" + name + "'");
}

std::string PhiFamily::name() const {
  switch (kind_) {
    case Kind::Randers: return "randers";
    case Kind::Kropina: return "kropina";
    case Kind::Matsumoto: return "matsumoto";
    case Kind::RandersType: return "randers-type";
    case Kind::RkChange: return "rk-change";
  }
  return "?";
}

PhiFamily::Interval PhiFamily::domain() const {
  switch (kind_) {
    case Kind::Randers: return {-1.0, 1.0};
    case Kind::Kropina: return {0.0, kInf};
    case Kind::Matsumoto: return {-0.5, 0.5};
    case Kind::RandersType: {
      const double c2 = param("c2");
      const double bound = c2 < 0 ? 1.0 / std::sqrt(-c2) : kInf;
      return {-bound, bound};
    }
    case Kind::RkChange:
      return admissible_sign() > 0 ? Interval{0.0, kInf} : Interval{-kInf, 0.0};
  }
  return {0, 0};
}

double PhiFamily::b0() const {
  if (one_sided()) return kInf;
  return domain().hi;
}

bool PhiFamily::one_sided() const { return kind_ == Kind::Kropina || kind_ == Kind::RkChange; }

int PhiFamily::admissible_sign() const {
  if (kind_ == Kind::Kropina) return 1;
  // phi - s phi' = -1 / (c1 s) must be positive.
  if (kind_ == Kind::RkChange) return param("c1") < 0 ? 1 : -1;
  return 0;
}

template <typename Scalar>
Series<Scalar> PhiFamily::taylor(Scalar s, int order) const {
  if (!domain().contains(static_cast<double>(s)))
    throw DomainError("phi-domain", "s = " + std::to_string(static_cast<double>(s)) + " outside the domain of " + name());
  const auto t = Series<Scalar>::variable(s, order);
  const Scalar one = 1;
  switch (kind_) {
    case Kind::Randers: return one + t;
    case Kind::Kropina: return one / t;
    case Kind::Matsumoto: return one / (one - t);
    case Kind::RandersType:
      return Scalar(param("c1")) * sqrt(one + Scalar(param("c2")) * (t * t)) + Scalar(param("c3")) * t;
    case Kind::RkChange: {
      const Scalar c1 = param("c1"), c2 = param("c2");
      return (-one / (2 * c1)) * (one / t) + (c2 / (2 * c1)) * t;
    }
  }
  return Series<Scalar>(order);
}

Seriesd PhiFamily::expand(double s, int order) const { return taylor(s, order); }

Series<long double> PhiFamily::expand_extended(long double s, int order) const { return taylor(s, order); }

std::vector<double> PhiFamily::derivatives(double s, int order) const {
  const auto e = expand(s, order);
  std::vector<double> d(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) d[static_cast<std::size_t>(k)] = e.derivative(k);
  return d;
}

std::optional<std::string> PhiFamily::violated_guard(double s, double b_sq) const {
  if (!domain().contains(s)) return "phi-domain";
  const auto e = expand(s, 2);
  const double phi = e[0], d1 = e[1], d2 = 2 * e[2];
  if (!(phi > 0)) return "phi-positive";
  const double denom = phi - s * d1;
  if (!(denom > 0)) return "phi-minus-s-dphi-positive";
  if (!(b_sq - s * s > 0)) return "b2-minus-s2-positive";
  const double Q = d1 / denom;
  const double dQ = phi * d2 / (denom * denom);
  const double delta = 1 + s * Q + (b_sq - s * s) * dQ;
  if (!(delta > 0)) return "delta-positive";
  return std::nullopt;
}

}  // namespace finsler
