#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/series.hpp"

namespace finsler {

/// The profile function phi(s) of an (alpha, beta)-metric F = alpha * phi(beta / alpha).
///
/// Families with a pole at s = 0 (Kropina, the Randers change of Kropina) are
/// "one-sided": phi is only defined for s of one sign, so the indicatrix lies
/// in the half-space where beta has that sign.
class PhiFamily {
 public:
  enum class Kind { Randers, Kropina, Matsumoto, RandersType, RkChange };

  struct Interval {
    double lo, hi;  // open interval
    bool contains(double s) const { return s > lo && s < hi; }
  };

  static PhiFamily randers() { return PhiFamily(Kind::Randers, {}); }
  static PhiFamily kropina() { return PhiFamily(Kind::Kropina, {}); }
  static PhiFamily matsumoto() { return PhiFamily(Kind::Matsumoto, {}); }
  /// c1 sqrt(1 + c2 s^2) + c3 s, c1 > 0.
  static PhiFamily randers_type(double c1, double c2, double c3);
  /// -1 / (2 c1 s) + c2 s / (2 c1), c1 != 0.
  static PhiFamily rk_change(double c1, double c2);

  /// Build from a family name ("randers", "kropina", "matsumoto",
  /// "randers-type", "rk-change") and its parameters; throws InputError.
  static PhiFamily from_name(const std::string& name, const std::map<std::string, double>& params);

  Kind kind() const { return kind_; }
  std::string name() const;
  const std::map<std::string, double>& params() const { return params_; }

  /// Open interval of s on which phi is smooth and the family is meant to be used.
  Interval domain() const;
  /// Validity bound b0 on |s| for two-sided families (may be +inf).
  double b0() const;
  bool one_sided() const;
  /// +1 when the admissible half-space is beta > 0, -1 when beta < 0, 0 for two-sided.
  int admissible_sign() const;

  /// Taylor coefficients of phi at s up to `order`; DomainError outside domain().
  Seriesd expand(double s, int order) const;
  /// The same expansion in extended precision.
  Series<long double> expand_extended(long double s, int order) const;
  double value(double s) const { return expand(s, 0)[0]; }
  /// phi and its derivatives of orders 0..order at s.
  std::vector<double> derivatives(double s, int order) const;

  /// First violated regularity guard at (s, b^2) among s-domain, phi > 0,
  /// phi - s phi' > 0, b^2 - s^2 > 0 and Delta > 0; nullopt if admissible.
  std::optional<std::string> violated_guard(double s, double b_sq) const;

 private:
  PhiFamily(Kind kind, std::map<std::string, double> params) : kind_(kind), params_(std::move(params)) {}
  double param(const char* key) const { return params_.at(key); }
  template <typename Scalar>
  Series<Scalar> taylor(Scalar s, int order) const;

  Kind kind_;
  std::map<std::string, double> params_;
};

}  // namespace finsler
