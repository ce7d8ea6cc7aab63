#pragma once

// Built-in catalog of (alpha, beta)-metrics. Every entry declares the
// properties of beta it is built to have, and zoo_get refuses to hand out a
// metric whose declarations fail numerical validation.
//
// Flat entries: Euclidean alpha and a constant (hence parallel) beta on
// [-1, 1]^n. Hopf entries: the round unit 3-sphere in the stereographic chart,
// a_ij = 4 delta_ij / (1 + |x|^2)^2, with eps times the Hopf 1-form (the dual
// of the unit Killing field q -> iq), on [-0.8, 0.8]^3. The Hopf form is
// Killing and of constant length eps, so r_ij = 0 and s_j = 0.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

struct ZooEntryInfo {
  std::string id;
  std::string description;
  std::map<std::string, double> defaults;
  std::vector<std::string> declared_properties;
};

const std::vector<ZooEntryInfo>& zoo_list();

/// Builds the entry with `params` overriding the defaults and validates its
/// declared properties. Throws InputError for an unknown id, unknown
/// parameter or parameter out of range; ValidationError if validation fails.
MetricSpec zoo_get(const std::string& id, const std::map<std::string, double>& params = {});

/// Same without the validation gate (used to inspect rejected constructions).
MetricSpec zoo_build(const std::string& id, const std::map<std::string, double>& params = {});

/// The Hopf 1-form eps * b_i in the stereographic chart, as expression strings.
std::vector<std::string> hopf_form(double eps);
/// The round-sphere conformal factor 4 / (1 + |x|^2)^2 as an expression string.
std::string round_sphere_factor();

struct ValidationRow {
  std::string property;  // declared property being certified
  std::string quantity;  // e.g. "max |r_ij|_a"
  double value = 0;
  double bound = 0;
  bool lower_bound = false;  // value must be >= bound instead of <=
  bool ok = false;
};

struct ValidationReport {
  std::string id;
  int points = 0;
  std::vector<ValidationRow> rows;
  bool passed = false;
};

inline constexpr int kValidationPoints = 100;

/// Certifies each declared property of `spec` at `points` chart points:
///   parallel         max |b_{i|j}|_a <= 1e-10
///   killing          max |r_ij|_a <= 1e-9
///   constant-length  max |s_j|_a <= 1e-9 and max |d b^2| <= 1e-9
///   s-nonzero        max |s_ij|_a >= 0.1
/// Unknown property names raise InputError.
ValidationReport validate_entry(const MetricSpec& spec, int points = kValidationPoints, std::uint64_t seed = 7);

}  // namespace finsler
