#pragma once

// Metric files, command-line metric references and report documents.
//
// Metric file (JSON):
//   {
//     "schema": "finsler-metric/1",            optional
//     "id": "my-metric",
//     "dimension": 3,
//     "a": [["1"], ["0", "1"], ["0", "0", "1"]],  lower triangle rows, or a full symmetric matrix
//     "b": ["0.3", "0", "0"],
//     "phi": {"family": "randers-type", "params": {"c1": 1, "c2": 0.5, "c3": 0.3}},
//     "box": {"lo": [-1, -1, -1], "hi": [1, 1, 1]},
//     "declared_properties": ["parallel"]        optional
//   }
// Entries of a and b are expression strings or plain numbers.

#include <json.hpp>
#include <string>

#include "finsler/classify.hpp"
#include "finsler/metric.hpp"
#include "finsler/zoo.hpp"

namespace finsler {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kMetricSchema = "finsler-metric/1";
inline constexpr const char* kReportSchema = "finsler-report/1";

using Json = nlohmann::ordered_json;

/// Throws InputError (or ParseError with a location) on malformed documents.
MetricSpec metric_from_json(const Json& doc);
Json metric_to_json(const MetricSpec& spec);

struct ZooRef {
  std::string id;
  std::map<std::string, double> params;
};
/// Parses "<id>" or "<id>:k=v,k=v".
ZooRef parse_zoo_ref(const std::string& text);

/// "zoo:<id>" or "zoo:<id>:k=v,k=v" for catalog entries, otherwise a path to
/// a metric file. Declared properties of a file are validated like zoo
/// entries (ValidationError on failure).
MetricSpec resolve_metric(const std::string& ref);

Json to_json(const Tolerances& tol);
Json to_json(const ClassificationReport& report);
Json to_json(const CrossCheck& cross);
Json to_json(const ValidationReport& report);

/// Shortest round-trip representation; non-finite values become null.
Json number(double v);

}  // namespace finsler
