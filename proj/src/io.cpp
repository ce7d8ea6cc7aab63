#include "finsler/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

const Json& field(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(std::string("metric file: missing field '") + key + "'");
  return *it;
}

std::string expr_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    const double d = v.get<double>();
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    std::string s(buf, res.ptr);
    return d < 0 ? "(" + s + ")" : s;
  }
  throw InputError("metric file: " + where + " must be an expression string or a number");
}

Vector vector_of(const Json& v, int n, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw InputError("metric file: " + where + " must be an array of " + std::to_string(n) + " numbers");
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) throw InputError("metric file: " + where + " must hold numbers");
    out(i) = v[static_cast<std::size_t>(i)].get<double>();
  }
  return out;
}

std::map<std::string, double> params_of(const Json& v, const std::string& where) {
  std::map<std::string, double> out;
  if (v.is_null()) return out;
  if (!v.is_object()) throw InputError("metric file: " + where + " must be an object");
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (!it.value().is_number()) throw InputError("metric file: " + where + "." + it.key() + " must be a number");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

Json params_json(const std::map<std::string, double>& p) {
  Json out = Json::object();
  for (const auto& [k, v] : p) out[k] = number(v);
  return out;
}

}  // namespace

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

MetricSpec metric_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("metric file: top level must be an object");
  if (auto it = doc.find("schema"); it != doc.end() && *it != kMetricSchema)
    throw InputError(std::string("metric file: unsupported schema, expected ") + kMetricSchema);
  const auto& dim = field(doc, "dimension");
  if (!dim.is_number_integer()) throw InputError("metric file: dimension must be an integer");
  const int n = dim.get<int>();
  if (n < 2 || n > 4) throw InputError("metric file: dimension must lie in [2, 4]");
  const std::string id = doc.value("id", std::string("custom"));

  const auto& a = field(doc, "a");
  if (!a.is_array() || static_cast<int>(a.size()) != n) throw InputError("metric file: a must have n rows");
  std::vector<std::vector<std::string>> lower(static_cast<std::size_t>(n));
  bool full = true;
  for (const auto& row : a) full = full && row.is_array() && static_cast<int>(row.size()) == n;
  for (int i = 0; i < n; ++i) {
    const auto& row = a[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw InputError("metric file: a rows must be arrays");
    if (!full && static_cast<int>(row.size()) != i + 1)
      throw InputError("metric file: a must be a full n x n matrix or its lower triangle");
    for (int j = 0; j <= i; ++j)
      lower[static_cast<std::size_t>(i)].push_back(
          expr_text(row[static_cast<std::size_t>(j)], "a[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
  }
  if (full) {
    // The upper triangle must repeat the lower one.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const auto upper = Expr::parse(expr_text(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], "a"));
        const auto low = Expr::parse(lower[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        if (!upper.structurally_equal(low))
          throw InputError("metric file: a is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
  }

  const auto& b = field(doc, "b");
  if (!b.is_array() || static_cast<int>(b.size()) != n) throw InputError("metric file: b must have n entries");
  std::vector<std::string> bs;
  for (int i = 0; i < n; ++i) bs.push_back(expr_text(b[static_cast<std::size_t>(i)], "b[" + std::to_string(i) + "]"));

  const auto& phi = field(doc, "phi");
  if (!phi.is_object() || !phi.contains("family") || !phi["family"].is_string())
    throw InputError("metric file: phi must be an object with a family name");
  auto family = PhiFamily::from_name(phi["family"].get<std::string>(), params_of(phi.value("params", Json()), "phi.params"));

  const auto& box = field(doc, "box");
  if (!box.is_object()) throw InputError("metric file: box must be an object with lo and hi");
  ChartBox chart{vector_of(field(box, "lo"), n, "box.lo"), vector_of(field(box, "hi"), n, "box.hi")};

  auto spec = MetricSpec::from_strings(id, n, lower, bs, std::move(family), std::move(chart));
  if (auto it = doc.find("declared_properties"); it != doc.end()) {
    if (!it->is_array()) throw InputError("metric file: declared_properties must be an array of names");
    for (const auto& p : *it) {
      if (!p.is_string()) throw InputError("metric file: declared_properties must be an array of names");
      spec.declared_properties.push_back(p.get<std::string>());
    }
  }
  return spec;
}

Json metric_to_json(const MetricSpec& spec) {
  Json doc;
  doc["schema"] = kMetricSchema;
  doc["id"] = spec.id;
  doc["dimension"] = spec.n;
  Json a = Json::array();
  for (int i = 0; i < spec.n; ++i) {
    Json row = Json::array();
    for (int j = 0; j <= i; ++j) row.push_back(spec.a_expr(i, j).print());
    a.push_back(row);
  }
  doc["a"] = a;
  Json b = Json::array();
  for (const auto& e : spec.b) b.push_back(e.print());
  doc["b"] = b;
  doc["phi"] = {{"family", spec.phi.name()}, {"params", params_json(spec.phi.params())}};
  Json lo = Json::array(), hi = Json::array();
  for (int i = 0; i < spec.n; ++i) {
    lo.push_back(spec.box.lo(i));
    hi.push_back(spec.box.hi(i));
  }
  doc["box"] = {{"lo", lo}, {"hi", hi}};
  doc["declared_properties"] = spec.declared_properties;
  return doc;
}

ZooRef parse_zoo_ref(const std::string& text) {
  ZooRef ref;
  const auto colon = text.find(':');
  ref.id = text.substr(0, colon);
  if (colon == std::string::npos) return ref;
  const std::string list = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = std::min(list.find(',', pos), list.size());
    const std::string item = list.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("zoo parameter must be key=value: '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    double v = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size())
      throw InputError("zoo parameter '" + key + "' is not a number: '" + value + "'");
    ref.params[key] = v;
    pos = comma + 1;
  }
  return ref;
}

MetricSpec resolve_metric(const std::string& ref) {
  if (ref.rfind("zoo:", 0) == 0) {
    const auto z = parse_zoo_ref(ref.substr(4));
    return zoo_get(z.id, z.params);
  }
  std::ifstream in(ref);
  if (!in) throw InputError("cannot open metric file: " + ref);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("metric file " + ref + ": " + e.what());
  }
  auto spec = metric_from_json(doc);
  if (!spec.declared_properties.empty()) {
    const auto report = validate_entry(spec);
    if (!report.passed) throw ValidationError("metric file " + ref + ": declared properties failed validation");
  }
  return spec;
}

Json to_json(const Tolerances& tol) {
  return {{"eps_tensor", tol.eps_tensor}, {"eps_S", tol.eps_S}, {"eps_fit", tol.eps_fit}, {"nonzero_floor", tol.nonzero_floor}};
}

namespace {

Json spread_json(const Spread& s) {
  if (s.count == 0) return nullptr;
  return {{"count", s.count}, {"min", number(s.min)}, {"max", number(s.max)}, {"mean", number(s.mean)}};
}

}  // namespace

Json to_json(const CrossCheck& c) {
  return {{"samples", c.samples},
          {"spray", number(c.spray)},
          {"mean_landsberg", number(c.mean_landsberg)},
          {"jbar", number(c.jbar)},
          {"mean_cartan", number(c.mean_cartan)},
          {"landsberg", number(c.landsberg)},
          {"killing_constant_length_fraction", number(c.premise_fraction)},
          {"mean_cartan_covector", c.mean_cartan_covector}};
}

Json to_json(const ClassificationReport& r) {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["tool_version"] = kToolVersion;
  doc["metric"] = {{"id", r.metric_id},
                   {"params", params_json(r.params)},
                   {"dimension", r.n},
                   {"phi", {{"family", r.phi_family}, {"params", params_json(r.phi_params)}}}};
  Json rejections = Json::object();
  for (const auto& [k, v] : r.sampling.rejections) rejections[k] = v;
  doc["sampling"] = {{"seed", r.options.seed},
                     {"requested", r.sampling.requested},
                     {"admissible", r.scan.samples},
                     {"rejected", r.sampling.rejected},
                     {"rejections", rejections},
                     {"s_points", r.options.s_points},
                     {"s_directions", r.options.s_directions}};
  doc["tolerances"] = to_json(r.options.tol);
  Json preds = Json::array();
  for (const auto& p : r.scan.predicates)
    preds.push_back({{"name", p.name},
                     {"max_residual", number(p.max_residual)},
                     {"tolerance", p.tolerance},
                     {"verdict", to_string(p.verdict)}});
  doc["predicates"] = preds;
  doc["fits"] = {{"lambda", spread_json(r.scan.lambda)},
                 {"p", spread_json(r.scan.p)},
                 {"q", spread_json(r.scan.q)},
                 {"p_plus_q_max_deviation", number(r.scan.pq_sum_deviation)},
                 {"semi_c_undefined", r.scan.semi_c_undefined},
                 {"gpr_degenerate_M", r.scan.gpr_degenerate},
                 {"gpr_fail_fraction", number(r.scan.gpr_fail_fraction)}};
  doc["s_curvature"] = {{"points", r.s.points},
                        {"directions", r.s.directions},
                        {"excluded_points", r.s.excluded_points},
                        {"max_abs_S", number(r.s.max_abs_S)},
                        {"quadrature_discrepancy", number(r.s.max_discrepancy)},
                        {"c", number(r.s.c)},
                        {"isotropy_residual", number(r.s.isotropy_residual)},
                        {"vanishing", to_string(r.s.vanishing)},
                        {"isotropic", to_string(r.s.isotropic)}};
  doc["cs0"] = {{"points", r.cs0.points},
                {"degenerate_beta", r.cs0.degenerate},
                {"case_b", {{"max_r", number(r.cs0.max_r)}, {"max_s_j", number(r.cs0.max_s_vec)}, {"verdict", to_string(r.cs0.case_b)}}},
                {"case_a",
                 {{"epsilon", spread_json(r.cs0.epsilon)},
                  {"r_residual", number(r.cs0.case_a_residual)},
                  {"k", number(r.cs0.k)},
                  {"phi_residual", number(r.cs0.phi_residual)},
                  {"verdict", to_string(r.cs0.case_a)}}}};
  doc["crosscheck"] = r.cross ? to_json(*r.cross) : Json(nullptr);
  doc["theorem"] = {{"outcome", to_string(r.theorem.outcome)},
                    {"explanation", r.theorem.explanation},
                    {"generalized_p_reducible", to_string(r.theorem.gpr)},
                    {"vanishing_S", to_string(r.theorem.vanishing_S)},
                    {"berwald", to_string(r.theorem.berwald)},
                    {"c_reducible", to_string(r.theorem.c_reducible)}};
  doc["diagnostics"] = r.scan.diagnostics;
  return doc;
}

Json to_json(const ValidationReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"property", row.property},
                    {"quantity", row.quantity},
                    {"value", number(row.value)},
                    {"bound", row.bound},
                    {"kind", row.lower_bound ? ">=" : "<="},
                    {"ok", row.ok}});
  return {{"id", r.id}, {"points", r.points}, {"passed", r.passed}, {"rows", rows}};
}

}  // namespace finsler
