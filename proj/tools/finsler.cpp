// Command-line front end: compute, classify, crosscheck, theorem, zoo.
//
// Exit codes: 0 ok / consistent, 2 input error, 3 domain error,
// 4 violation (theorem, cross-check or failed validation), 5 inconclusive.

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "finsler/alphabeta.hpp"
#include "finsler/classify.hpp"
#include "finsler/errors.hpp"
#include "finsler/finsler_core.hpp"
#include "finsler/io.hpp"
#include "finsler/riemann.hpp"
#include "finsler/zoo.hpp"

using namespace finsler;

namespace {

enum Exit { kOk = 0, kInput = 2, kDomain = 3, kViolation = 4, kInconclusive = 5 };

// Closed-form thresholds of the cross-check (normalized discrepancies).
constexpr double kSprayBound = 1e-8, kMeanLandsbergBound = 1e-7, kMeanCartanBound = 1e-8, kLandsbergBound = 1e-7;

Vector parse_csv(const std::string& text, int n, const char* what) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, comma - pos);
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    double v = 0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw InputError(std::string("--") + what + ": not a number: '" + item + "'");
    vals.push_back(v);
    pos = comma + 1;
  }
  if (static_cast<int>(vals.size()) != n)
    throw InputError(std::string("--") + what + " needs " + std::to_string(n) + " comma-separated values");
  return Eigen::Map<Vector>(vals.data(), n);
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}
Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}
Json to_json(const Tensor3& t) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < t.dimension(0); ++i) {
    Matrix m(t.dimension(1), t.dimension(2));
    for (Eigen::Index j = 0; j < m.rows(); ++j)
      for (Eigen::Index k = 0; k < m.cols(); ++k) m(j, k) = t(i, j, k);
    a.push_back(to_json(m));
  }
  return a;
}
Json to_json(const Tensor4& t) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < t.dimension(0); ++i) {
    Tensor3 s(t.dimension(1), t.dimension(2), t.dimension(3));
    for (Eigen::Index j = 0; j < s.dimension(0); ++j)
      for (Eigen::Index k = 0; k < s.dimension(1); ++k)
        for (Eigen::Index l = 0; l < s.dimension(2); ++l) s(j, k, l) = t(i, j, k, l);
    a.push_back(to_json(s));
  }
  return a;
}

// Flat values for discrepancy and text output.
std::vector<double> flat(const Json& j) {
  std::vector<double> out;
  if (j.is_array())
    for (const auto& e : j) {
      auto sub = flat(e);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  else if (j.is_number())
    out.push_back(j.get<double>());
  else
    out.push_back(std::numeric_limits<double>::quiet_NaN());
  return out;
}

double discrepancy(const Json& def, const Json& cf) {
  const auto a = flat(def), b = flat(cf);
  double diff = 0, scale = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) return std::numeric_limits<double>::quiet_NaN();
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(a[i]));
  }
  return diff / (1 + scale);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void print_text(const Json& j, std::ostream& os) {
  if (j.is_array()) {
    bool nested = !j.empty() && j[0].is_array();
    if (!nested) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << (j[i].is_number() ? fmt(j[i].get<double>()) : j[i].dump());
      os << "]";
    } else {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n ";
        print_text(j[i], os);
      }
      os << "]";
    }
  } else if (j.is_number_float()) {
    os << fmt(j.get<double>());
  } else {
    os << j.dump();
  }
}

void emit(const Json& doc, const std::string& format, const std::string& out_path) {
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw InputError("cannot write " + out_path);
  }
  std::ostream& os = out_path.empty() ? std::cout : file;
  if (format == "json") {
    os << doc.dump(2) << "\n";
    return;
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    os << it.key() << ": ";
    print_text(it.value(), os);
    os << "\n";
  }
}

// ---------------------------------------------------------------- compute

int cmd_compute(const std::string& metric, const std::string& xs, const std::string& ys, const std::vector<std::string>& tensors,
                const std::string& format) {
  const auto spec = resolve_metric(metric);
  const Vector x = parse_csv(xs, spec.n, "x");
  const Vector y = parse_csv(ys, spec.n, "y");
  static const std::set<std::string> known = {"F", "g", "g_inv", "h", "y_low", "C", "I", "M", "G", "B", "L", "J", "PRED", "S"};
  for (const auto& t : tensors)
    if (!known.count(t)) throw InputError("unknown tensor '" + t + "' (F, g, g_inv, h, y_low, C, I, M, G, B, L, J, PRED, S)");
  const bool want_S = std::find(tensors.begin(), tensors.end(), "S") != tensors.end();
  std::optional<VolumeDensity> vol;
  if (want_S) vol = volume_density(spec, x);
  const auto ps = point_state(spec, x, y, vol ? &*vol : nullptr);
  const auto st = riemann_state(spec, x);
  const auto ab = ab_point(spec, st, y, true);

  Json out;
  out["metric"] = {{"id", spec.id}, {"params", Json::object()}};
  for (const auto& [k, v] : spec.params) out["metric"]["params"][k] = v;
  out["x"] = to_json(x);
  out["y"] = to_json(y);
  Json block = Json::object();
  auto both = [&](const std::string& name, const Json& def, const Json& cf) {
    block[name] = {{"definition", def}, {"closed_form", cf}, {"discrepancy", number(discrepancy(def, cf))}};
  };
  for (const auto& t : tensors) {
    if (t == "F") both(t, number(ps.F), number(ab.alpha * ab.k.phi));
    else if (t == "g") both(t, to_json(ps.g), to_json(fundamental_cf(ab)));
    else if (t == "g_inv") block[t] = {{"definition", to_json(ps.g_inv)}};
    else if (t == "h") both(t, to_json(ps.h), to_json(angular_cf(ab)));
    else if (t == "y_low") block[t] = {{"definition", to_json(ps.y_low)}};
    else if (t == "C") block[t] = {{"definition", to_json(ps.C)}};
    else if (t == "I") both(t, to_json(ps.I), to_json(mean_cartan_cf(ab)));
    else if (t == "M") block[t] = {{"definition", to_json(ps.M)}};
    else if (t == "G") both(t, to_json(ps.G), to_json(spray_cf(ab)));
    else if (t == "B") block[t] = {{"definition", to_json(ps.B)}};
    else if (t == "L") both(t, to_json(ps.L), to_json(landsberg_cf(ab)));
    else if (t == "J") both(t, to_json(ps.J), to_json(mean_landsberg_cf(ab)));
    else if (t == "PRED") block[t] = {{"definition", to_json(ps.PRED)}};
    else if (t == "S") block[t] = {{"definition", number(*ps.S)}, {"quadrature_discrepancy", number(vol->discrepancy)}};
  }
  out["tensors"] = block;
  if (format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "metric " << spec.id << "\n";
    for (auto it = block.begin(); it != block.end(); ++it) {
      for (auto f = it.value().begin(); f != it.value().end(); ++f) {
        std::cout << it.key() << " [" << f.key() << "]: ";
        print_text(f.value(), std::cout);
        std::cout << "\n";
      }
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- classify / theorem

int outcome_code(TheoremOutcome o) {
  switch (o) {
    case TheoremOutcome::Consistent: return kOk;
    case TheoremOutcome::Violation: return kViolation;
    case TheoremOutcome::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

void print_report_text(const ClassificationReport& r, std::ostream& os) {
  os << "metric " << r.metric_id << " (n = " << r.n << ", phi = " << r.phi_family << ")\n";
  os << "samples " << r.scan.samples << "/" << r.sampling.requested << ", rejected draws " << r.sampling.rejected
     << ", seed " << r.options.seed << "\n";
  os << std::left;
  for (const auto& p : r.scan.predicates)
    os << "  " << std::setw(26) << p.name << std::setw(14) << fmt(p.max_residual) << to_string(p.verdict) << "\n";
  os << "  " << std::setw(26) << "vanishing-S" << std::setw(14) << fmt(r.s.max_abs_S) << to_string(r.s.vanishing) << "\n";
  os << "  " << std::setw(26) << "isotropic-S" << std::setw(14) << fmt(r.s.isotropy_residual) << to_string(r.s.isotropic)
     << "  c = " << fmt(r.s.c) << "\n";
  os << "  cs0 case (b) " << to_string(r.cs0.case_b) << ", case (a) " << to_string(r.cs0.case_a) << "\n";
  if (r.scan.p.count) os << "  semi-C p in [" << fmt(r.scan.p.min) << ", " << fmt(r.scan.p.max) << "]\n";
  os << "  gpr residual >= floor at " << fmt(100 * r.scan.gpr_fail_fraction) << "% of samples\n";
  if (r.cross)
    os << "  crosscheck: spray " << fmt(r.cross->spray) << ", J " << fmt(r.cross->mean_landsberg) << ", I "
       << fmt(r.cross->mean_cartan) << ", L " << fmt(r.cross->landsberg) << "\n";
  for (const auto& d : r.scan.diagnostics) os << "  note: " << d << "\n";
  os << "theorem: " << to_string(r.theorem.outcome) << " (" << r.theorem.explanation << ")\n";
}

struct ScanArgs {
  std::string metric;
  int samples = 200;
  std::uint64_t seed = 1;
  int s_points = 20, s_directions = 10;
  Tolerances tol;
  std::string format = "json";
  std::string out;
  bool no_crosscheck = false;
};

void add_scan_options(CLI::App* sub, ScanArgs& a, bool tolerances) {
  sub->add_option("--metric", a.metric, "zoo:<id>[:k=v,...] or a metric file")->required();
  sub->add_option("--samples", a.samples, "number of (x, y) samples")->check(CLI::PositiveNumber);
  sub->add_option("--seed", a.seed, "random seed");
  if (!tolerances) return;
  sub->add_option("--s-points", a.s_points, "base points for the S-curvature scan")->check(CLI::PositiveNumber);
  sub->add_option("--s-directions", a.s_directions, "directions per base point")->check(CLI::PositiveNumber);
  sub->add_option("--eps-tensor", a.tol.eps_tensor, "tensor residual bound");
  sub->add_option("--eps-S", a.tol.eps_S, "S-curvature bound");
  sub->add_option("--eps-fit", a.tol.eps_fit, "fit residual bound");
  sub->add_option("--nonzero-floor", a.tol.nonzero_floor, "structurally nonzero threshold");
}

ClassifyOptions options_of(const ScanArgs& a, bool crosscheck) {
  ClassifyOptions o;
  o.samples = a.samples;
  o.seed = a.seed;
  o.s_points = a.s_points;
  o.s_directions = a.s_directions;
  o.tol = a.tol;
  o.with_crosscheck = crosscheck;
  return o;
}

int cmd_classify(const ScanArgs& a) {
  const auto spec = resolve_metric(a.metric);
  const auto rep = classify(spec, options_of(a, !a.no_crosscheck));
  if (a.format == "json") {
    emit(to_json(rep), "json", a.out);
  } else if (a.out.empty()) {
    print_report_text(rep, std::cout);
  } else {
    std::ofstream f(a.out);
    if (!f) throw InputError("cannot write " + a.out);
    print_report_text(rep, f);
  }
  return outcome_code(rep.theorem.outcome);
}

int cmd_theorem(const ScanArgs& a) {
  const auto spec = resolve_metric(a.metric);
  const auto rep = classify(spec, options_of(a, false));
  const auto& t = rep.theorem;
  if (a.format == "json") {
    Json doc = to_json(rep);
    emit(Json{{"schema", kReportSchema}, {"theorem", doc["theorem"]}, {"predicates", doc["predicates"]},
              {"s_curvature", doc["s_curvature"]}},
         "json", a.out);
  } else {
    std::cout << std::left;
    std::cout << "premise   generalized P-reducible  " << std::setw(14)
              << fmt(rep.scan.get("generalized-p-reducible").max_residual) << to_string(t.gpr) << "\n";
    std::cout << "premise   vanishing S-curvature    " << std::setw(14) << fmt(rep.s.max_abs_S) << to_string(t.vanishing_S)
              << "\n";
    std::cout << "conclusion Berwald                 " << std::setw(14) << fmt(rep.scan.get("berwald").max_residual)
              << to_string(t.berwald) << "\n";
    std::cout << "conclusion C-reducible             " << std::setw(14) << fmt(rep.scan.get("c-reducible").max_residual)
              << to_string(t.c_reducible) << "\n";
    std::cout << "verdict: " << to_string(t.outcome) << " (" << t.explanation << ")\n";
  }
  return outcome_code(t.outcome);
}

int cmd_crosscheck(const ScanArgs& a) {
  const auto spec = resolve_metric(a.metric);
  const auto samples = draw_samples(spec, a.samples, a.seed);
  const auto c = crosscheck(spec, samples);
  struct Row {
    const char* name;
    double value, bound;
  };
  const Row rows[] = {{"spray", c.spray, kSprayBound},
                      {"mean_landsberg", c.mean_landsberg, kMeanLandsbergBound},
                      {"mean_cartan", c.mean_cartan, kMeanCartanBound},
                      {"landsberg", c.landsberg, kLandsbergBound}};
  bool ok = c.samples > 0;
  for (const auto& r : rows) ok = ok && r.value <= r.bound;
  if (a.format == "json") {
    Json doc = to_json(c);
    doc["passed"] = ok;
    emit(doc, "json", a.out);
  } else {
    std::cout << std::left << "samples " << c.samples << "\n";
    for (const auto& r : rows)
      std::cout << "  " << std::setw(16) << r.name << std::setw(14) << fmt(r.value) << "bound " << fmt(r.bound)
                << (r.value <= r.bound ? "  ok" : "  EXCEEDED") << "\n";
    std::cout << "  " << std::setw(16) << "jbar" << fmt(c.jbar) << "\n";
    std::cout << "mean Cartan covector: " << c.mean_cartan_covector << "\n";
  }
  return ok ? kOk : kViolation;
}

// ---------------------------------------------------------------- zoo

int cmd_zoo_list(const std::string& format) {
  if (format == "json") {
    Json list = Json::array();
    for (const auto& e : zoo_list()) {
      Json d = Json::object();
      for (const auto& [k, v] : e.defaults) d[k] = v;
      list.push_back({{"id", e.id}, {"description", e.description}, {"defaults", d}, {"declared_properties", e.declared_properties}});
    }
    std::cout << list.dump(2) << "\n";
    return kOk;
  }
  for (const auto& e : zoo_list()) {
    std::cout << e.id << "  (";
    bool first = true;
    for (const auto& [k, v] : e.defaults) {
      std::cout << (first ? "" : ", ") << k << "=" << fmt(v);
      first = false;
    }
    std::cout << ")\n    " << e.description << "\n";
  }
  return kOk;
}

int cmd_zoo_validate(const std::string& ref, const std::string& format) {
  const auto z = parse_zoo_ref(ref);
  const auto spec = zoo_build(z.id, z.params);
  const auto rep = validate_entry(spec);
  if (format == "json") {
    std::cout << to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "validation of " << rep.id << " at " << rep.points << " points\n" << std::left;
    for (const auto& r : rep.rows)
      std::cout << "  " << std::setw(16) << r.property << std::setw(18) << r.quantity << std::setw(14) << fmt(r.value)
                << (r.lower_bound ? ">= " : "<= ") << std::setw(8) << fmt(r.bound) << (r.ok ? "ok" : "FAILED") << "\n";
    std::cout << (rep.passed ? "all bounds met" : "validation FAILED") << "\n";
  }
  return rep.passed ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler (alpha, beta)-metric engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string metric, xs, ys, format = "json";
  std::vector<std::string> tensors = {"F", "g", "G", "I", "J"};
  auto* compute = app.add_subcommand("compute", "evaluate tensors at one (x, y) by both computation paths");
  compute->add_option("--metric", metric, "zoo:<id>[:k=v,...] or a metric file")->required();
  compute->add_option("--x", xs, "base point, comma separated")->required();
  compute->add_option("--y", ys, "tangent vector, comma separated")->required();
  compute->add_option("--tensors", tensors, "F,g,g_inv,h,y_low,C,I,M,G,B,L,J,PRED,S")->delimiter(',');
  compute->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  ScanArgs classify_args, theorem_args, cross_args;
  auto* classify_cmd = app.add_subcommand("classify", "reducibility predicates, fits and theorem check");
  add_scan_options(classify_cmd, classify_args, true);
  classify_cmd->add_option("--out", classify_args.out, "write the report to a file");
  classify_cmd->add_option("--format", classify_args.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  classify_cmd->add_flag("--no-crosscheck", classify_args.no_crosscheck, "skip the closed-form cross-check");

  auto* theorem_cmd = app.add_subcommand("theorem", "consistency check of the main theorem");
  add_scan_options(theorem_cmd, theorem_args, true);
  theorem_args.format = "text";
  theorem_cmd->add_option("--format", theorem_args.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* cross_cmd = app.add_subcommand("crosscheck", "closed forms against the definition path");
  add_scan_options(cross_cmd, cross_args, false);
  cross_args.format = "text";
  cross_cmd->add_option("--format", cross_args.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string zoo_format = "text", zoo_ref;
  auto* zoo_cmd = app.add_subcommand("zoo", "built-in metric catalog");
  zoo_cmd->require_subcommand(1);
  auto* zoo_list_cmd = zoo_cmd->add_subcommand("list", "list entries");
  zoo_list_cmd->add_option("--format", zoo_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  auto* zoo_validate_cmd = zoo_cmd->add_subcommand("validate", "certify an entry's declared properties");
  zoo_validate_cmd->add_option("id", zoo_ref, "entry id, optionally id:k=v,...")->required();
  zoo_validate_cmd->add_option("--format", zoo_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*compute) return cmd_compute(metric, xs, ys, tensors, format);
    if (*classify_cmd) return cmd_classify(classify_args);
    if (*theorem_cmd) return cmd_theorem(theorem_args);
    if (*cross_cmd) return cmd_crosscheck(cross_args);
    if (*zoo_list_cmd) return cmd_zoo_list(zoo_format);
    if (*zoo_validate_cmd) return cmd_zoo_validate(zoo_ref, zoo_format);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kViolation;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "domain error [" << e.guard() << "]: " << e.what() << "\n";
    return kDomain;
  }
  return kInput;
}
