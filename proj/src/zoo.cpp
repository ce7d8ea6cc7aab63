#include "finsler/zoo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "finsler/errors.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  return v < 0 ? "(" + s + ")" : s;
}

const char* kParallel = "parallel";
const char* kKilling = "killing";
const char* kConstantLength = "constant-length";
const char* kSNonzero = "s-nonzero";

const std::vector<std::string> kFlatProps = {kParallel};
const std::vector<std::string> kHopfProps = {kKilling, kConstantLength, kSNonzero};

ChartBox cube(int n, double r) { return {Vector::Constant(n, -r), Vector::Constant(n, r)}; }

MetricSpec flat(const std::string& id, int n, double b, PhiFamily phi) {
  std::vector<std::vector<std::string>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a[static_cast<std::size_t>(i)].push_back(i == j ? "1" : "0");
  std::vector<std::string> bv(static_cast<std::size_t>(n), "0");
  bv[0] = num(b);
  auto spec = MetricSpec::from_strings(id, n, a, bv, std::move(phi), cube(n, 1.0));
  spec.declared_properties = kFlatProps;
  return spec;
}

MetricSpec hopf(const std::string& id, double eps, PhiFamily phi) {
  const std::string f = round_sphere_factor();
  auto spec = MetricSpec::from_strings(id, 3, {{f}, {"0", f}, {"0", "0", f}}, hopf_form(eps), std::move(phi), cube(3, 0.8));
  spec.declared_properties = kHopfProps;
  return spec;
}

using Params = std::map<std::string, double>;

double get(const Params& p, const char* key) { return p.at(key); }

int dimension(const Params& p) {
  const double n = get(p, "n");
  if (n != std::floor(n) || n < 2 || n > 4) throw InputError("parameter n must be 2, 3 or 4");
  return static_cast<int>(n);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("parameter out of range: " + what);
}

struct Builder {
  ZooEntryInfo info;
  MetricSpec (*build)(const Params&);
};

const std::vector<Builder>& builders() {
  static const std::vector<Builder> list = {
      {{"euclid-randers", "Euclidean alpha, constant beta = b dx1, phi = 1 + s (Berwald)", {{"b", 0.3}, {"n", 3}}, kFlatProps},
       [](const Params& p) {
         require(get(p, "b") > 0 && get(p, "b") < 1, "0 < b < 1");
         return flat("euclid-randers", dimension(p), get(p, "b"), PhiFamily::randers());
       }},
      {{"euclid-kropina", "Euclidean alpha, constant beta = b dx1, phi = 1/s (Berwald)", {{"b", 0.5}, {"n", 3}}, kFlatProps},
       [](const Params& p) {
         require(get(p, "b") > 0, "b > 0");
         return flat("euclid-kropina", dimension(p), get(p, "b"), PhiFamily::kropina());
       }},
      {{"euclid-matsumoto", "Euclidean alpha, constant beta = b dx1, phi = 1/(1 - s) (Berwald)", {{"b", 0.3}, {"n", 3}},
        kFlatProps},
       [](const Params& p) {
         require(get(p, "b") > 0 && get(p, "b") < 0.5, "0 < b < 1/2");
         return flat("euclid-matsumoto", dimension(p), get(p, "b"), PhiFamily::matsumoto());
       }},
      {{"euclid-randers-type", "Euclidean alpha, constant beta, phi = c1 sqrt(1 + c2 s^2) + c3 s (Berwald)",
        {{"c1", 1}, {"c2", 0.5}, {"c3", 0.3}, {"b", 0.5}, {"n", 3}}, kFlatProps},
       [](const Params& p) {
         auto phi = PhiFamily::randers_type(get(p, "c1"), get(p, "c2"), get(p, "c3"));
         require(get(p, "b") > 0 && get(p, "b") < phi.b0(), "0 < b < b0");
         return flat("euclid-randers-type", dimension(p), get(p, "b"), phi);
       }},
      {{"hopf-randers", "round S^3, eps * Hopf form, phi = 1 + s (C-reducible, S = 0, not Berwald)", {{"eps", 0.4}},
        kHopfProps},
       [](const Params& p) {
         require(get(p, "eps") > 0 && get(p, "eps") < 1, "0 < eps < 1");
         return hopf("hopf-randers", get(p, "eps"), PhiFamily::randers());
       }},
      {{"hopf-kropina", "round S^3, eps * Hopf form, phi = 1/s (C-reducible, S = 0, not Berwald)", {{"eps", 1}},
        kHopfProps},
       [](const Params& p) {
         require(get(p, "eps") > 0, "eps > 0");
         return hopf("hopf-kropina", get(p, "eps"), PhiFamily::kropina());
       }},
      {{"hopf-matsumoto", "round S^3, eps * Hopf form, phi = 1/(1 - s) (S = 0, not C-reducible)", {{"eps", 0.4}},
        kHopfProps},
       [](const Params& p) {
         require(get(p, "eps") > 0 && get(p, "eps") < 0.5, "0 < eps < 1/2");
         return hopf("hopf-matsumoto", get(p, "eps"), PhiFamily::matsumoto());
       }},
      {{"randers-type", "round S^3, eps * Hopf form, phi = c1 sqrt(1 + c2 s^2) + c3 s",
        {{"c1", 1}, {"c2", 0.5}, {"c3", 0.3}, {"eps", 0.5}}, kHopfProps},
       [](const Params& p) {
         auto phi = PhiFamily::randers_type(get(p, "c1"), get(p, "c2"), get(p, "c3"));
         require(get(p, "eps") > 0 && get(p, "eps") < 1 && get(p, "eps") < phi.b0(), "0 < eps < min(1, b0)");
         return hopf("randers-type", get(p, "eps"), phi);
       }},
      {{"rk-change", "round S^3, eps * Hopf form, phi = -1/(2 c1 s) + c2 s/(2 c1) (C-reducible, S = 0)",
        {{"c1", -0.5}, {"c2", -1}, {"eps", 1}}, kHopfProps},
       [](const Params& p) {
         require(get(p, "eps") > 0, "eps > 0");
         return hopf("rk-change", get(p, "eps"), PhiFamily::rk_change(get(p, "c1"), get(p, "c2")));
       }},
  };
  return list;
}

}  // namespace

std::string round_sphere_factor() { return "4/(1+x1^2+x2^2+x3^2)^2"; }

std::vector<std::string> hopf_form(double eps) {
  const std::string d = "/(1+x1^2+x2^2+x3^2)^2";
  const std::string e = num(eps);
  return {e + "*4*(x1*x3-x2)" + d, e + "*4*(x1+x2*x3)" + d, e + "*(-2)*(x1^2+x2^2-x3^2-1)" + d};
}

const std::vector<ZooEntryInfo>& zoo_list() {
  static const std::vector<ZooEntryInfo> list = [] {
    std::vector<ZooEntryInfo> out;
    for (const auto& b : builders()) out.push_back(b.info);
    return out;
  }();
  return list;
}

MetricSpec zoo_build(const std::string& id, const std::map<std::string, double>& params) {
  for (const auto& b : builders()) {
    if (b.info.id != id) continue;
    Params p = b.info.defaults;
    for (const auto& [k, v] : params) {
      if (!p.count(k)) throw InputError("zoo entry " + id + " has no parameter '" + k + "'");
      if (!std::isfinite(v)) throw InputError("parameter '" + k + "' must be finite");
      p[k] = v;
    }
    MetricSpec spec = b.build(p);
    spec.params = p;
    return spec;
  }
  throw InputError("unknown zoo id: " + id);
}

MetricSpec zoo_get(const std::string& id, const std::map<std::string, double>& params) {
  MetricSpec spec = zoo_build(id, params);
  const auto report = validate_entry(spec);
  if (!report.passed) {
    std::ostringstream os;
    os << "zoo entry " << id << " failed validation:";
    for (const auto& r : report.rows)
      if (!r.ok) os << " " << r.quantity << " = " << r.value << (r.lower_bound ? " < " : " > ") << r.bound << ";";
    throw ValidationError(os.str());
  }
  return spec;
}

ValidationReport validate_entry(const MetricSpec& spec, int points, std::uint64_t seed) {
  bool parallel = false, killing = false, constant = false, nonzero = false;
  for (const auto& prop : spec.declared_properties) {
    if (prop == kParallel)
      parallel = true;
    else if (prop == kKilling)
      killing = true;
    else if (prop == kConstantLength)
      constant = true;
    else if (prop == kSNonzero)
      nonzero = true;
    else
      throw InputError("unknown declared property: " + prop);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double nabla = 0, r = 0, s_vec = 0, d_b_sq = 0, s_max = 0;
  for (int k = 0; k < points; ++k) {
    Vector x(spec.n);
    for (int i = 0; i < spec.n; ++i) x(i) = spec.box.lo(i) + u(rng) * (spec.box.hi(i) - spec.box.lo(i));
    const auto st = riemann_state(spec, x);
    nabla = std::max(nabla, norm2(st.nabla_b, st.a_inv));
    r = std::max(r, norm2(st.r, st.a_inv));
    s_vec = std::max(s_vec, norm_covector(st.s_vec, st.a_inv));
    d_b_sq = std::max(d_b_sq, st.d_b_sq.cwiseAbs().maxCoeff());
    s_max = std::max(s_max, norm2(st.s, st.a_inv));
  }

  ValidationReport rep;
  rep.id = spec.id;
  rep.points = points;
  auto row = [&](const char* prop, const char* quantity, double value, double bound, bool lower) {
    rep.rows.push_back({prop, quantity, value, bound, lower, lower ? value >= bound : value <= bound});
  };
  if (parallel) row(kParallel, "max |b_{i|j}|_a", nabla, 1e-10, false);
  if (killing) row(kKilling, "max |r_ij|_a", r, 1e-9, false);
  if (constant) {
    row(kConstantLength, "max |s_j|_a", s_vec, 1e-9, false);
    row(kConstantLength, "max |d b^2|", d_b_sq, 1e-9, false);
  }
  if (nonzero) row(kSNonzero, "max |s_ij|_a", s_max, 0.1, true);
  rep.passed = std::all_of(rep.rows.begin(), rep.rows.end(), [](const ValidationRow& r) { return r.ok; });
  return rep;
}

}  // namespace finsler
