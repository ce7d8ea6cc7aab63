#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "finsler/io.hpp"
#include "finsler/zoo.hpp"

using namespace finsler;

namespace {

Json randers_doc() {
  return Json::parse(R"({
    "schema": "finsler-metric/1",
    "id": "file-randers",
    "dimension": 2,
    "a": [["1+x1^2"], [0, 1]],
    "b": ["0.2", 0.1],
    "phi": {"family": "randers"},
    "box": {"lo": [-1, -1], "hi": [1, 1]}
  })");
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("metric file parsing") {
  const auto spec = metric_from_json(randers_doc());
  CHECK(spec.id == "file-randers");
  CHECK(spec.n == 2);
  Vector x(2);
  x << 0.5, 0;
  CHECK(a_value(spec, x)(0, 0) == doctest::Approx(1.25));
  CHECK(a_value(spec, x)(0, 1) == 0.0);
  CHECK(b_value(spec, x)(1) == doctest::Approx(0.1));

  auto full = randers_doc();
  full["a"] = Json::parse(R"([["1+x1^2", "0.1*x2"], ["0.1*x2", "1"]])");
  CHECK(a_value(metric_from_json(full), Vector::Ones(2))(0, 1) == doctest::Approx(0.1));
  full["a"] = Json::parse(R"([["1", "0.1"], ["0.2", "1"]])");
  CHECK_THROWS_AS(metric_from_json(full), InputError);
}

TEST_CASE("metric file errors") {
  auto doc = randers_doc();
  doc.erase("b");
  CHECK_THROWS_AS(metric_from_json(doc), InputError);
  doc = randers_doc();
  doc["dimension"] = 5;
  CHECK_THROWS_AS(metric_from_json(doc), InputError);
  doc = randers_doc();
  doc["a"][1][0] = "x1 +";
  CHECK_THROWS_AS(metric_from_json(doc), ParseError);
  doc = randers_doc();
  doc["b"][0] = "x3";
  CHECK_THROWS_AS(metric_from_json(doc), InputError);
  doc = randers_doc();
  doc["phi"]["family"] = "finsler";
  CHECK_THROWS_AS(metric_from_json(doc), InputError);
  doc = randers_doc();
  doc["schema"] = "finsler-metric/9";
  CHECK_THROWS_AS(metric_from_json(doc), InputError);
  doc = randers_doc();
  doc["box"]["lo"] = Json::array({-1});
  CHECK_THROWS_AS(metric_from_json(doc), InputError);
}

TEST_CASE("metric documents round trip") {
  for (const auto& e : zoo_list()) {
    const auto spec = zoo_build(e.id);
    const auto doc = metric_to_json(spec);
    const auto back = metric_from_json(doc);
    CHECK(back.n == spec.n);
    for (std::size_t i = 0; i < spec.a.size(); ++i) CHECK(back.a[i].structurally_equal(spec.a[i]));
    for (std::size_t i = 0; i < spec.b.size(); ++i) CHECK(back.b[i].structurally_equal(spec.b[i]));
    CHECK(back.phi.name() == spec.phi.name());
    CHECK(back.phi.params() == spec.phi.params());
    CHECK(back.declared_properties == spec.declared_properties);
    CHECK(metric_to_json(back).dump() == doc.dump());
  }
}

TEST_CASE("metric references") {
  const auto z = parse_zoo_ref("hopf-randers:eps=0.3");
  CHECK(z.id == "hopf-randers");
  CHECK(z.params.at("eps") == 0.3);
  CHECK(parse_zoo_ref("euclid-randers:b=0.2,n=2").params.size() == 2);
  CHECK(parse_zoo_ref("hopf-kropina").params.empty());
  CHECK_THROWS_AS(parse_zoo_ref("hopf-randers:eps"), InputError);
  CHECK_THROWS_AS(parse_zoo_ref("hopf-randers:eps=abc"), InputError);

  CHECK(resolve_metric("zoo:hopf-randers:eps=0.3").params.at("eps") == 0.3);
  CHECK_THROWS_AS(resolve_metric("zoo:nothing"), InputError);
  CHECK_THROWS_AS(resolve_metric("/nonexistent/metric.json"), InputError);

  const auto good = write_temp("finsler_good.json", metric_to_json(zoo_build("hopf-kropina")).dump());
  CHECK(resolve_metric(good).phi.kind() == PhiFamily::Kind::Kropina);

  auto bad_doc = metric_to_json(zoo_build("hopf-kropina"));
  bad_doc["b"][0] = "1.1*" + bad_doc["b"][0].get<std::string>();
  const auto bad = write_temp("finsler_bad.json", bad_doc.dump());
  CHECK_THROWS_AS(resolve_metric(bad), ValidationError);

  const auto broken = write_temp("finsler_broken.json", "{\"dimension\": ");
  CHECK_THROWS_AS(resolve_metric(broken), InputError);
}

TEST_CASE("reports are reproducible and complete") {
  ClassifyOptions opt;
  opt.samples = 30;
  opt.s_points = 3;
  opt.s_directions = 3;
  opt.seed = 42;
  const auto spec = zoo_get("hopf-randers");
  const auto a = to_json(classify(spec, opt)).dump(2);
  const auto b = to_json(classify(spec, opt)).dump(2);
  CHECK(a == b);

  const auto doc = Json::parse(a);
  CHECK(doc["schema"] == kReportSchema);
  CHECK(doc["tool_version"] == kToolVersion);
  CHECK(doc["metric"]["id"] == "hopf-randers");
  CHECK(doc["metric"]["params"]["eps"] == 0.4);
  CHECK(doc["sampling"]["seed"] == 42);
  CHECK(doc["sampling"]["requested"] == 30);
  CHECK(doc["tolerances"]["eps_tensor"] == 1e-8);
  CHECK(doc["predicates"].size() == 8);
  CHECK(doc["fits"]["lambda"].is_object());
  CHECK(doc["theorem"]["outcome"] == "CONSISTENT");

  opt.seed = 43;
  CHECK(to_json(classify(spec, opt)).dump(2) != a);
  CHECK(number(std::nan("")).is_null());
}
