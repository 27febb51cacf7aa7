#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gsieve/cli/config.hpp"
#include "gsieve/cli/output.hpp"

using namespace gsieve;
using namespace gsieve::cli;
using nlohmann::json;

namespace {

const char* kFull = R"({
  "constants": {"m": 2.0, "omega": 0.5, "hbar": 1.5},
  "params": {"lambda": 0.1, "d_qq": 1.0, "d_pp": 0.5, "d_pq": 0.05},
  "initial_state": {"shape": {"area": 2.0, "theta": 0.3, "aleph": 1.7}},
  "time_grid": {"t_max": {"periods": 3}, "steps": 30},
  "sieve": {"eval_time": 12.5, "grid": {"theta": 128, "aleph": 96}},
  "scan": {"lambda": {"from": 1e-3, "to": 1.0, "points": 4, "spacing": "log"},
           "d_pq": {"values": [0.0, 0.1]}},
  "output": {"path": "out.json", "format": "json"}
})";

std::string field_of(auto&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.field();
  }
  FAIL("expected ConfigError");
  return {};
}

ScenarioConfig parse(const char* text) { return parse_config(json::parse(text)); }

}  // namespace

TEST_CASE("full config parses") {
  const ScenarioConfig c = parse(kFull);
  CHECK(c.constants.m == 2.0);
  CHECK(c.constants.omega == 0.5);
  CHECK(c.constants.hbar == 1.5);
  REQUIRE(c.params);
  CHECK(c.params->d_pq == 0.05);
  CHECK(c.params->enforce_positivity);
  REQUIRE(c.shape);
  CHECK(*c.shape == ShapeDecomposition{2.0, 0.3, 1.7});
  REQUIRE(c.time_grid);
  CHECK(c.time_grid->t_max->in_periods);
  CHECK(c.sieve.eval_time->value == 12.5);
  CHECK(c.sieve.theta_samples == 128);
  REQUIRE(c.scan.size() == 2);
  CHECK(c.scan[0].name == "lambda");
  CHECK(c.scan[1].values == std::vector<double>{0.0, 0.1});
  CHECK(c.output.format == OutputFormat::json);
  validate_config(c);

  const std::vector<double> times = build_times(c);
  REQUIRE(times.size() == 31);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == doctest::Approx(3 * 2 * std::numbers::pi / 0.5));
  CHECK(resolve_eval_time(c, build_params(c)) == 12.5);
}

TEST_CASE("defaults") {
  const ScenarioConfig c = parse("{}");
  CHECK(c.constants.m == 1.0);
  CHECK(c.constants.omega == 1.0);
  CHECK(c.constants.hbar == 1.0);
  CHECK_FALSE(c.params);
  CHECK_FALSE(c.sieve.eval_time);
  CHECK(c.output.format == OutputFormat::csv);
  validate_config(c);
  CHECK(field_of([&] { build_params(c); }) == "params");
  CHECK(field_of([&] { build_initial_state(c); }) == "initial_state");
  CHECK(field_of([&] { build_times(c); }) == "time_grid");
}

TEST_CASE("scan axis sampling") {
  ScanAxis log{"lambda", 1e-4, 10.0, 6, true, {}};
  const std::vector<double> s = log.samples();
  REQUIRE(s.size() == 6);
  CHECK(s.front() == doctest::Approx(1e-4));
  CHECK(s[1] == doctest::Approx(1e-3));
  CHECK(s.back() == 10.0);
  ScanAxis lin{"d_pq", 0.0, 1.0, 5, false, {}};
  CHECK(lin.samples() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  ScanAxis one{"omega", 2.0, 3.0, 1, false, {}};
  CHECK(one.samples() == std::vector<double>{2.0});
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of([] { parse(R"({"bogus": 1})"); }) == "bogus");
  CHECK(field_of([] { parse(R"({"params": {"lambda": 1, "d_qq": 1}})"); }) == "params.d_pp");
  CHECK(field_of([] { parse(R"({"params": {"lambda": "x", "d_qq": 1, "d_pp": 1}})"); }) ==
        "params.lambda");
  CHECK(field_of([] { parse(R"({"constants": {"mass": 1}})"); }) == "constants.mass");
  CHECK(field_of([] { parse(R"({"initial_state": {}})"); }) == "initial_state");
  CHECK(field_of([] {
          parse(R"({"initial_state": {"shape": {}, "covariance": {"sigma_qq": 1, "sigma_pp": 1}}})");
        }) == "initial_state");
  CHECK(field_of([] { parse(R"({"time_grid": {"steps": 1.5}})"); }) == "time_grid.steps");
  CHECK(field_of([] { parse(R"({"sieve": {"eval_time": "soon"}})"); }) == "sieve.eval_time");
  CHECK(field_of([] { parse(R"({"output": {"format": "xml"}})"); }) == "output.format");
  CHECK(field_of([] { parse(R"({"coefficients": {"a1": [1]}})"); }) == "coefficients.a1");
  CHECK(field_of([] { parse(R"({"scan": {"m": {"values": [1]}}})"); }) == "scan.m");
  CHECK(field_of([] { parse(R"({"scan": {"lambda": {"from": 1, "to": 2}}})"); }) ==
        "scan.lambda.points");
  CHECK(field_of([] { parse(R"([1, 2])"); }) == "");
}

TEST_CASE("range validation") {
  auto invalid_field = [](const char* text) {
    const ScenarioConfig c = parse(text);
    return field_of([&] { validate_config(c); });
  };
  CHECK(invalid_field(R"({"time_grid": {"t_max": 0, "steps": 10}})") == "time_grid.t_max");
  CHECK(invalid_field(R"({"time_grid": {"t_max": 1, "steps": 0}})") == "time_grid.steps");
  CHECK(invalid_field(R"({"time_grid": {"steps": 3}})") == "time_grid");
  CHECK(invalid_field(R"({"time_grid": {"times": [0, -1]}})") == "time_grid.times[1]");
  CHECK(invalid_field(R"({"constants": {"omega": -1}})") == "constants.omega");
  CHECK(invalid_field(R"({"params": {"lambda": 0, "d_qq": 1, "d_pp": 1}})") == "params.lambda");
  CHECK(invalid_field(R"({"params": {"lambda": 1, "d_qq": -1, "d_pp": 1}})") == "params.d_qq");
  CHECK(invalid_field(R"({"params": {"lambda": 1, "d_qq": 1, "d_pp": 1},
                          "coefficients": {"a1": [1, 0]}})") == "params");
  CHECK(invalid_field(R"({"sieve": {"grid": {"theta": 10}}})") == "sieve.grid.theta");
  CHECK(invalid_field(R"({"scan": {"lambda": {"from": 0, "to": 1, "points": 3, "spacing": "log"}}})") ==
        "scan.lambda");
}

TEST_CASE("physics errors from builders") {
  const ScenarioConfig bad_state = parse(R"({"constants": {},
      "initial_state": {"covariance": {"sigma_qq": 0.1, "sigma_pp": 0.1}}})");
  CHECK_THROWS_AS(build_initial_state(bad_state), Error);
  const ScenarioConfig bad_params = parse(R"({"params": {"lambda": 1, "d_qq": 0.1, "d_pp": 0.1}})");
  CHECK_THROWS_AS(build_params(bad_params), Error);
  const ScenarioConfig warn_params = parse(
      R"({"params": {"lambda": 1, "d_qq": 0.1, "d_pp": 0.1, "enforce_positivity": false}})");
  CHECK(build_params(warn_params).policy() == PositivityPolicy::warn);
  const ScenarioConfig coeffs = parse(R"({"coefficients": {"a1": [1, 0], "b1": [0, -1]}})");
  CHECK(build_params(coeffs).lambda() == 1.0);
}

TEST_CASE("overrides") {
  ScenarioConfig c = parse(kFull);
  Overrides ov;
  ov.lambda = 0.2;
  ov.omega = 3.0;
  ov.t_max = 7.0;
  ov.eval_time = "auto";
  ov.format = "csv";
  ov.out = "-";
  apply_overrides(c, ov);
  CHECK(c.params->lambda == 0.2);
  CHECK(c.params->d_qq == 1.0);
  CHECK(c.constants.omega == 3.0);
  CHECK(c.time_grid->t_max == TimeValue{7.0, false});
  CHECK(c.time_grid->steps == 30);
  CHECK_FALSE(c.sieve.eval_time);
  CHECK(c.output.format == OutputFormat::csv);
  CHECK(c.output.path == "-");

  Overrides t;
  t.eval_time = "2.5";
  apply_overrides(c, t);
  CHECK(c.sieve.eval_time == TimeValue{2.5, false});

  Overrides junk;
  junk.eval_time = "2.5x";
  CHECK(field_of([&] { apply_overrides(c, junk); }) == "sieve.eval_time");
  Overrides fmt;
  fmt.format = "yaml";
  CHECK(field_of([&] { apply_overrides(c, fmt); }) == "output.format");
  Overrides coeff;
  coeff.a1 = std::complex<double>(1, 0);
  CHECK(field_of([&] { apply_overrides(c, coeff); }) == "coefficients");

  ScenarioConfig empty;
  Overrides ab;
  ab.a1 = std::complex<double>(1, 0);
  ab.b1 = std::complex<double>(0, -1);
  apply_overrides(empty, ab);
  REQUIRE(empty.coefficients);
  CHECK(empty.coefficients->b1 == std::complex<double>(0, -1));
}

TEST_CASE("dumped config re-parses to the same scenario") {
  for (const char* text :
       {kFull, "{}",
        R"({"coefficients": {"a1": [1, 0.25], "b2": [0, -1]},
            "initial_state": {"covariance": {"sigma_qq": 0.7, "sigma_pp": 0.9, "sigma_pq": 0.1}},
            "time_grid": {"times": [0, 0.1, {"periods": 0.5}]}})"}) {
    const ScenarioConfig original = parse(text);
    std::ostringstream os;
    write_json(os, to_json(original));
    const ScenarioConfig again = parse_config(json::parse(os.str()));
    CHECK(again == original);
  }
  // Values that need all 17 digits survive.
  ScenarioConfig c;
  c.params = ParamSpec{0.1 + 0.2, 1.0 / 3.0, 2.0 / 7.0, -1e-17, true};
  std::ostringstream os;
  write_json(os, to_json(c));
  CHECK(parse_config(json::parse(os.str())) == c);
}

TEST_CASE("config files") {
  const std::string path = "test_config_tmp.json";
  {
    std::ofstream f(path);
    f << "{\"params\": {\"lambda\": 0.5,";  // truncated
  }
  CHECK(field_of([&] { load_config_file(path); }) == "--config");
  {
    std::ofstream f(path);
    f << kFull;
  }
  CHECK(load_config_file(path) == parse(kFull));
  std::remove(path.c_str());
  CHECK(field_of([] { load_config_file("/nonexistent/dir/x.json"); }) == "--config");
}

TEST_CASE("float formatting") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");

  std::ostringstream os;
  write_csv(os, {{"a", "1"}, {"b", "s"}}, {{1.0, 0.5}, {2.0, NAN}}, {"done"});
  CHECK(os.str() == "# a (1),b (s)\n1,0.5\n2,nan\n# done\n");

  std::ostringstream js;
  nlohmann::ordered_json doc;
  doc["x"] = 0.1;
  doc["y"] = NAN;
  doc["v"] = {1, 2};
  write_json(js, doc);
  const json back = json::parse(js.str());
  CHECK(back["x"].get<double>() == 0.1);
  CHECK(back["y"].is_null());
}
