#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "cuspweyl/manifold_model.hpp"
#include "cuspweyl/model_io.hpp"

using namespace cuspweyl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing_support::circle_model;
using testing_support::pi;

namespace {

bool has_kind(const std::vector<Violation>& v, const std::string& kind) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

}  // namespace

TEST_CASE("half flux on the reference circle is valid") {
  CHECK(validate_model(circle_model(0.5)).empty());
}

TEST_CASE("integer flux is rejected in magnetic mode") {
  const auto v = validate_model(circle_model(1.0));
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "integer flux");
  CHECK(v[0].cusp == 0u);
  CHECK(validate_model(circle_model(1.0), FieldMode::free).empty());
}

TEST_CASE("field-free model is valid unless magnetic mode is forced") {
  CHECK(validate_model(circle_model(0.0)).empty());
  CHECK(has_kind(validate_model(circle_model(0.0), FieldMode::magnetic), "integer flux"));
}

TEST_CASE("flux check uses the holonomy tolerance") {
  CHECK(has_kind(validate_model(circle_model(1.0 + 1e-15)), "integer flux"));
  CHECK(validate_model(circle_model(1.0 + 1e-9)).empty());
}

TEST_CASE("delta range is checked against n") {
  ManifoldModel m;
  m.n = 3;
  m.cusps.push_back({{{1.0, 1.0}, {0.3, 0.3}}, 1.0, 0.3});
  CHECK(has_kind(validate_model(m), "delta <= 1/n"));
  m.cusps[0].delta = 1.0 / 3.0;
  CHECK(has_kind(validate_model(m), "delta <= 1/n"));
  m.cusps[0].delta = 1.2;
  CHECK(has_kind(validate_model(m), "delta > 1"));
  m.cusps[0].delta = 0.34;
  CHECK(validate_model(m).empty());
}

TEST_CASE("structural violations") {
  auto m = circle_model(0.5);
  m.cusps[0].cross_section.lengths = {1.0, 2.0};
  CHECK(has_kind(validate_model(m), "cross-section dimension"));
  CHECK(has_kind(validate_model(m), "magnetic dimension"));

  m = circle_model(0.5);
  m.cusps[0].cross_section.lengths = {-1.0};
  CHECK(has_kind(validate_model(m), "nonpositive length"));

  m = circle_model(0.5);
  m.cusps[0].a = 0.0;
  CHECK(has_kind(validate_model(m), "nonpositive a"));

  m = circle_model(0.5);
  m.cusps[0].cross_section.magnetic = {std::nan("")};
  CHECK(has_kind(validate_model(m), "non-finite field"));

  m = circle_model(0.5);
  m.cusps.clear();
  CHECK(has_kind(validate_model(m), "no cusps"));

  m = circle_model(0.5);
  m.core.volume = -1.0;
  CHECK(has_kind(validate_model(m), "core volume"));

  m = circle_model(0.5);
  m.n = 1;
  CHECK(has_kind(validate_model(m), "dimension"));

  CHECK_THROWS_AS(require_valid(circle_model(1.0)), precondition_error);
}

TEST_CASE("cusp volumes") {
  CHECK_THAT(cusp_volume(circle_model(0.5).cusps[0], 2), WithinRel(2.0 * pi, 1e-15));

  auto unit = circle_model(0.5, 1.0, 1.0, 1.0);
  CHECK_THAT(cusp_volume(unit.cusps[0], 2), WithinRel(1.0, 1e-15));

  CuspEnd c3{{{2.0 * pi, 2.0 * pi}, {0.0, 0.0}}, 1.0, 1.0};
  CHECK_THAT(cusp_volume(c3, 3), WithinRel(2.0 * pi * pi, 1e-15));

  // |X| / ((n delta - 1) a^{2(n delta - 1)}) at a = 2, delta = 0.75, n = 2.
  auto bent = circle_model(0.5, 0.75, 2.0);
  CHECK_THAT(cusp_volume(bent.cusps[0], 2), WithinRel(2.0 * pi / (0.5 * 2.0), 1e-15));

  CHECK_THROWS_AS(cusp_volume(circle_model(0.5, 0.5).cusps[0], 2), precondition_error);
}

TEST_CASE("total volume is additive") {
  auto m = circle_model(0.5);
  CHECK_THAT(total_volume(m), WithinRel(2.0 * pi, 1e-15));
  m.core.volume = 1.0;
  CHECK_THAT(total_volume(m), WithinRel(2.0 * pi + 1.0, 1e-15));
  m.core.volume = 0.0;
  m.cusps.push_back(m.cusps[0]);
  CHECK_THAT(total_volume(m), WithinRel(4.0 * pi, 1e-15));
}

TEST_CASE("spectral floor") {
  CHECK(spectral_floor(circle_model(0.5)) == 0.25);
  CHECK(spectral_floor(circle_model(0.5, 0.8)) == 0.0);
  ManifoldModel m5;
  m5.n = 5;
  m5.cusps.push_back({{{1, 1, 1, 1}, {0, 0, 0, 0}}, 1.0, 1.0});
  CHECK(spectral_floor(m5) == 4.0);
}

TEST_CASE("Weyl constants") {
  CHECK_THAT(unit_ball_volume(1), WithinRel(2.0, 1e-15));
  CHECK_THAT(unit_ball_volume(2), WithinRel(pi, 1e-15));
  CHECK_THAT(unit_ball_volume(3), WithinRel(4.0 * pi / 3.0, 1e-15));
  CHECK_THAT(weyl_constant(2), WithinRel(1.0 / (4.0 * pi), 1e-15));
}

TEST_CASE("field scaling") {
  const auto m = with_scaled_field(circle_model(0.5), 0.1);
  CHECK_THAT(m.cusps[0].cross_section.magnetic[0], WithinAbs(0.05, 1e-17));
  CHECK(without_field(circle_model(0.5)).field_free());
}

TEST_CASE("model json round trip") {
  auto m = circle_model(0.5, 0.75, 1.5);
  m.core = {3.0, 0.5};
  const auto back = model_from_json(model_to_json(m));
  CHECK(back.n == 2);
  CHECK(back.core.volume == 3.0);
  CHECK(back.core.remainder_coeff == 0.5);
  CHECK(back.cusps[0].a == 1.5);
  CHECK(back.cusps[0].delta == 0.75);
  CHECK(back.cusps[0].cross_section.magnetic == std::vector<double>{0.5});
}

TEST_CASE("model parser rejects malformed documents") {
  CHECK_THROWS_AS(parse_model("{"), model_format_error);
  CHECK_THROWS_AS(parse_model(R"({"dimension": 2, "core": {"volume": 0, "remainder_coeff": 0}})"),
                  model_format_error);
  CHECK_THROWS_AS(parse_model(R"({"dimension": 2.5, "core": {"volume": 0, "remainder_coeff": 0}, "cusps": []})"),
                  model_format_error);
  CHECK_THROWS_AS(
      parse_model(R"({"dimension": 2, "core": {"volume": 0, "remainder_coeff": 0}, "cusps": [], "extra": 1})"),
      model_format_error);
  CHECK_THROWS_AS(parse_model(R"({"dimension": 2, "core": {"volume": 0, "remainder_coeff": 0},
      "cusps": [{"a": 1, "delta": 1, "lengths": [1], "magnetic": ["x"]}]})"),
                  model_format_error);
}

TEST_CASE("shipped models parse and validate as documented") {
  const auto dir = testing_support::models_dir();
  CHECK(validate_model(parse_model(read_text_file(dir + "/reference_n2.json"))).empty());
  CHECK(validate_model(parse_model(read_text_file(dir + "/reference_n2_delta075.json"))).empty());
  CHECK(validate_model(parse_model(read_text_file(dir + "/field_free_n2.json"))).empty());
  CHECK(validate_model(parse_model(read_text_file(dir + "/torus_n3.json"))).empty());
  CHECK(validate_model(parse_model(read_text_file(dir + "/two_cusps_core.json"))).empty());
  const auto v = validate_model(parse_model(read_text_file(dir + "/integer_flux_n2.json")));
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == "integer flux");
}

TEST_CASE("content hash is stable") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
  CHECK(content_hash("a") != content_hash("b"));
}
