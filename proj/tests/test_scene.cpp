#include <doctest.h>

#include <algorithm>

#include "vlcsense/scene.hpp"
#include "vlcsense/scene_io.hpp"

using namespace vlcs;

namespace {

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
  return std::any_of(violations.begin(), violations.end(), [&](const std::string& v) {
    return v.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("default scenario is well formed") {
  const Scenario s = make_default_scenario();
  CHECK(validate_scenario(s).empty());
  CHECK(s.pds.size() == 2);
  CHECK(s.events.size() == 10);
  CHECK_FALSE(s.events[0].reference_point.has_value());
  for (std::size_t i = 1; i < s.events.size(); ++i)
    CHECK(s.events[i].reference_point.has_value());
}

TEST_CASE("validate_scenario flags a PD outside the room") {
  Scenario s = make_default_scenario();
  s.pds[0].position.z = -1.0;
  const auto violations = validate_scenario(s);
  REQUIRE_FALSE(violations.empty());
  CHECK(mentions(violations, "pd[0].position outside room"));
}

TEST_CASE("validate_scenario flags duplicate event ids") {
  Scenario s = make_default_scenario();
  s.events[1].event_id = 3;
  s.events[3].event_id = 3;
  CHECK(mentions(validate_scenario(s), "duplicate event_id 3"));
}

TEST_CASE("validate_scenario flags bad reflectivity and non-unit orientation") {
  Scenario s = make_default_scenario();
  s.room.wall_reflectivity[2] = 1.5;
  s.luminaire.orientation = {0, 0, -2};
  const auto violations = validate_scenario(s);
  CHECK(mentions(violations, "wall_reflectivity[2]"));
  CHECK(mentions(violations, "luminaire.orientation"));
}

TEST_CASE("scenario JSON round trip") {
  const Scenario s = make_default_scenario();
  const Scenario back = parse_scenario(scenario_to_json(s));
  CHECK(validate_scenario(back).empty());
  CHECK(back.room.width == s.room.width);
  CHECK(back.room.wall_reflectivity == s.room.wall_reflectivity);
  CHECK(back.luminaire.position == s.luminaire.position);
  CHECK(back.luminaire.led_cutoff_hz == s.luminaire.led_cutoff_hz);
  REQUIRE(back.pds.size() == s.pds.size());
  for (std::size_t i = 0; i < s.pds.size(); ++i) {
    CHECK(back.pds[i].position == s.pds[i].position);
    CHECK(back.pds[i].area == s.pds[i].area);
    CHECK(back.pds[i].fov_half_angle == s.pds[i].fov_half_angle);
  }
  REQUIRE(back.events.size() == s.events.size());
  for (std::size_t e = 0; e < s.events.size(); ++e) {
    CHECK(back.events[e].event_id == s.events[e].event_id);
    CHECK(back.events[e].label == s.events[e].label);
    CHECK(back.events[e].obstacles.size() == s.events[e].obstacles.size());
    CHECK(back.events[e].reference_point.has_value() ==
          s.events[e].reference_point.has_value());
    if (s.events[e].reference_point)
      CHECK(*back.events[e].reference_point == *s.events[e].reference_point);
  }
  CHECK(back.patch_size == s.patch_size);
}

TEST_CASE("parse_scenario rejects malformed JSON with a parse error") {
  CHECK_THROWS_AS(parse_scenario("{ not json"), io_error);
}

TEST_CASE("parse_scenario names missing fields") {
  CHECK_THROWS_WITH_AS(parse_scenario("{}"), doctest::Contains("room"), invalid_input);
}
