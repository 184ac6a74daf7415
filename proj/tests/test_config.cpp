#include <doctest.h>

#include "railmap/config.hpp"

using namespace railmap;

TEST_CASE("config parses scalars, tables and arrays of tables") {
  const char* doc = R"(
# top-level
seed = 42
ratio = 0.5
name = "pch like"
flag = true

[die]
width_um = 8000.0
height_um = 12000   # integer promotes to double on read

[[rails]]
id = "core_prim"

[[rails]]
id = "usb"
volts = 8.2e-1
)";
  const cfg::Table root = cfg::parse(doc, "test");
  CHECK(root.at("seed").as_int("seed") == 42);
  CHECK(root.at("ratio").as_double("ratio") == doctest::Approx(0.5));
  CHECK(root.at("name").as_string("name") == "pch like");
  CHECK(root.at("flag").as_bool("flag"));
  const cfg::Table& die = root.at("die").as_table("die");
  CHECK(die.at("height_um").as_double("h") == doctest::Approx(12000.0));
  const cfg::Array& rails = root.at("rails").as_array("rails");
  REQUIRE(rails.size() == 2);
  CHECK(rails[1].as_table("r").at("id").as_string("id") == "usb");
  CHECK(rails[1].as_table("r").at("volts").as_double("v") == doctest::Approx(0.82));
}

TEST_CASE("config parses nested and multi-line arrays") {
  const char* doc = R"(
[[regions]]
polygon_um = [
  [0.0, 0.0],
  [100.0, 0.0],
  [100.0, 50.0],  # comment inside the array
]
rect = [1, 2, 3, 4]
)";
  const cfg::Table root = cfg::parse(doc, "test");
  const auto& region = root.at("regions").as_array("regions")[0].as_table("regions[0]");
  const auto& poly = region.at("polygon_um").as_array("polygon_um");
  REQUIRE(poly.size() == 3);
  CHECK(poly[2].as_array("v")[1].as_double("y") == doctest::Approx(50.0));
  CHECK(region.at("rect").as_array("rect").size() == 4);
}

TEST_CASE("config syntax errors carry the source line") {
  try {
    cfg::parse("a = 1\nb = \n", "doc");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::syntax);
    CHECK(std::string(e.what()).find("doc:") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg::parse("a = 1\na = 2\n", "doc"), Error);
  CHECK_THROWS_AS(cfg::parse("[unclosed\n", "doc"), Error);
  CHECK_THROWS_AS(cfg::parse("s = \"oops\n", "doc"), Error);
}

TEST_CASE("config serialization round-trips") {
  const char* doc = R"(
seed = 7
[die]
width_um = 810.5
[[rails]]
id = "a"
[[rails]]
id = "b"
)";
  const cfg::Table root = cfg::parse(doc, "test");
  const std::string text = cfg::serialize(root);
  const cfg::Table again = cfg::parse(text, "roundtrip");
  CHECK(again.at("seed").as_int("seed") == 7);
  CHECK(again.at("die").as_table("die").at("width_um").as_double("w") == doctest::Approx(810.5));
  CHECK(again.at("rails").as_array("rails").size() == 2);
}

TEST_CASE("config lookup helpers name the missing element") {
  const cfg::Table root = cfg::parse("x = 1\n", "test");
  try {
    cfg::req_double(root, "width_um", "die");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::config);
    CHECK(std::string(e.what()).find("width_um") != std::string::npos);
  }
  CHECK(cfg::opt_double(root, "missing", 2.5, "die") == doctest::Approx(2.5));
}
