#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "relwig/config.hpp"

using namespace relwig;

TEST_SUITE("config") {

TEST_CASE("key = value lines, comments and blanks") {
  const auto c = Config::parse("# comment\n\nlambda = 10\n  dt=1e-3  \nmode = nonlocal\n");
  CHECK(c.has("lambda"));
  CHECK(c.get("mode").value() == "nonlocal");
  CHECK(c.get_double("dt").value() == 1e-3);
  CHECK(c.get_int("lambda").value() == 10);
  CHECK_FALSE(c.get("missing").has_value());
  CHECK_FALSE(c.get_double("missing").has_value());
  CHECK(c.values().size() == 3);
}

TEST_CASE("later keys win") {
  const auto c = Config::parse("a = 1\na = 2\n");
  CHECK(c.get_int("a").value() == 2);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(Config::parse("no equals sign\n"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse(" = 3\n"), std::invalid_argument);
  try {
    Config::parse("a = 1\nbroken\n", "run.cfg");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
  }
  const auto c = Config::parse("x = abc\ny = 1.5\nz = inf\n");
  CHECK_THROWS_AS(c.get_double("x"), std::invalid_argument);
  CHECK_THROWS_AS(c.get_int("y"), std::invalid_argument);
  CHECK_THROWS_AS(c.get_double("z"), std::invalid_argument);
}

TEST_CASE("load from disk") {
  const std::filesystem::path d = std::filesystem::path(RELWIG_TEST_TMP) / "config";
  std::filesystem::create_directories(d);
  const auto path = (d / "a.cfg").string();
  std::ofstream(path) << "lambda = 0.3\n";
  CHECK(Config::load(path).get_double("lambda").value() == 0.3);
  CHECK_THROWS_AS(Config::load((d / "missing.cfg").string()), std::runtime_error);
}

}  // TEST_SUITE
