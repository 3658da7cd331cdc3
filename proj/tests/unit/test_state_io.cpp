#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "relwig/state_io.hpp"

using namespace relwig;
using nlohmann::json;

namespace {

std::filesystem::path tmp_dir() {
  const std::filesystem::path d = std::filesystem::path(RELWIG_TEST_TMP) / "state_io";
  std::filesystem::create_directories(d);
  return d;
}

json base() {
  return json::parse(R"({"lambda": 10, "N": 3, "C_plus": [[0.7071067811865476, 0], [0, 0], [0.7071067811865476, 0]]})");
}

}  // namespace

TEST_SUITE("state_io") {

TEST_CASE("parses the documented layout") {
  const auto s = parse_state_json(base());
  CHECK(s.lambda == 10.0);
  CHECK(s.n == 3);
  CHECK(s.kernel_gamma == 0.0);
  CHECK_FALSE(s.explicit_matrices);
  CHECK(s.state.minus.norm() == 0.0);
  CHECK(std::abs(s.coeffs.even_plus(0, 2) - 0.5) < 1e-15);
  CHECK(s.coeffs.odd_plus.norm() == 0.0);

  auto j = base();
  j["C_minus"] = json::array({json::array({0, 0}), 0.0, json::array({0, 0})});
  j["kernel_gamma"] = 0.25;
  const auto t = parse_state_json(j);
  CHECK(t.kernel_gamma == 0.25);
}

TEST_CASE("write and read round trip") {
  ChargeStateVector st{Eigen::VectorXcd(3), Eigen::VectorXcd(3)};
  st.plus << cplx(0.1, 0.2), cplx(-0.3, 0.4), cplx(0.5, 0.0);
  st.minus << cplx(0.0, -0.2), cplx(0.3, 0.1), cplx(0.1, 0.1);
  const double nrm = std::sqrt(st.norm());
  st.plus /= nrm;
  st.minus /= nrm;
  const auto file = make_state_file(1.5, st, 0.1);
  const auto path = (tmp_dir() / "roundtrip.json").string();
  write_state_file(path, file);
  const auto back = read_state_file(path);
  CHECK(back.lambda == 1.5);
  CHECK(back.n == 3);
  CHECK(back.kernel_gamma == 0.1);
  CHECK((back.state.plus - st.plus).norm() == 0.0);
  CHECK((back.state.minus - st.minus).norm() == 0.0);
  CHECK((back.coeffs.odd_plus - file.coeffs.odd_plus).norm() == 0.0);
}

TEST_CASE("explicit matrices override the state vector") {
  auto j = base();
  j["rho_plus"] = json::parse("[[[0.5,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0.5,0]]]");
  const auto s = parse_state_json(j);
  CHECK(s.explicit_matrices);
  CHECK(s.coeffs.even_plus(0, 2) == cplx(0.0));
  CHECK(s.coeffs.even_plus(2, 2) == cplx(0.5));

  j["sigma_plus"] = json::parse("[[[0,0],[0.1,0.2],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]");
  const auto t = parse_state_json(j);
  CHECK(t.coeffs.odd_minus(1, 0) == std::conj(t.coeffs.odd_plus(0, 1)));

  const auto path = (tmp_dir() / "explicit.json").string();
  write_state_file(path, t);
  const auto back = read_state_file(path);
  CHECK(back.explicit_matrices);
  CHECK((back.coeffs.even_plus - t.coeffs.even_plus).norm() == 0.0);
  CHECK((back.coeffs.odd_plus - t.coeffs.odd_plus).norm() == 0.0);
}

TEST_CASE("malformed files name the offending key") {
  auto expect = [](const json& j, const std::string& needle) {
    try {
      parse_state_json(j);
      FAIL("expected invalid_argument for " << needle);
    } catch (const std::invalid_argument& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  expect(json::array(), "top level");
  auto j = base();
  j.erase("N");
  expect(j, "'N'");
  j = base();
  j["lambda"] = -1.0;
  expect(j, "'lambda'");
  j = base();
  j["N"] = 2;
  expect(j, "'C_plus'");
  j = base();
  j["C_plus"][1] = "x";
  expect(j, "C_plus[1]");
  j = base();
  j["kernel_gamma"] = -0.5;
  expect(j, "'kernel_gamma'");
  j = base();
  j["rho_plus"] = json::array({json::array({0, 0, 0})});
  expect(j, "'rho_plus'");
  j = base();
  j.erase("C_plus");
  expect(j, "'C_plus'");
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(read_state_file((tmp_dir() / "missing.json").string()), std::runtime_error);
  const auto path = (tmp_dir() / "broken.json").string();
  std::ofstream(path) << "{\"lambda\": 1, ";
  CHECK_THROWS_AS(read_state_file(path), std::invalid_argument);
}

}  // TEST_SUITE
