#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path workdir() {
  const fs::path d = fs::path(RELWIG_TEST_TMP) / "cli";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const auto d = workdir();
  const auto out = d / "stdout.txt", err = d / "stderr.txt";
  const std::string cmd = std::string("\"") + RELWIG_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string state(const std::string& name, const nlohmann::json& j) {
  const auto p = workdir() / name;
  std::ofstream(p) << j.dump();
  return p.string();
}

std::string sup02() {
  const double h = 1.0 / std::sqrt(2.0);
  return state("sup02.json", {{"lambda", 10}, {"N", 3}, {"C_plus", {{h, 0}, {0, 0}, {h, 0}}}});
}

std::string out_dir(const std::string& name) {
  const auto d = workdir() / name;
  fs::remove_all(d);
  return d.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("nosuch").code == 2);
  CHECK(run("fig1 --bogus 1").code == 2);
  const auto bad_num = run("fig1 --lambda abc --out " + out_dir("u1"));
  CHECK(bad_num.code == 2);
  CHECK(bad_num.err.find("--lambda") != std::string::npos);
  CHECK(run("fig1 --format png --out " + out_dir("u2")).code == 2);
  CHECK(run("fig2 --grid 1,2,3 --out " + out_dir("u3")).code == 2);
  CHECK(run("evolve --out " + out_dir("u4")).code == 2);
  CHECK(run("evolve --state /nonexistent/x.json --out " + out_dir("u5")).code == 2);
  CHECK(run("evolve --state " + sup02() + " --method euler --out " + out_dir("u6")).code == 2);
  CHECK(run("validate --state " + sup02() + " --mode odd --out " + out_dir("u7")).code == 2);
  const auto malformed = state("malformed.json", {{"lambda", 1}});
  CHECK(run("validate --state " + malformed + " --out " + out_dir("u8")).code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("successful runs print the JSON report") {
  const auto r = run("fig1 --system rotator --basis-size 8 --out " + out_dir("ok1"));
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["rotator"]["basis_size"] == 8);
  const auto v = run("validate --state " + sup02() + " --out " + out_dir("ok2"));
  CHECK(v.code == 0);
  CHECK(nlohmann::json::parse(v.out)["purity"]["is_pure"] == true);
}

TEST_CASE("invariant violations exit with 1") {
  const double h = 0.5;
  nlohmann::json j = {{"lambda", 10}, {"N", 3}, {"C_plus", {{0.7071067811865476, 0}, {0, 0}, {0.7071067811865476, 0}}}};
  j["rho_plus"] = {{{h, 0}, {0, 0}, {2 * h, 0}}, {{0, 0}, {0, 0}, {0, 0}}, {{2 * h, 0}, {0, 0}, {h, 0}}};
  const auto corrupt = state("corrupt.json", j);
  const auto mixed_ok = run("validate --state " + corrupt + " --out " + out_dir("v1"));
  CHECK(mixed_ok.code == 0);
  CHECK(nlohmann::json::parse(mixed_ok.out)["purity"]["is_pure"] == false);
  const auto strict = run("validate --state " + corrupt + " --require-pure --out " + out_dir("v2"));
  CHECK(strict.code == 1);
  CHECK(strict.err.find("invariant violation") != std::string::npos);

  nlohmann::json k = {{"lambda", 0.3}, {"N", 3}, {"C_plus", {{0.7071067811865476, 0}, {0, 0}, {0.7071067811865476, 0}}}};
  const auto guard = run("evolve --state " + state("rk.json", k) +
                         " --method rk4 --dt 0.5 --t-final 1 --grid -8,8,-8,8,32,32 --out " + out_dir("v3"));
  CHECK(guard.code == 1);
  CHECK(guard.err.find("stability guard") != std::string::npos);
  CHECK(guard.err.find("--dt") != std::string::npos);
}

TEST_CASE("config file precedence") {
  const auto cfg = workdir() / "fig1.cfg";
  std::ofstream(cfg) << "# fig1 settings\nlambda = 3\nbasis_size = 6\nsystem = rotator\nunused_key = 1\n";
  const auto from_file = run("fig1 --config " + cfg.string() + " --out " + out_dir("c1"));
  REQUIRE(from_file.code == 0);
  auto j = nlohmann::json::parse(from_file.out);
  CHECK(j["rotator"]["lambda"] == 3.0);
  CHECK(j["rotator"]["basis_size"] == 6);
  CHECK_FALSE(j.contains("free"));
  CHECK(from_file.err.find("unused_key") != std::string::npos);

  const auto cli_wins = run("fig1 --config " + cfg.string() + " --lambda 5 --out " + out_dir("c2"));
  REQUIRE(cli_wins.code == 0);
  j = nlohmann::json::parse(cli_wins.out);
  CHECK(j["rotator"]["lambda"] == 5.0);
  CHECK(j["rotator"]["basis_size"] == 6);

  const auto bad = workdir() / "bad.cfg";
  std::ofstream(bad) << "lambda 3\n";
  CHECK(run("fig1 --config " + bad.string() + " --out " + out_dir("c3")).code == 2);
  CHECK(run("fig1 --config " + (workdir() / "none.cfg").string() + " --out " + out_dir("c4")).code != 0);
}

TEST_CASE("identical runs give identical bytes") {
  const std::string args = " --state " + sup02() + " --t-final 0.3 --dt 0.01 --out ";
  const auto a = out_dir("det_a"), b = out_dir("det_b");
  REQUIRE(run("evolve" + args + a).code == 0);
  REQUIRE(run("evolve" + args + b).code == 0);
  for (const char* f : {"trajectory.csv", "manifest.json"}) {
    CHECK(fs::exists(fs::path(a) / f));
    CHECK(slurp(fs::path(a) / f) == slurp(fs::path(b) / f));
  }
  const std::string g = " --grid -5,5,-5,5,64,64 --format csv,json,svg --out ";
  const auto c = out_dir("det_c"), d = out_dir("det_d");
  REQUIRE(run("fig2" + g + c).code == 0);
  REQUIRE(run("fig2" + g + d).code == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(c)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(fs::path(d) / e.path().filename()));
  }
  CHECK(files == 13);  // 4 panels x 3 formats + report
}

TEST_CASE("figure data files carry their metadata") {
  const auto d = out_dir("meta");
  REQUIRE(run("fig2 --grid -5,5,-5,5,32,32 --out " + d).code == 0);
  const auto csv = slurp(fs::path(d) / "fig2_standard.csv");
  for (const char* key : {"# lambda=10", "# basis_size=3", "# grid=-5,5,-5,5,32,32", "# units="})
    CHECK_MESSAGE(csv.find(key) != std::string::npos, key);
  const auto d3 = out_dir("meta3");
  REQUIRE(run("fig3 --grid -40,40,-1,1,128,128 --out " + d3).code == 0);
  const auto f3 = slurp(fs::path(d3) / "fig3_epsilon.csv");
  CHECK(f3.find("# units=FreeParticle") != std::string::npos);
  CHECK(f3.find("# delta_p=8") != std::string::npos);
}

TEST_CASE("hamiltonian command options") {
  const std::string base = "hamiltonian --lambda 0.5 --grid -3,3,-3,3,16,16 --accel cesaro ";
  const auto r = run(base + "--cesaro-order 1 --tolerance 1e-4 --out " + out_dir("h1"));
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["acceleration"] == "cesaro");
  CHECK(j["convergence"]["converged"] == true);
  // high-order averaging cannot reach a tight tolerance inside the term budget
  const auto slow = run(base + "--cesaro-order 3 --tolerance 1e-8 --out " + out_dir("h2"));
  CHECK(slow.code == 1);
  CHECK(slow.err.find("did not converge") != std::string::npos);
  CHECK(run("hamiltonian --accel nope --out " + out_dir("h3")).code == 2);
}

}  // TEST_SUITE
