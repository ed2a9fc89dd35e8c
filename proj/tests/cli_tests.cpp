// End-to-end checks of the command line tool: spawns the real binary and
// inspects exit codes, stdout JSON, and written files.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "cli_test_stdout.txt";
  const std::string cmd = std::string(BRANCHFLOW_CLI_PATH) + " " + args +
                          " > " + out_path + " 2> cli_test_stderr.txt";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

const char* kTriangleFile = R"json({
  "version": 1,
  "alpha": 0.5,
  "capacity": 1.0,
  "source": [
    {"pos": [0.0, 0.0], "mass": 1.5},
    {"pos": [0.75, 0.66143782776614768], "mass": 0.5}
  ],
  "sink": [{"pos": [1.5, 0.0], "mass": 2.0}],
  "graph": {
    "vertices": [
      {"id": 0, "pos": [0.0, 0.0]},
      {"id": 1, "pos": [0.75, 0.66143782776614768]},
      {"id": 2, "pos": [1.5, 0.0]}
    ],
    "edges": [
      {"id": 0, "tail": 0, "head": 1, "weight": 0.5},
      {"id": 1, "tail": 1, "head": 2, "weight": 1.0},
      {"id": 2, "tail": 0, "head": 2, "weight": 1.0}
    ]
  }
})json";

const char* kFinalExampleFile = R"json({
  "version": 1,
  "alpha": 0.5,
  "capacity": 1.0,
  "source": [
    {"pos": [-1.0, 3.0], "mass": 2.5},
    {"pos": [1.0, 3.0], "mass": 0.5}
  ],
  "sink": [{"pos": [0.0, 0.0], "mass": 3.0}]
})json";

}  // namespace

TEST_CASE("eval prints the triangle costs") {
  write_file("cli_triangle.json", kTriangleFile);
  const RunResult r = run_cli("eval cli_triangle.json");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(out.at("m_alpha_c").get<double>() ==
        doctest::Approx(2.5 + std::sqrt(2.0) / 2.0).epsilon(1e-9));
  CHECK(out.at("mass").get<double>() == doctest::Approx(3.0));
  CHECK(out.at("size").get<double>() == doctest::Approx(3.5));
}

TEST_CASE("eval of an empty problem is zero") {
  write_file("cli_empty.json",
             R"({"version":1,"alpha":0.5,"capacity":1.0,"source":[],"sink":[]})");
  const RunResult r = run_cli("eval cli_empty.json");
  REQUIRE(r.exit_code == 0);
  CHECK(json::parse(r.out).at("m_alpha_c").get<double>() == 0.0);
}

TEST_CASE("malformed JSON exits 2") {
  write_file("cli_bad.json", "{ not json");
  CHECK(run_cli("eval cli_bad.json").exit_code == 2);
}

TEST_CASE("unbalanced input exits 3") {
  write_file("cli_unbalanced.json", R"json({
    "version": 1, "alpha": 0.5, "capacity": 1.0,
    "source": [{"pos": [0.0, 0.0], "mass": 1.0}],
    "sink": [{"pos": [1.0, 0.0], "mass": 2.0}]
  })json");
  CHECK(run_cli("eval cli_unbalanced.json").exit_code == 3);
}

TEST_CASE("decompose writes both parts and the certificate") {
  write_file("cli_triangle.json", kTriangleFile);
  const RunResult r = run_cli("decompose cli_triangle.json --out .");
  REQUIRE(r.exit_code == 0);
  const json cert = json::parse(r.out);
  CHECK(cert.at("t1_integer_multiples").get<bool>());
  CHECK(cert.at("cost_sum").get<double>() <=
        cert.at("cost_original").get<double>() + 1e-9);
  CHECK(std::ifstream("t1.json").good());
  CHECK(std::ifstream("t2.json").good());
  CHECK(std::ifstream("certificate.json").good());
}

TEST_CASE("optimize with oracle and SVG output") {
  write_file("cli_final.json", kFinalExampleFile);
  const RunResult r =
      run_cli("optimize cli_final.json --oracle --svg cli_final.svg");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(std::abs(out.at("delta").get<double>()) <= 1e-3);

  std::ifstream svg("cli_final.svg");
  REQUIRE(svg.good());
  std::stringstream ss;
  ss << svg.rdbuf();
  const std::string content = ss.str();
  size_t lines = 0, at = 0;
  while ((at = content.find("<line ", at)) != std::string::npos) {
    ++lines;
    ++at;
  }
  CHECK(lines == 4);  // corridor plus the three Y legs
}

TEST_CASE("oracle refuses oversized instances with exit 4") {
  write_file("cli_big.json", R"json({
    "version": 1, "alpha": 0.5, "capacity": 1.0,
    "source": [
      {"pos": [0.0, 0.0], "mass": 1.0}, {"pos": [1.0, 0.0], "mass": 1.0},
      {"pos": [2.0, 0.0], "mass": 1.0}, {"pos": [3.0, 0.0], "mass": 1.0},
      {"pos": [4.0, 0.0], "mass": 1.0}
    ],
    "sink": [{"pos": [2.0, 5.0], "mass": 5.0}]
  })json");
  CHECK(run_cli("optimize cli_big.json --oracle").exit_code == 4);
  CHECK(run_cli("oracle cli_big.json").exit_code == 4);
}

TEST_CASE("verify passes on the default seed and reports families") {
  const RunResult r = run_cli("verify --trials 100 --seed 42");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(out.at("all_pass").get<bool>());
  CHECK(out.at("families").size() >= 8);
  for (const json& fam : out.at("families"))
    CHECK(fam.at("violations").get<long>() == 0);
}

TEST_CASE("BRANCHFLOW_SEED overrides the default seed") {
  setenv("BRANCHFLOW_SEED", "7", 1);
  const RunResult r = run_cli("verify --trials 20");
  unsetenv("BRANCHFLOW_SEED");
  REQUIRE(r.exit_code == 0);
  CHECK(json::parse(r.out).at("seed").get<std::uint64_t>() == 7);

  // an explicit --seed still wins
  setenv("BRANCHFLOW_SEED", "7", 1);
  const RunResult r2 = run_cli("verify --trials 20 --seed 3");
  unsetenv("BRANCHFLOW_SEED");
  REQUIRE(r2.exit_code == 0);
  CHECK(json::parse(r2.out).at("seed").get<std::uint64_t>() == 3);
}
