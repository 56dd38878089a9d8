#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "mroot_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path p = temp_dir() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

RunResult run_cli(const std::string& args) {
    fs::path errfile = temp_dir() / "stderr.txt";
    std::string cmd = std::string(MROOT_CLI_PATH) + " " + args + " 2>" +
                      errfile.string();
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0)
        result.out.append(buf, got);
    int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    std::ifstream err(errfile);
    std::stringstream ss;
    ss << err.rdbuf();
    result.err = ss.str();
    return result;
}

const char* kConformalSpec = R"json({
  "kind": "mth-root",
  "dimension": 3,
  "degree": 3,
  "coefficients": [{"index": [1, 2, 3], "expr": "exp(x1)/6"}],
  "points": [["0", "0", "0"], ["0", "1", "2"]]
})json";

const char* kQuadraticSpec = R"json({
  "kind": "mth-root",
  "dimension": 2,
  "degree": 2,
  "coefficients": [
    {"index": [1, 1], "expr": "1"},
    {"index": [2, 2], "expr": "x1^2"}
  ],
  "points": [["2", "0"]]
})json";

const char* kRotatingSpec = R"json({
  "kind": "decomposable",
  "dimension": 3,
  "gamma": [
    {"index": [1, 1], "expr": "1"},
    {"index": [2, 2], "expr": "1"},
    {"index": [3, 3], "expr": "1"}
  ],
  "b": ["cos(x3)", "sin(x3)", "0"],
  "points": [["0", "0", "0"]]
})json";

const char* kFlatDecompSpec = R"json({
  "kind": "decomposable",
  "dimension": 3,
  "gamma": [
    {"index": [1, 1], "expr": "1"},
    {"index": [2, 2], "expr": "1"},
    {"index": [3, 3], "expr": "1"}
  ],
  "b": ["1", "0", "0"],
  "points": [["0", "0", "0"]]
})json";

const char* kBadNormSpec = R"json({
  "kind": "decomposable",
  "dimension": 3,
  "gamma": [
    {"index": [1, 1], "expr": "1"},
    {"index": [2, 2], "expr": "1"},
    {"index": [3, 3], "expr": "1"}
  ],
  "b": ["2", "0", "0"],
  "points": [["0", "0", "0"]]
})json";

const char* kBm3Spec = R"json({
  "kind": "mth-root",
  "dimension": 3,
  "degree": 3,
  "coefficients": [{"index": [1, 2, 3], "expr": "1/6"}],
  "points": [["0", "0", "0"]]
})json";

}  // namespace

TEST_CASE("classify: conformal cubic is berwald and non-riemannian") {
    fs::path spec = write_file("conformal.json", kConformalSpec);
    RunResult r = run_cli("classify " + spec.string() + " --json");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["riemannian"] == "no");
    CHECK(doc["berwald_all"] == "yes");
    CHECK(doc["landsberg_all"] == "yes");
    CHECK(doc["points"].size() == 2);
}

TEST_CASE("classify output is byte-identical across runs") {
    fs::path spec = write_file("conformal2.json", kConformalSpec);
    RunResult a = run_cli("classify " + spec.string() + " --json");
    RunResult b = run_cli("classify " + spec.string() + " --json");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    RunResult c = run_cli("classify " + spec.string());
    RunResult d = run_cli("classify " + spec.string());
    CHECK(c.out == d.out);
}

TEST_CASE("classify: quadratic metrics are riemannian") {
    fs::path spec = write_file("quadratic.json", kQuadraticSpec);
    RunResult r = run_cli("classify " + spec.string() + " --json");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["riemannian"] == "yes");
    CHECK(doc["berwald_all"] == "yes");
}

TEST_CASE("classify: rotating decomposable spec fails with a witness") {
    fs::path spec = write_file("rotating.json", kRotatingSpec);
    RunResult r = run_cli("classify " + spec.string() +
                          " --json --dump-witness");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["berwald_all"] == "no");
    CHECK(doc["points"][0].contains("berwald_witness"));
    CHECK(doc["points"][0]["berwald_witness"].contains("residual"));
}

TEST_CASE("classify honors --point overrides") {
    fs::path spec = write_file("conformal3.json", kConformalSpec);
    RunResult r = run_cli("classify " + spec.string() +
                          " --point 1/2,0,0 --json");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    REQUIRE(doc["points"].size() == 1);
    CHECK(doc["points"][0]["mode"] == "float");
    CHECK(doc["points"][0]["fell_back"] == true);
}

TEST_CASE("verify-decomp: flat spec passes, bad norm exits 2") {
    fs::path flat = write_file("flat.json", kFlatDecompSpec);
    RunResult r = run_cli("verify-decomp " + flat.string() + " --json");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["berwald_all"] == true);
    CHECK(doc["points"][0]["parallel_b"] == true);
    CHECK(doc["points"][0]["f_diagnostic"]["factorized"] == true);

    fs::path bad = write_file("badnorm.json", kBadNormSpec);
    RunResult rbad = run_cli("verify-decomp " + bad.string());
    CHECK(rbad.exit_code == 2);
    CHECK(rbad.err.find("unit") != std::string::npos);

    RunResult fixed =
        run_cli("verify-decomp " + bad.string() + " --normalize-b --json");
    REQUIRE(fixed.exit_code == 0);
    json fdoc = json::parse(fixed.out);
    CHECK(fdoc["berwald_all"] == true);
}

TEST_CASE("classify enforces unit norm on decomposable specs") {
    fs::path bad = write_file("badnorm2.json", kBadNormSpec);
    RunResult r = run_cli("classify " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("unit") != std::string::npos);
    RunResult fixed =
        run_cli("classify " + bad.string() + " --normalize-b --json");
    REQUIRE(fixed.exit_code == 0);
    json doc = json::parse(fixed.out);
    CHECK(doc["berwald_all"] == "yes");
}

TEST_CASE("verify-decomp rejects mth-root specs") {
    fs::path spec = write_file("bm3.json", kBm3Spec);
    RunResult r = run_cli("verify-decomp " + spec.string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("geodesic writes a trajectory and reports drift") {
    fs::path spec = write_file("conformal4.json", kConformalSpec);
    fs::path traj = temp_dir() / "traj.txt";
    RunResult r = run_cli("geodesic " + spec.string() +
                          " --x0 0,0,0 --y0 1,1,1 --dt 0.001 --steps 100 "
                          "--out " +
                          traj.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.find("F(start)") != std::string::npos);
    std::ifstream in(traj);
    std::string header;
    std::getline(in, header);
    CHECK(header == "# t x1 x2 x3 y1 y2 y3 F");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 101);
}

TEST_CASE("spray: constant cubic prints vanishing coefficients") {
    fs::path spec = write_file("bm3s.json", kBm3Spec);
    RunResult r = run_cli("spray " + spec.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("G^1 = 0") != std::string::npos);
    CHECK(r.out.find("G^3 = 0") != std::string::npos);
    CHECK(r.out.find("L^1_11 = 0") != std::string::npos);
}

TEST_CASE("spray: quadratic metric prints the christoffel spray") {
    fs::path spec = write_file("quadratic2.json", kQuadraticSpec);
    RunResult r = run_cli("spray " + spec.string());
    REQUIRE(r.exit_code == 0);
    // 2G^1 = -x1 y2^2 with x1 = 2: G^1 = -y2^2
    CHECK(r.out.find("G^1 = -y2^2") != std::string::npos);
    // N^1_2 = dG^1/dy2 = -2 y2
    CHECK(r.out.find("N^1_2 = -2*y2") != std::string::npos);
}

TEST_CASE("degenerate input exits with code 2") {
    fs::path spec = write_file("degtheir.json", R"json({
      "kind": "mth-root", "dimension": 2, "degree": 3,
      "coefficients": [{"index": [1, 1, 1], "expr": "1"}],
      "points": [["0", "0"]]
    })json");
    RunResult r = run_cli("classify " + spec.string());
    CHECK(r.exit_code == 2);

    RunResult rbad = run_cli("classify /nonexistent.json --point 0,0");
    CHECK(rbad.exit_code == 2);
    CHECK(rbad.err.find("error") != std::string::npos);
}

TEST_CASE("missing points is a spec error") {
    fs::path spec = write_file("nopoints.json", R"json({
      "kind": "mth-root", "dimension": 3, "degree": 3,
      "coefficients": [{"index": [1, 2, 3], "expr": "1/6"}]
    })json");
    RunResult r = run_cli("classify " + spec.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("point") != std::string::npos);
}
