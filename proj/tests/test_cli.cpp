#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = fliess::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("fliess_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return (path / name).string();
    }
    std::string str(const std::string& name = "") const { return (path / name).string(); }
};

const char* kDuffing = "n = 2\nlinear = 1 3\nnonlinear.2 = 1\nnonlinear.3 = 1/2\n";
const char* kLinear = "n = 2\nlinear = 1 3\n";

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"expand"}).code == 1);
    CHECK(run({"expand", "/nonexistent.spec"}).code == 1);
    CHECK(run({"diagrams", "--order", "x"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("expand reports counts") {
    TempDir d;
    const std::string spec = d.write("duffing.spec", kDuffing);
    Run r = run({"expand", spec, "--order", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("g1: 7 term(s)") != std::string::npos);
    CHECK(r.out.find("order 2: raw 360, listed 1875, merged 331, interleavings 52672") != std::string::npos);
    CHECK(r.out.find("-36ε2") != std::string::npos);

    Run dump = run({"expand", spec, "--order", "1", "--format", "dump"});
    REQUIRE(dump.code == 0);
    CHECK(dump.out.find("# order 1: raw 7") != std::string::npos);
}

TEST_CASE("term budget exhaustion exits with 3") {
    TempDir d;
    const std::string spec = d.write("duffing.spec", kDuffing);
    ::setenv("FLIESS_TERM_BUDGET", "200", 1);
    Run r = run({"expand", spec, "--order", "2"});
    ::unsetenv("FLIESS_TERM_BUDGET");
    CHECK(r.code == 3);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("inconsistent poles exit with 2") {
    TempDir d;
    const std::string spec = d.write("bad.spec", "n = 2\nlinear = 1 3\npoles = -1\n");
    Run r = run({"expand", spec});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("mean response writes a CSV and a manifest") {
    TempDir d;
    const std::string spec = d.write("duffing.spec", kDuffing);
    Run r = run({"mean-response", spec, "--sigma2", "1/10", "--order", "1", "--t-end", "2", "--dt", "0.5",
                 "--out-dir", d.str("out")});
    REQUIRE(r.code == 0);
    auto csv = lines(slurp(d.path / "out" / "mean_response.csv"));
    REQUIRE(csv.size() == 6);
    CHECK(csv[0] == "t,mean");
    CHECK(csv[1] == "0,0");
    json m = json::parse(slurp(d.path / "out" / "mean-response.manifest.json"));
    CHECK(m["command"] == "mean-response");
    CHECK(m["tool_version"] == fliess::cli::kToolVersion);
    CHECK(m["options"]["order"] == 1);
    CHECK(m["seed"].is_null());
    CHECK(m["outputs"].size() == 1);
}

TEST_CASE("linear second moment settles at sigma^2 / 6") {
    TempDir d;
    const std::string spec = d.write("linear.spec", kLinear);
    Run r = run({"moment", spec, "--n", "2", "--sigma2", "2", "--order", "0", "--t-end", "60", "--dt", "1",
                 "--out-dir", d.str()});
    REQUIRE(r.code == 0);
    auto csv = lines(slurp(d.path / "moment.csv"));
    const std::string last = csv.back();
    CHECK(std::stod(last.substr(last.find(',') + 1)) == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("respond compares the series with the ODE") {
    TempDir d;
    const std::string spec = d.write("duffing.spec", kDuffing);
    std::string input = "t,x\n";
    for (int k = 0; k <= 100; ++k) input += std::to_string(0.05 * k) + ",0.01\n";
    const std::string in = d.write("input.csv", input);
    Run r = run({"respond", spec, in, "--order", "1", "--dt", "0.01", "--out-dir", d.str()});
    REQUIRE(r.code == 0);
    auto csv = lines(slurp(d.path / "respond.csv"));
    CHECK(csv[0] == "t,input,series,ode");
    double worst = 0;
    for (std::size_t k = 1; k < csv.size(); ++k) {
        std::vector<double> v;
        std::istringstream row(csv[k]);
        for (std::string cell; std::getline(row, cell, ',');) v.push_back(std::stod(cell));
        worst = std::max(worst, std::abs(v[2] - v[3]));
    }
    CHECK(worst < 1e-5);
    CHECK(fs::exists(d.path / "respond.manifest.json"));
}

TEST_CASE("diagrams writes one DOT file per shape") {
    TempDir d;
    Run r = run({"diagrams", "--order", "2,1", "--out-dir", d.str()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Y21 =") == 0);
    for (int k = 1; k <= 5; ++k) CHECK(fs::exists(d.path / ("Y21_" + std::to_string(k) + ".dot")));
    CHECK_FALSE(fs::exists(d.path / "Y21_6.dot"));
    auto table = lines(slurp(d.path / "Y21_multiplicities.csv"));
    REQUIRE(table.size() == 6);
    CHECK(table[0] == "i,j,shape,multiplicity");
    CHECK(table[1] == "2,1,1,4");
    CHECK(table[5] == "2,1,5,3");
    json m = json::parse(slurp(d.path / "diagrams.manifest.json"));
    CHECK(m["spec"].is_null());
    CHECK(m["outputs"].size() == 6);

    Run zero = run({"diagrams", "--order", "0,0", "--out-dir", d.str("zero")});
    CHECK(zero.code == 0);
    CHECK(zero.out.find("Y00 = H X") != std::string::npos);
}

TEST_CASE("validate runs every check and writes a report") {
    TempDir d;
    const std::string spec = d.write("duffing.spec", kDuffing);
    Run r = run({"validate", spec, "--order", "1", "--paths", "4000", "--word-length", "8", "--seed", "3",
                 "--out-dir", d.str()});
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("result=PASS") != std::string::npos);
    for (const char* check : {"factorization", "fixed_point_residual", "linear_step_response", "oracle_triangle",
                              "monte_carlo_mean"})
        CHECK(r.out.find(std::string("check=") + check) != std::string::npos);
    json rep = json::parse(slurp(d.path / "validate_report.json"));
    CHECK(rep["result"] == "PASS");
    json m = json::parse(slurp(d.path / "validate.manifest.json"));
    CHECK(m["seed"] == 3);
}
