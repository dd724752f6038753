#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fusion/report.hpp"

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(FUSECALC_BIN) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string golden(const std::string& name) {
    std::ifstream in(std::string(GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kFuseArgs =
    "fuse --central-charge=-2 --h1=-1/8 --h2=-1/8 --singular-level 2 --depth 0 --w 1";

}  // namespace

TEST_CASE("fuse subcommand emits the depth-0 result") {
    auto r = run_cli(kFuseArgs);
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["fusion"]["dimension"] == 2);
    CHECK(doc["fusion"]["jordan"].size() == 1);
    CHECK(doc["fusion"]["jordan"][0]["eigenvalue"] == "0");
    CHECK(doc["fusion"]["jordan"][0]["block_sizes"] == nlohmann::json::array({2}));
    CHECK(doc["fusion"]["l0_matrix"] ==
          nlohmann::json::parse(R"([["-1/4","-1/16"],["1","1/4"]])"));
}

TEST_CASE("singular subcommand lists the level-2 vector") {
    auto r = run_cli("singular --central-charge=-2 --h1=-1/8 --auto-singular-max 3");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["singular_vectors"].size() == 1);
    CHECK(doc["singular_vectors"][0]["level"] == 2);
    CHECK(doc["singular_vectors"][0]["coefficients"] ==
          nlohmann::json::parse(R"json({"L(-1)L(-1)": "1", "L(-2)": "-1/2"})json"));
}

TEST_CASE("dual subcommand at w = 2") {
    auto r = run_cli("dual --central-charge=-2 --h1=-1/8 --h2=-1/8 --singular-level 2 --w 2");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["dual"]["matrix"] ==
          nlohmann::json::parse(R"([["-1/4","2"],["-1/32","1/4"]])"));
}

TEST_CASE("crosscheck subcommand reports agreement") {
    auto r = run_cli(
        "crosscheck --central-charge=-2 --h1=-1/8 --h2=-1/8 --singular-level 2 --w 1");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["crosscheck"]["ok"] == true);
}

TEST_CASE("module-basis subcommand emits graded data") {
    auto r = run_cli(
        "module-basis --central-charge=-2 --h1=-1/8 --singular-level 2 --lmax 3");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["dims"]["2"] == 1);
    CHECK(doc["bases"]["2"] == nlohmann::json::array({"L(-2)|hw"}));
}

TEST_CASE("heisenberg fusion through the CLI") {
    auto r = run_cli("fuse --algebra heisenberg --lambda1 1 --lambda2 2 --depth 0 --w 1");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["fusion"]["dimension"] == 1);
    CHECK(doc["fusion"]["zero_modes"]["a"] == nlohmann::json::parse(R"([["3"]])"));
}

TEST_CASE("byte-identical output across reruns") {
    auto a = run_cli(kFuseArgs);
    auto b = run_cli(kFuseArgs);
    CHECK(a.out == b.out);
    auto c = run_cli(kFuseArgs + " --format text");
    auto d = run_cli(kFuseArgs + " --format text");
    REQUIRE(!c.out.empty());
    CHECK(c.out == d.out);
}

TEST_CASE("json reports round-trip through the parser") {
    auto r = run_cli(kFuseArgs);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(fusion::emit(doc, "json") == r.out);
}

TEST_CASE("golden files stay stable") {
    auto fuse_run = run_cli(kFuseArgs);
    CHECK(fuse_run.out == golden("fuse_c-2_h-18_d0_w1.json"));
    auto singular_run = run_cli("singular --central-charge=-2 --h1=-1/8 --auto-singular-max 3");
    CHECK(singular_run.out == golden("singular_c-2_h-18.json"));
}

TEST_CASE("exit codes distinguish failure classes") {
    // Malformed rational: usage error.
    CHECK(run_cli("fuse --central-charge=x --h1=-1/8 --singular-level 2").exit_code == 1);
    // Below the documented lmax floor: usage error.
    CHECK(run_cli(kFuseArgs + " --lmax 2").exit_code == 1);
    // Verma cover without relations never stabilizes.
    CHECK(run_cli("fuse --central-charge=-2 --h1=-1/8 --h2=-1/8 --depth 0 --w 1").exit_code == 2);
}
