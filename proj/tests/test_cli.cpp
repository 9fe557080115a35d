#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "reset_lab/commands.hpp"
#include "reset_lab/scenario.hpp"

using namespace reset_lab;
using namespace reset_lab::cli;
using nlohmann::json;

namespace {

const std::filesystem::path kScenarios = RESET_LAB_SCENARIO_DIR;

json load(const std::string& name) {
    std::ifstream in(kScenarios / (name + ".json"));
    return json::parse(in);
}

std::string parse_error(const json& j) {
    try {
        (void)parse_scenario(j);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "reset_lab_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

int run(const std::string& cmd, const std::filesystem::path& file, CommandOptions opt = {}) {
    opt.out_dir = scratch_dir();
    std::ostringstream log, err;
    return run_command(cmd, file, opt, log, err);
}

}  // namespace

TEST_CASE("bundled scenarios round-trip") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        ++count;
        CAPTURE(entry.path().string());
        const auto s = load_scenario(entry.path());
        const json once = to_json(s);
        const json twice = to_json(parse_scenario(once));
        CHECK(once == twice);
        CHECK(s.name == entry.path().stem().string());
    }
    CHECK(count >= 10);
}

TEST_CASE("diagnostics name the field") {
    auto j = load("horowitz_nom_0p25");
    j["policy"]["tau_m"] = -1.0;
    CHECK(parse_error(j).find("policy") != std::string::npos);

    j = load("horowitz_nom_0p25");
    j["initial"]["x0"] = {1.0, 2.0};
    CHECK(parse_error(j).find("initial.x0") != std::string::npos);

    j = load("horowitz_nom_0p25");
    j["matrices"] = {{"a", {{0.0}}}, {"a_r", {{1.0}}}, {"c", {0.0}}};
    CHECK(parse_error(j).find("not both") != std::string::npos);

    j = load("horowitz_nom_0p25");
    j["blocks"]["controller"]["b"] = {{1.0}};
    CHECK(parse_error(j).find("controller") != std::string::npos);

    j = load("horowitz_nom_0p25");
    j["analysis"]["colour"] = "blue";
    CHECK(parse_error(j).find("analysis.colour") != std::string::npos);

    j = load("horowitz_nom_0p25");
    j["version"] = 7;
    CHECK(parse_error(j).find("version") != std::string::npos);

    j = load("chaos_fore");
    j["analysis"]["parameterization"] = {{"kind", "circle"}};
    CHECK(parse_error(j).find("parameterization") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run("stability", kScenarios / "horowitz_nom_0p25.json") == kExitOk);
    CHECK(run("stability", kScenarios / "classical_fore.json") == kExitOk);
    CHECK(run("stability", kScenarios / "horowitz_step.json") == kExitInapplicable);
    CHECK(run("compare", kScenarios / "classical_fore.json") == kExitInapplicable);
    CHECK(run("simulate", kScenarios / "missing.json") == kExitInvalid);
    CHECK(run("frobnicate", kScenarios / "horowitz_nom_0p25.json") == kExitInvalid);
    CommandOptions ranged;
    ranged.method = "ranged";
    CHECK(run("stability", kScenarios / "classical_fore.json", ranged) == kExitInapplicable);
    CHECK(exit_code(stability::Result::Unstable) == kExitUnstable);
    CHECK(exit_code(stability::Result::Inconclusive) == kExitInconclusive);
}

TEST_CASE("simulate writes a trace and a summary") {
    REQUIRE(run("simulate", kScenarios / "zero_equilibrium.json") == kExitOk);
    std::ifstream in(scratch_dir() / "zero_equilibrium_summary.json");
    const auto summary = json::parse(in);
    CHECK(summary["jump_count"] == 0);
    for (double v : summary["final"]["x"]) {
        CHECK(v == 0.0);
    }
    std::ifstream csv(scratch_dir() / "zero_equilibrium_trace.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,j,q,tau,x_1,x_2,x_3,x_4");
}

TEST_CASE("poincare graph marks the discontinuity region") {
    CommandOptions opt;
    opt.grid = 400;
    REQUIRE(run("poincare", kScenarios / "horowitz_nom_1p35.json", opt) == kExitOk);
    std::ifstream in(scratch_dir() / "horowitz_nom_1p35_map.csv");
    std::string line;
    int rows = -1;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == 400);
}
