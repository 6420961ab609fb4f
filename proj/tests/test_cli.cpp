#include "doctest.h"
#include "test_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

using namespace testutil;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const std::string& log) {
    const std::string cmd = std::string(SNLS_CLI_PATH) + " " + args + " >" + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_config(const std::string& dir, const std::string& extra = "") {
    const std::string path = dir + "/ref.conf";
    std::ofstream os(path);
    os << kReferenceConfig << extra;
    return path;
}

/// Every file in the run directory must appear in its manifest.
void check_manifest_covers(const std::string& dir) {
    std::ifstream is(dir + "/run_manifest.json");
    REQUIRE(is.good());
    nlohmann::json j;
    is >> j;
    std::set<std::string> listed;
    for (const auto& o : j.at("outputs")) listed.insert(o.get<std::string>());
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string() +
                                 (entry.is_directory() ? "/" : "");
        CHECK_MESSAGE(listed.count(name) == 1, "orphan artifact: ", name);
    }
}

}  // namespace

TEST_CASE("cli: error paths and exit codes") {
    const std::string dir = fresh_dir("cli_errors");
    const std::string conf = write_config(dir);

    // missing ground-state set names the limit command
    CHECK(run_cli("--config " + conf + " --out " + dir + "/out solve --eps 0.1",
                  dir + "/solve.log") == 3);
    CHECK(slurp(dir + "/solve.log").find("limit") != std::string::npos);

    // config parse error with position
    std::ofstream bad(dir + "/bad.conf");
    bad << "[grid\n";
    bad.close();
    CHECK(run_cli("--config " + dir + "/bad.conf limit", dir + "/bad.log") == 2);
    CHECK(slurp(dir + "/bad.log").find("bad.conf:1") != std::string::npos);

    // unknown verify experiment lists the valid names
    CHECK(run_cli("--config " + conf + " --out " + dir + "/out verify --which bogus",
                  dir + "/bogus.log") == 2);
    CHECK(slurp(dir + "/bogus.log").find("decay, recursion, directional, floor, convergence") !=
          std::string::npos);

    // SNLS_OUT provides the output directory when --out is absent
    CHECK(run_cli("--config " + dir + "/bad.conf limit", dir + "/env.log") == 2);
    {
        const std::string cmd = "SNLS_OUT=" + dir + "/envout " + SNLS_CLI_PATH + " --config " +
                                conf + " verify --which bogus >/dev/null 2>&1";
        std::system(cmd.c_str());
        CHECK(fs::exists(dir + "/envout"));
    }

    // non-decreasing sweep list
    CHECK(run_cli("--config " + conf + " --out " + dir + "/out sweep --eps 0.1,0.2",
                  dir + "/sweep.log") == 2);

    // eps above the box-adequacy threshold is refused with the threshold printed
    CHECK(run_cli("--config " + conf + " --out " + dir + "/out solve --eps 0.7",
                  dir + "/cap.log") == 2);
    CHECK(slurp(dir + "/cap.log").find("0.6") != std::string::npos);
}

TEST_CASE("cli: limit then solve, manifests complete") {
    const std::string dir = fresh_dir("cli_run");
    const std::string conf = write_config(dir);
    const std::string out = dir + "/out";

    REQUIRE(run_cli("--config " + conf + " --out " + out + " limit", dir + "/limit.log") == 0);
    CHECK(fs::exists(out + "/s0/s0_manifest.json"));
    CHECK(fs::exists(out + "/s0/energy_curve.csv"));
    check_manifest_covers(out + "/s0");
    const std::string curve = slurp(out + "/s0/energy_curve.csv");
    CHECK(curve.find("m,E") == 0);
    CHECK(slurp(dir + "/limit.log").find("E(1) = 1.333") != std::string::npos);

    REQUIRE(run_cli("--config " + conf + " --out " + out + " solve --eps 0.1",
                    dir + "/solve.log") == 0);
    const std::string sdir = out + "/solve_eps0.1";
    for (const char* f : {"record.json", "energy.json", "trace.csv", "final.snls",
                          "path_table.csv"})
        CHECK(fs::exists(sdir + "/" + f));
    check_manifest_covers(sdir);

    nlohmann::json energy;
    std::ifstream(sdir + "/energy.json") >> energy;
    for (const char* key : {"kinetic", "potential", "nonlinear", "penalty", "total"})
        CHECK(energy.contains(key));
    CHECK(energy.at("total").get<double>() ==
          doctest::Approx(energy.at("kinetic").get<double>() +
                          energy.at("potential").get<double>() -
                          energy.at("nonlinear").get<double>() +
                          energy.at("penalty").get<double>()));

    nlohmann::json rec;
    std::ifstream(sdir + "/record.json") >> rec;
    CHECK(rec.at("phi").get<double>() == 0.0);
    CHECK(rec.at("termination").get<std::string>() == "converged");
    CHECK(rec.at("dist_to_vmax").get<double>() <= 0.5);

    // the snapshot round-trips through the library loader
    const snls::Field fin = snls::load_snapshot(sdir + "/final.snls");
    CHECK(fin.grid->dim() == 1);
    CHECK(fin.all_finite());

    // degree command prints the integer
    REQUIRE(run_cli("--config " + conf + " --out " + out + " degree --samples 256",
                    dir + "/degree.log") == 0);
    const std::string deg = slurp(dir + "/degree.log");
    CHECK((deg.find("-1") != std::string::npos || deg.find("1") != std::string::npos));
    check_manifest_covers(out + "/degree");
}
