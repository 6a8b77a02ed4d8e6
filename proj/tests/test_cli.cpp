#include "towerplan/io.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cstdlib>
#include <string>
#include <sys/wait.h>

using namespace towerplan;
using towerplan::testing::TempDir;

namespace {

const std::string kCli = TOWERPLAN_CLI_PATH;

int run(const std::string& command) {
    const int status = std::system((command + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Small world so the full pipeline stays fast.
const char* kSmallConfig =
    "grid.n = 16\n"
    "scenario.seed = 7\n"
    "scenario.initial_sites = 2\n"
    "scenario.sample_count = 200\n"
    "train.epochs = 60\n"
    "plan.budget_total = 200000\n"
    "plan.cost_per_site = 100000\n"
    "plan.tau_dbm = -100\n";

std::string quoted(const std::string& s) { return "'" + s + "'"; }

} // namespace

TEST_CASE("usage and exit codes") {
    CHECK(run(kCli) == 1);                    // no arguments: usage error
    CHECK(run(kCli + " --help") == 0);        // help is a success
    CHECK(run(kCli + " frobnicate") == 1);    // unknown subcommand
    CHECK(run(kCli + " generate --config /nonexistent/nowhere.cfg") == 2); // data error
}

TEST_CASE("bad config contents exit with the data error code") {
    TempDir dir;
    write_text_file(dir.file("bad.cfg"), "no.such.key = 1\n");
    CHECK(run(kCli + " generate --config " + quoted(dir.file("bad.cfg")) + " --out " +
              quoted(dir.path())) == 2);
}

TEST_CASE("full pipeline produces every artifact and respects the budget") {
    TempDir dir;
    const std::string cfg = dir.file("run.cfg");
    write_text_file(cfg, kSmallConfig);
    const std::string common = " --config " + quoted(cfg) + " --out " + quoted(dir.path());

    REQUIRE(run(kCli + " generate" + common) == 0);
    CHECK(!read_text_file(dir.file("scenario.txt")).empty());
    CHECK(!read_text_file(dir.file("sites.txt")).empty());
    CHECK(!read_text_file(dir.file("measurements.csv")).empty());

    REQUIRE(run(kCli + " train" + common) == 0);
    CHECK(read_text_file(dir.file("model.txt")).rfind("CPMODEL 1\n", 0) == 0);

    REQUIRE(run(kCli + " plan" + common) == 0);
    const PlanCsv plan = load_plan_csv(dir.file("plan.csv"));
    CHECK(plan.sites_added <= 2); // floor(200000 / 100000)
    CHECK(!read_text_file(dir.file("final_sites.txt")).empty());

    REQUIRE(run(kCli + " evaluate" + common) == 0);
    const std::string metrics = read_text_file(dir.file("metrics.txt"));
    CHECK(metrics.find("initial_oracle_covered_fraction=") != std::string::npos);
    CHECK(metrics.find("final_oracle_covered_fraction=") != std::string::npos);
    CHECK(metrics.find("sites_added=" + std::to_string(plan.sites_added)) != std::string::npos);

    REQUIRE(run(kCli + " render" + common) == 0);
    const std::string pgm = read_text_file(dir.file("coverage.pgm"));
    CHECK(pgm.rfind("P5\n16 16\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n16 16\n255\n").size() + 16 * 16);

    SUBCASE("rendering the model view differs from the oracle view") {
        const std::string oracle_view = pgm;
        REQUIRE(run(kCli + " render" + common + " --model " +
                    quoted(dir.file("model.txt"))) == 0);
        const std::string model_view = read_text_file(dir.file("coverage.pgm"));
        CHECK(model_view.size() == oracle_view.size());
        CHECK(model_view != oracle_view); // a 60-epoch model is not the oracle
    }
}

TEST_CASE("generate is deterministic and the seed flag overrides the config") {
    TempDir a;
    TempDir b;
    TempDir c;
    for (TempDir* dir : {&a, &b, &c}) {
        const std::string cfg = dir->file("run.cfg");
        write_text_file(cfg, kSmallConfig);
    }
    const auto gen = [&](TempDir& dir, const std::string& extra) {
        return run(kCli + " generate --config " + quoted(dir.file("run.cfg")) + " --out " +
                   quoted(dir.path()) + extra);
    };
    REQUIRE(gen(a, "") == 0);
    REQUIRE(gen(b, "") == 0);
    REQUIRE(gen(c, " --seed 8") == 0);

    for (const char* name : {"scenario.txt", "sites.txt", "measurements.csv"}) {
        CHECK(read_text_file(a.file(name)) == read_text_file(b.file(name)));
        CHECK(read_text_file(a.file(name)) != read_text_file(c.file(name)));
    }
}
