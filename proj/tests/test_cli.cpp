// End-to-end checks of the command line surface: subcommands, file outputs,
// and the exit-code contract (0 ok, 1 physics failure, 2 config error).
// Requires the CDSIM_CLI environment variable (set by ctest).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* env = std::getenv("CDSIM_CLI");
    return env ? env : "";
}

int run(const std::string& args) {
    const int status = std::system((cli_path() + " " + args).c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() / "cdsim_cli_test";
        fs::create_directories(dir);
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

const char* kQuickConfig = R"({
    "protocol": {"kind": "p1", "h": 1.0, "omega": 0.1},
    "periods": 2, "transient_periods": 1,
    "steps_per_period": 200, "sample_stride": 20,
    "tolerance": 1e-5, "max_refinements": 3
})";

} // namespace

TEST_SUITE("cli") {

TEST_CASE("subcommands run and respect the exit-code contract") {
    if (cli_path().empty()) {
        MESSAGE("CDSIM_CLI not set; skipping CLI end-to-end checks");
        return;
    }
    TempDir tmp;
    const std::string cfg = tmp.file("config.json");
    write_file(cfg, kQuickConfig);

    SUBCASE("simulate produces a CSV") {
        const std::string out = tmp.file("traj.csv");
        CHECK(run("simulate --config " + cfg + " --out " + out + " 2>/dev/null") == 0);
        std::ifstream in(out);
        std::string first;
        std::getline(in, first);
        CHECK(first.rfind("# cdsim", 0) == 0);
    }

    SUBCASE("simulate --cd runs") {
        CHECK(run("simulate --config " + cfg + " --cd --out " + tmp.file("cd.csv") +
                  " 2>/dev/null") == 0);
    }

    SUBCASE("scan and expand produce CSVs") {
        CHECK(run("scan --config " + cfg + " --axis omega --grid 0.1,0.2 --out " +
                  tmp.file("scan.csv") + " --jobs 2 2>/dev/null") == 0);
        CHECK(run("expand --config " + cfg + " --order 1 --out " + tmp.file("exp.csv") +
                  " 2>/dev/null") == 0);
    }

    SUBCASE("config errors exit with 2") {
        CHECK(run("simulate --config /nonexistent.json --out " + tmp.file("x.csv") +
                  " 2>/dev/null") == 2);
        write_file(tmp.file("bad.json"), "{\"nonsense\": 1}");
        CHECK(run("simulate --config " + tmp.file("bad.json") + " --out " +
                  tmp.file("x.csv") + " 2>/dev/null") == 2);
        CHECK(run("scan --config " + cfg + " --axis sideways --grid 1 --out " +
                  tmp.file("x.csv") + " 2>/dev/null") == 2);
        CHECK(run("validate --inject bogus 2>/dev/null") == 2);
        CHECK(run("frobnicate 2>/dev/null") == 2);
    }

    SUBCASE("validate exit codes: clean 0, injections 1") {
        CHECK(run("validate --quick >/dev/null") == 0);
        CHECK(run("validate --quick --json >/dev/null") == 0);
        CHECK(run("validate --quick --inject kms-sign >/dev/null") == 1);
        CHECK(run("validate --quick --inject gauge-sign >/dev/null") == 1);
        CHECK(run("validate --quick --inject delta-sign >/dev/null") == 1);
    }
}

} // TEST_SUITE
