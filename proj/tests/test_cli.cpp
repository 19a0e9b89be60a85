#include "catch_amalgamated.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinmarket/csv.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "spinmarket_test_cli";

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result cli(const std::string& args) {
    fs::create_directories(kRoot);
    const auto out = kRoot / "stdout.txt", err = kRoot / "stderr.txt";
    const std::string cmd =
        std::string(SPINMARKET_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path fresh(const std::string& name) {
    const auto p = kRoot / name;
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("simulate writes the requested number of rows", "[cli]") {
    const auto d = fresh("sim");
    const auto r = cli("simulate --size 16 --temp 10 --alpha 4 --steps 100 --seed 1 --out " + d.string());
    REQUIRE(r.code == 0);
    CHECK(fs::exists(d / "run.meta"));
    const auto t = spinmarket::csv::read(d / "series.csv");
    CHECK(t.rows.size() == 100);
    for (const auto& row : t.rows) CHECK(row[2] == "10");
}

TEST_CASE("flag validation exits with 2 and names the flag", "[cli]") {
    struct Case {
        std::string args;
        std::string flag;
    };
    const std::vector<Case> cases = {
        {"simulate --temp -1 --out x", "--temp"},
        {"simulate --temp 0 --out x", "--temp"},
        {"simulate --size 1 --out x", "--size"},
        {"simulate --alpha -2 --out x", "--alpha"},
        {"simulate --steps 0 --out x", "--steps"},
        {"simulate --record-every 0 --out x", "--record-every"},
        {"simulate --init sideways --out x", "--init"},
        {"simulate --preset nope --out x", "--preset"},
        {"anneal --t-end -0.1 --out x", "--t-end"},
        {"anneal --ramp cubic --out x", "--ramp"},
        {"anneal --steps 100 --therm 100 --out x", "--steps"},
        {"anneal --plateaus 1 --out x", "--plateaus"},
        {"ensemble --replicas 0 --out x", "--replicas"},
    };
    for (const auto& c : cases) {
        INFO(c.args << " -> " << c.flag);
        const auto r = cli(c.args);
        CHECK(r.code == 2);
        CHECK(r.err.find(c.flag) != std::string::npos);
    }
    CHECK(cli("simulate --bogus 3 --out x").code == 2);
    CHECK(cli("simulate --size 16").code == 2);
    CHECK(cli("").code == 2);
    CHECK_FALSE(fs::exists("x"));
}

TEST_CASE("re-running with identical flags gives byte-identical CSVs", "[cli]") {
    const auto a = fresh("det_a"), b = fresh("det_b");
    const std::string flags = "simulate --size 24 --temp 2.2 --alpha 4 --steps 400 --therm 200 --seed 3 "
                              "--snapshot-every 40 --no-plots --out ";
    REQUIRE(cli(flags + a.string()).code == 0);
    REQUIRE(cli(flags + b.string()).code == 0);
    for (const char* f : {"run.meta", "series.csv", "clusters.csv", "powerlaw.csv", "stp.csv", "stats.csv"})
        CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(fs::exists(a / "msf.svg"));
}

TEST_CASE("anneal with the beta ramp records 1/linear temperatures", "[cli]") {
    const auto d = fresh("beta");
    REQUIRE(cli("anneal --size 8 --steps 1100 --therm 100 --ramp beta --no-plots --out " + d.string()).code == 0);
    const auto t = spinmarket::csv::read(d / "series.csv");
    REQUIRE(t.rows.size() == 1000);
    for (const auto& row : t.rows) {
        const double k = std::stod(row[1]);
        const double expect = 1.0 / (0.1 + k / 1000.0 * (10.0 - 0.1));
        REQUIRE(std::stod(row[2]) == Catch::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("anneal smoke run with the ci profile", "[cli][slow]") {
    const auto d = fresh("ci");
    const auto r = cli("anneal --profile ci --out " + d.string());
    REQUIRE(r.code == 0);
    CHECK(spinmarket::csv::read(d / "series.csv").rows.size() == 175'000);
    CHECK(fs::exists(d / "msf.svg"));
    CHECK(fs::file_size(d / "msf.svg") < 2'000'000);
    CHECK(fs::file_size(d / "returns.svg") < 2'000'000);
    CHECK(slurp(d / "run.meta").find("side=64") != std::string::npos);
}

TEST_CASE("analyze subcommand", "[cli]") {
    const auto d = fresh("an");
    REQUIRE(cli("simulate --size 16 --steps 300 --therm 100 --snapshot-every 50 --out " + d.string()).code == 0);
    const std::string first = slurp(d / "stp.csv") + slurp(d / "stats.csv") + slurp(d / "clusters.csv");
    fs::remove(d / "stp.csv");
    REQUIRE(cli("analyze " + d.string()).code == 0);
    REQUIRE(cli("analyze " + d.string()).code == 0);
    CHECK(slurp(d / "stp.csv") + slurp(d / "stats.csv") + slurp(d / "clusters.csv") == first);

    const auto empty = fresh("an_empty");
    fs::create_directories(empty);
    const auto r = cli("analyze " + empty.string());
    CHECK(r.code == 1);
    CHECK(r.err.find("run.meta") != std::string::npos);
    CHECK(cli("analyze " + (kRoot / "does_not_exist").string()).code == 1);
}

TEST_CASE("stop and resume through the CLI", "[cli]") {
    const auto whole = fresh("res_whole"), part = fresh("res_part");
    const std::string flags = "simulate --size 16 --steps 500 --therm 100 --snapshot-every 50 --checkpoint-every 100 ";
    REQUIRE(cli(flags + "--out " + whole.string()).code == 0);
    const auto r = cli(flags + "--stop-after 200 --out " + part.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.find("resume") != std::string::npos);
    REQUIRE(cli("resume " + part.string()).code == 0);
    for (const char* f : {"series.csv", "clusters.csv", "stp.csv", "stats.csv", "run.meta"})
        CHECK(slurp(whole / f) == slurp(part / f));
}

TEST_CASE("ensemble, presets and bench subcommands", "[cli]") {
    const auto d = fresh("ens");
    REQUIRE(cli("ensemble --replicas 2 --size 12 --steps 100 --therm 50 --snapshot-every 20 --no-plots --out " +
                d.string())
                .code == 0);
    CHECK(fs::exists(d / "replica_1" / "stp.csv"));
    CHECK(fs::exists(d / "ensemble_stp.csv"));

    const auto p = cli("presets");
    CHECK(p.code == 0);
    CHECK(p.out.find("a4-critical") != std::string::npos);

    const auto b = cli("bench --size 32 --steps 50");
    CHECK(b.code == 0);
    CHECK(b.out.find("attempts_per_second=") != std::string::npos);
    CHECK(b.out.find("identical=yes") != std::string::npos);
}
