#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "qsched/trace.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* bin = std::getenv("QSCHED_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "QSCHED_BIN must point at the qsched binary");
    return bin;
}

int run_cli(const std::string& args) {
    std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qsched_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("trace-dump emits loadable traces") {
    TempDir tmp;
    auto out = tmp.path / "trace.txt";
    CHECK(run_cli("trace-dump --model two_point --j 4 --delta 2 --jobs 50 --seed 3 --out " +
                  out.string()) == 0);
    auto trace = qsched::Trace::load(out.string());
    CHECK(trace.size() == 50);
    CHECK(trace[0].time == 0);

    auto batch = tmp.path / "batch.txt";
    CHECK(run_cli("trace-dump --model batch --sizes 1,3,2 --out " + batch.string()) == 0);
    CHECK(slurp(batch) == "0,1\n0,3\n0,2\n");

    CHECK(run_cli("trace-dump --model mmpp") == 2);
}

TEST_CASE("simulate writes deterministic csv") {
    TempDir tmp;
    auto cfg = tmp.path / "exp.cfg";
    {
        std::ofstream out(cfg);
        out << "model = two_point\nj = 3\ndelta = 1\n"
            << "disciplines = fcfs,spst\nkappa = 1\njobs = 200\n"
            << "replications = 2\nseed = 11\n";
    }
    auto out_a = tmp.path / "a.csv";
    auto out_b = tmp.path / "b.csv";
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out_a.string()) == 0);
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + out_b.string()) == 0);
    CHECK(slurp(out_a) == slurp(out_b));
    CHECK(slurp(out_a).find("two_point,3,1,") != std::string::npos);

    // Flag overrides win over file keys.
    auto out_c = tmp.path / "c.csv";
    CHECK(run_cli("simulate --config " + cfg.string() + " --jobs 100 --out " +
                  out_c.string()) == 0);
    CHECK(slurp(out_c).find(",100,") != std::string::npos);
}

TEST_CASE("sweep covers a j range") {
    TempDir tmp;
    auto out = tmp.path / "sweep.csv";
    CHECK(run_cli("sweep --model two_point --j-list 2..4 --disciplines fcfs "
                  "--kappa 1 --jobs 100 --replications 1 --seed 1 --out " +
                  out.string()) == 0);
    auto body = slurp(out);
    CHECK(body.find("two_point,2,") != std::string::npos);
    CHECK(body.find("two_point,3,") != std::string::npos);
    CHECK(body.find("two_point,4,") != std::string::npos);
}

TEST_CASE("usage and config errors exit with 2") {
    TempDir tmp;
    CHECK(run_cli("") == 2);
    CHECK(run_cli("simulate --model nonsense") == 2);
    CHECK(run_cli("simulate --config " + (tmp.path / "missing.cfg").string()) == 2);
    CHECK(run_cli("figures fig9") == 2);
    CHECK(run_cli("nonsense-subcommand") == 2);
}

TEST_CASE("verify batch suite passes and writes reports") {
    TempDir tmp;
    auto prefix = (tmp.path / "verify").string();
    CHECK(run_cli("verify batch --instances 20 --seed 4 --out " + prefix) == 0);
    auto summary = slurp(prefix + "_summary.csv");
    CHECK(summary.find("batch,") != std::string::npos);
    CHECK(summary.find(",1") != std::string::npos);  // passed flag
    CHECK_FALSE(fs::exists(prefix + "_violations.csv"));
}

TEST_CASE("verify theorem and lemma suites pass at desk scale") {
    TempDir tmp;
    auto prefix = (tmp.path / "verify").string();
    CHECK(run_cli("verify theorem --j 4 --max-gaps 8 --out " + prefix) == 0);
    CHECK(run_cli("verify lemmas --j 4 6 --max-gaps 8 --out " + prefix) == 0);
    CHECK(run_cli("verify all --j 4 --max-gaps 6 --instances 10 --out " + prefix) == 0);
}

TEST_CASE("verify rejects out-of-range parameters with 2") {
    CHECK(run_cli("verify theorem --max-gaps 40") == 2);
    CHECK(run_cli("verify nonsense") == 2);
    CHECK(run_cli("verify batch --n-max 12") == 2);
}

TEST_CASE("verify explore emits kappa sweep data") {
    TempDir tmp;
    auto prefix = (tmp.path / "explore").string();
    CHECK(run_cli("verify theorem --j 4 --max-gaps 8 --kappa 0.2 0.7 1.0 --explore "
                  "--out " + prefix) == 0);
    CHECK(fs::exists(prefix + "_explore_j4.csv"));
    auto body = slurp(prefix + "_explore_j4.csv");
    CHECK(body.find("kappa") != std::string::npos);
}

TEST_CASE("figures command emits csv and gnuplot script") {
    TempDir tmp;
    auto out = tmp.path / "fig1.csv";
    auto gp = tmp.path / "fig1.gp";
    CHECK(run_cli("figures fig1 --jobs 300 --replications 2 --seed 6 --out " +
                  out.string() + " --gnuplot " + gp.string()) == 0);
    auto body = slurp(out);
    CHECK(body.find("fig1,two_point,") != std::string::npos);
    CHECK(slurp(gp).find(out.string()) != std::string::npos);
}
