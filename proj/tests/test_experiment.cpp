#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qsched/experiment.hpp"

using namespace qsched;

namespace {

std::vector<std::string> lines_of(const std::string& body) {
    std::vector<std::string> lines;
    std::stringstream ss(body);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
}

} // namespace

TEST_CASE("config parsing and overrides") {
    auto cfg = parse_config(
        "# comment\n"
        "model = two_point\n"
        "j = 4\n"
        "delta = 2\n"
        "disciplines = fcfs, spst\n"
        "kappa = 0.5, 1\n"
        "jobs = 1000\n"
        "replications = 3\n"
        "seed = 17\n");
    CHECK(cfg.model == ArrivalModel::TwoPoint);
    CHECK(cfg.j_list == std::vector<Slot>{4});
    CHECK(cfg.delta_for(4) == 2);
    CHECK(cfg.disciplines.size() == 2);
    CHECK(cfg.kappas == std::vector<double>{0.5, 1.0});
    CHECK(cfg.jobs == 1000);
    CHECK(cfg.replications == 3);
    CHECK(cfg.seed == 17);

    // Later lines override earlier keys; flags reuse the same path.
    apply_config_line(cfg, "jobs=50");
    CHECK(cfg.jobs == 50);

    CHECK_THROWS_AS(apply_config_line(cfg, "frobnicate=1"), ConfigError);
    CHECK_THROWS_AS(apply_config_line(cfg, "jobs"), ConfigError);
    CHECK_THROWS_AS(apply_config_line(cfg, "jobs="), ConfigError);
    CHECK_THROWS_AS(apply_config_line(cfg, "jobs=abc"), ConfigError);
    CHECK_THROWS_AS(apply_config_line(cfg, "disciplines=edf"), ConfigError);
    CHECK_THROWS_AS(apply_config_line(cfg, "model=mmpp"), ConfigError);
}

TEST_CASE("config ranges and defaults") {
    auto cfg = parse_config("j_list = 2..5\n");
    CHECK(cfg.j_list == std::vector<Slot>{2, 3, 4, 5});
    CHECK(cfg.delta_for(5) == 2);  // floor(j/2) when unset
    CHECK(cfg.model == ArrivalModel::TwoPoint);
    CHECK(cfg.disciplines.size() == 7);

    CHECK_THROWS_AS(parse_config("j_list = 5..2\n"), ConfigError);
}

TEST_CASE("config validation rejects unusable setups") {
    CHECK_THROWS_AS(parse_config("model=batch\n").validate(), ConfigError);  // no sizes
    CHECK_THROWS_AS(parse_config("kappa=-1\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("j=4\ndelta=9\n").validate(), ConfigError);
    CHECK_NOTHROW(parse_config("model=batch\nsizes=1,3\n").validate());
}

TEST_CASE("experiment rows are deterministic and replayable") {
    auto cfg = parse_config(
        "model = two_point\nj = 4\ndisciplines = fcfs,spst\nkappa = 1\n"
        "jobs = 300\nreplications = 2\nseed = 5\n");
    auto a = run_experiment(cfg);
    auto b = run_experiment(cfg);
    CHECK(a.body() == b.body());

    auto lines = lines_of(a.body());
    REQUIRE(lines.size() == 1 + 2 * 2);  // header + disciplines x replications
    auto header = fields_of(lines[0]);
    auto row = fields_of(lines[1]);
    REQUIRE(header.size() == row.size());

    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        FAIL("missing column ", name);
        return std::size_t{0};
    };
    CHECK(row[col("model")] == "two_point");
    CHECK(row[col("j")] == "4");
    CHECK(row[col("delta")] == "2");
    CHECK(row[col("discipline")] == "fcfs");
    CHECK(row[col("generator")] == "mt19937_64");
    CHECK(row[col("censored")] == "0");
    CHECK(row[col("completed")] == "300");
    CHECK(std::stod(row[col("mean_reward")]) > 0.0);
    CHECK(std::stod(row[col("renewal_estimate")]) > 0.0);
    CHECK(std::stod(row[col("priority_fraction")]) > 0.0);

    // The same trace backs every discipline within a replication.
    auto seed_col = col("seed");
    CHECK(fields_of(lines[1])[seed_col] == fields_of(lines[3])[seed_col]);
}

TEST_CASE("batch experiments report total rewards") {
    auto cfg = parse_config(
        "model = batch\nsizes = 1,3\ndisciplines = sjf\nkappa = 1\n"
        "replications = 1\n");
    auto csv = run_experiment(cfg);
    auto lines = lines_of(csv.body());
    REQUIRE(lines.size() == 2);
    auto header = fields_of(lines[0]);
    auto row = fields_of(lines[1]);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        FAIL("missing column ", name);
        return std::size_t{0};
    };
    CHECK(row[col("sizes")] == "1;3");
    CHECK(std::stod(row[col("total_reward")]) == doctest::Approx(0.3861948110));
    // No renewal cycle and no priority analytics for a single batch.
    CHECK(row[col("renewal_estimate")] == "");
    CHECK(row[col("priority_fraction")] == "");
}

TEST_CASE("bernoulli experiments run stable and censor-free") {
    auto cfg = parse_config(
        "model = bernoulli\nj = 4\ndisciplines = spst\nkappa = 1\n"
        "jobs = 500\nreplications = 1\nseed = 9\n");
    auto csv = run_experiment(cfg);
    auto lines = lines_of(csv.body());
    REQUIRE(lines.size() == 2);
    auto row = fields_of(lines[1]);
    CHECK(row[3] == csv_double(0.2));  // arrival_p column
    CHECK(row[12] == "0");             // censored
}

TEST_CASE("two-point paper point values at reduced scale") {
    auto cfg = parse_config(
        "model = two_point\nj = 2\ndelta = 1\ndisciplines = fcfs\nkappa = 1\n"
        "jobs = 20000\nreplications = 1\nseed = 2\n");
    auto lines = lines_of(run_experiment(cfg).body());
    auto mean = std::stod(fields_of(lines[1])[15]);
    CHECK(mean == doctest::Approx(0.1353).epsilon(2e-3));
}

TEST_CASE("figure datasets have the advertised shape") {
    auto csv = reproduce_figure(FigureId::Fig2, 1, 2000, 2);
    auto lines = lines_of(csv.body());
    // 11 job sizes x 6 disciplines + header.
    REQUIRE(lines.size() == 1 + 11 * 6);
    auto header = fields_of(lines[0]);
    CHECK(header.front() == "figure");
    auto row = fields_of(lines[1]);
    CHECK(row[0] == "fig2");
    CHECK(row[1] == "two_point");

    auto repeat = reproduce_figure(FigureId::Fig2, 1, 2000, 2);
    CHECK(csv.body() == repeat.body());

    auto kappa_fig = reproduce_figure(FigureId::Fig3b, 1, 2000, 2);
    auto klines = lines_of(kappa_fig.body());
    REQUIRE(klines.size() == 1 + 6 * 9);  // 6 kappas x 9 disciplines

    auto bern = reproduce_figure(FigureId::Fig4a, 1, 2000, 2);
    CHECK(fields_of(lines_of(bern.body())[1])[1] == "bernoulli");
}

TEST_CASE("figure ids parse") {
    CHECK(parse_figure_id("fig1").has_value());
    CHECK(parse_figure_id("fig3b").has_value());
    CHECK_FALSE(parse_figure_id("fig9").has_value());
    CHECK_FALSE(parse_figure_id("").has_value());
}

TEST_CASE("gnuplot scripts reference the dataset") {
    auto script = gnuplot_script(FigureId::Fig2, "fig2.csv");
    CHECK(script.find("fig2.csv") != std::string::npos);
    CHECK(script.find("plot for") != std::string::npos);
    CHECK(script.find("spst") != std::string::npos);
}

TEST_CASE("batch statistics") {
    auto one = batch_stats({2.0});
    CHECK(one.mean == 2.0);
    CHECK(one.ci_halfwidth == 0.0);

    auto spread = batch_stats({1.0, 2.0, 3.0});
    CHECK(spread.mean == doctest::Approx(2.0));
    // sd = 1, t(2 df) = 4.303 -> halfwidth 4.303/sqrt(3)
    CHECK(spread.ci_halfwidth == doctest::Approx(4.303 / std::sqrt(3.0)).epsilon(1e-6));
}
