#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsched/csv.hpp"
#include "qsched/disciplines.hpp"
#include "qsched/time.hpp"

namespace qsched {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ArrivalModel { TwoPoint, Bernoulli, Batch };

// Flat experiment description. Loadable from a key=value file ('#' starts
// a comment); unknown keys are rejected, and command-line flags override
// file values. `j_list` drives sweeps; single runs use one j.
struct ExperimentConfig {
    ArrivalModel model = ArrivalModel::TwoPoint;
    std::vector<Slot> j_list = {4};
    std::optional<Slot> delta;        // default floor(j/2) per point
    std::vector<Slot> batch_sizes;    // batch model only
    std::vector<DisciplineSpec> disciplines = all_disciplines();
    std::vector<double> kappas = {1.0};
    std::size_t jobs = 100000;        // two_point: jobs per run
    std::optional<Slot> horizon;      // bernoulli: arrival slots (default (j+1)*jobs)
    std::size_t replications = 10;
    std::uint64_t seed = 1;
    std::string out;

    Slot delta_for(Slot j) const { return delta ? *delta : j / 2; }
    void validate() const;  // throws ConfigError
};

// key=value text, one key per line. Later assignments win, so CLI overrides
// can be applied by appending. Throws ConfigError on unknown keys or
// malformed values.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& line);

// One CSV row per (j, discipline, kappa, replication): long-run average,
// renewal estimate, busy-period count, priority-job fraction, censored
// count, and full replay metadata. Deterministic given the config.
CsvWriter run_experiment(const ExperimentConfig& config);

enum class FigureId { Fig1, Fig2, Fig3a, Fig3b, Fig4a, Fig4b };
std::optional<FigureId> parse_figure_id(const std::string& name);

// Replication-averaged sweep datasets: job-size sweeps at kappa=1 (fig1,
// fig2, fig3a, fig4a) and kappa sweeps at j=4 (fig3b, fig4b); the fig4
// pair uses Bernoulli arrivals. Columns: figure, model, j, delta, kappa,
// discipline, mean_reward, log10_mean_reward, ci_halfwidth, jobs,
// replications, seed. `jobs`/`replications` default to 1000000 x 10.
CsvWriter reproduce_figure(FigureId id, std::uint64_t seed,
                           std::size_t jobs = 1000000, std::size_t replications = 10);

// gnuplot script plotting log10(mean_reward) from a figure CSV.
std::string gnuplot_script(FigureId id, const std::string& csv_path);

// Replication statistics: mean and a t-based 95% confidence halfwidth.
struct BatchStats {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
};
BatchStats batch_stats(const std::vector<double>& values);

} // namespace qsched
