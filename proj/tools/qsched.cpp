// qsched: discrete-time single-server queueing experiments and exhaustive
// verification of the busy-period structure behind the spst discipline.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsched/csv.hpp"
#include "qsched/experiment.hpp"
#include "qsched/oracles.hpp"
#include "qsched/trace.hpp"
#include "qsched/workloads.hpp"

namespace {

using namespace qsched;

void emit(const CsvWriter& csv, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << csv.body();
    else
        csv.save(out);
}

struct ExperimentFlags {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value pairs from flags

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        auto forward = [this](const std::string& key) {
            return [this, key](const std::string& v) { overrides.push_back(key + "=" + v); };
        };
        cmd->add_option_function<std::string>("--model", forward("model"),
                                              "two_point | bernoulli | batch");
        cmd->add_option_function<std::string>("--j", forward("j"), "job size");
        cmd->add_option_function<std::string>("--j-list", forward("j_list"),
                                              "job sizes, e.g. 2..12 or 4,6,8");
        cmd->add_option_function<std::string>("--delta", forward("delta"),
                                              "two-point gap half-spread");
        cmd->add_option_function<std::string>("--sizes", forward("sizes"),
                                              "batch job sizes");
        cmd->add_option_function<std::string>("--disciplines", forward("disciplines"),
                                              "comma list, e.g. fcfs,spst,spst-r");
        cmd->add_option_function<std::string>("--kappa", forward("kappa"),
                                              "reward decay rates");
        cmd->add_option_function<std::string>("--jobs", forward("jobs"),
                                              "jobs per replication");
        cmd->add_option_function<std::string>("--horizon", forward("horizon"),
                                              "bernoulli arrival window in slots");
        cmd->add_option_function<std::string>("--replications", forward("replications"),
                                              "independent replications");
        cmd->add_option_function<std::string>("--seed", forward("seed"), "base seed");
        cmd->add_option_function<std::string>("--out", forward("out"),
                                              "output CSV path (default stdout)");
    }

    ExperimentConfig build() const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        for (const auto& line : overrides) apply_config_line(cfg, line);
        return cfg;
    }
};

int run_simulate(const ExperimentFlags& flags) {
    ExperimentConfig cfg = flags.build();
    emit(run_experiment(cfg), cfg.out);
    return 0;
}

struct VerifyFlags {
    std::string suite;
    std::vector<Slot> j_values = {4, 6, 8};
    std::optional<Slot> delta;
    std::vector<double> kappas = {std::numbers::ln2, 1.0, 2.0};
    Slot max_gaps = 12;
    std::size_t instances = 200;
    std::size_t n_max = 7;
    Slot size_min = 1;
    Slot size_max = 10;
    std::uint64_t seed = 1;
    std::string out_prefix = "verify";
    bool explore = false;
};

void write_reports(const std::string& prefix,
                   const std::vector<std::pair<std::string, VerificationReport>>& reports) {
    CsvWriter summary({"suite", "cases_checked", "truncated", "violations", "passed"});
    CsvWriter violations({"suite", "rule", "input", "expected", "observed"});
    for (const auto& [name, report] : reports) {
        summary.add_row({name, std::to_string(report.cases_checked),
                         std::to_string(report.truncated),
                         std::to_string(report.violations.size()),
                         report.passed() ? "1" : "0"});
        for (const auto& v : report.violations)
            violations.add_row({name, v.rule, v.input, v.expected, v.observed});
    }
    summary.save(prefix + "_summary.csv");
    if (violations.rows() > 0) violations.save(prefix + "_violations.csv");
}

int run_verify(const VerifyFlags& flags) {
    if (flags.suite != "batch" && flags.suite != "theorem" && flags.suite != "lemmas" &&
        flags.suite != "all") {
        std::cerr << "verify: unknown suite '" << flags.suite
                  << "' (expected batch|theorem|lemmas|all)\n";
        return 2;
    }

    std::vector<std::pair<std::string, VerificationReport>> reports;
    if (flags.suite == "batch" || flags.suite == "all") {
        reports.emplace_back("batch",
                             verify_batch_theorem(flags.n_max, flags.size_min,
                                                  flags.size_max, flags.kappas,
                                                  flags.instances, flags.seed));
    }
    for (Slot j : flags.j_values) {
        Slot delta = flags.delta.value_or(j / 2);
        std::string tag = "_j" + std::to_string(j);
        if (flags.suite == "theorem" || flags.suite == "all") {
            reports.emplace_back("theorem" + tag,
                                 verify_spst_vs_fcfs(j, delta, flags.kappas,
                                                     flags.max_gaps));
        }
        if (flags.suite == "lemmas" || flags.suite == "all") {
            reports.emplace_back("lemmas" + tag,
                                 verify_lemmas(j, delta, flags.max_gaps));
        }
        if (flags.explore && (flags.suite == "theorem" || flags.suite == "all")) {
            auto sweep = spst_fcfs_kappa_sweep(j, delta, flags.kappas, flags.max_gaps);
            CsvWriter csv({"j", "delta", "kappa", "cases", "violations"});
            std::optional<double> min_violating;
            for (const auto& p : sweep) {
                csv.add_row({std::to_string(j), std::to_string(delta),
                             csv_double(p.kappa), std::to_string(p.cases),
                             std::to_string(p.violations)});
                if (p.violations > 0 && (!min_violating || p.kappa < *min_violating))
                    min_violating = p.kappa;
            }
            csv.save(flags.out_prefix + "_explore" + tag + ".csv");
            if (min_violating)
                std::cout << "explore j=" << j << ": smallest kappa with a dominance "
                          << "violation: " << csv_double(*min_violating) << "\n";
            else
                std::cout << "explore j=" << j
                          << ": no dominance violation on the kappa grid\n";
        }
    }

    write_reports(flags.out_prefix, reports);
    bool all_passed = true;
    for (const auto& [name, report] : reports) {
        std::cout << name << ": " << report.cases_checked << " cases, "
                  << report.truncated << " truncated, " << report.violations.size()
                  << " violations -> " << (report.passed() ? "PASS" : "FAIL") << "\n";
        all_passed = all_passed && report.passed();
    }
    return all_passed ? 0 : 1;
}

struct FigureFlags {
    std::string id;
    std::uint64_t seed = 1;
    std::size_t jobs = 1000000;
    std::size_t replications = 10;
    std::string out;
    std::string gnuplot_path;
};

int run_figures(const FigureFlags& flags) {
    auto id = parse_figure_id(flags.id);
    if (!id) {
        std::cerr << "figures: unknown id '" << flags.id
                  << "' (expected fig1|fig2|fig3a|fig3b|fig4a|fig4b)\n";
        return 2;
    }
    CsvWriter csv = reproduce_figure(*id, flags.seed, flags.jobs, flags.replications);
    emit(csv, flags.out);
    if (!flags.gnuplot_path.empty()) {
        std::ofstream gp(flags.gnuplot_path);
        if (!gp.good()) {
            std::cerr << "figures: cannot write " << flags.gnuplot_path << "\n";
            return 2;
        }
        gp << gnuplot_script(*id, flags.out.empty() ? "figure.csv" : flags.out);
    }
    return 0;
}

struct TraceDumpFlags {
    std::string model = "two_point";
    Slot j = 4;
    std::optional<Slot> delta;
    std::size_t jobs = 100;
    std::optional<Slot> horizon;
    std::string sizes;
    std::uint64_t seed = 1;
    std::string out;
};

int run_trace_dump(const TraceDumpFlags& flags) {
    Trace trace;
    if (flags.model == "two_point") {
        TwoPointModel model(flags.j, flags.delta.value_or(flags.j / 2));
        trace = two_point_trace(model, flags.jobs, flags.seed);
    } else if (flags.model == "bernoulli") {
        BernoulliModel model(flags.j);
        Slot window = flags.horizon.value_or((flags.j + 1) *
                                             static_cast<Slot>(flags.jobs));
        trace = bernoulli_trace(model, window, flags.seed);
    } else if (flags.model == "batch") {
        ExperimentConfig probe;
        apply_config_line(probe, "sizes=" + flags.sizes);
        trace = batch_trace(probe.batch_sizes);
    } else {
        std::cerr << "trace-dump: unknown model '" << flags.model << "'\n";
        return 2;
    }
    if (flags.out.empty() || flags.out == "-")
        trace.write(std::cout);
    else
        trace.save(flags.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-time single-server queue simulator and verifier"};
    app.require_subcommand(1);

    ExperimentFlags simulate_flags;
    auto* simulate = app.add_subcommand("simulate", "run one experiment point");
    simulate_flags.add_to(simulate);

    ExperimentFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_flags.add_to(sweep);

    FigureFlags figure_flags;
    auto* figures = app.add_subcommand("figures", "reproduce a figure dataset");
    figures->add_option("id", figure_flags.id, "fig1|fig2|fig3a|fig3b|fig4a|fig4b")
        ->required();
    figures->add_option("--seed", figure_flags.seed, "base seed");
    figures->add_option("--jobs", figure_flags.jobs, "jobs per replication");
    figures->add_option("--replications", figure_flags.replications,
                        "independent replications");
    figures->add_option("--out", figure_flags.out, "output CSV path (default stdout)");
    figures->add_option("--gnuplot", figure_flags.gnuplot_path,
                        "also write a gnuplot script here");

    VerifyFlags verify_flags;
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("suite", verify_flags.suite, "batch|theorem|lemmas|all")
        ->required();
    verify->add_option("--j", verify_flags.j_values, "job sizes to enumerate");
    verify->add_option("--delta", verify_flags.delta,
                       "gap half-spread (default floor(j/2))");
    verify->add_option("--kappa", verify_flags.kappas, "reward decay rates");
    verify->add_option("--max-gaps", verify_flags.max_gaps,
                       "enumeration depth (<= 14)");
    verify->add_option("--instances", verify_flags.instances, "random batch instances");
    verify->add_option("--n-max", verify_flags.n_max, "max batch size (<= 8)");
    verify->add_option("--size-min", verify_flags.size_min, "min batch job size");
    verify->add_option("--size-max", verify_flags.size_max, "max batch job size");
    verify->add_option("--seed", verify_flags.seed, "base seed");
    verify->add_option("--out", verify_flags.out_prefix, "report CSV path prefix");
    verify->add_flag("--explore", verify_flags.explore,
                     "also sweep sub-threshold kappas, data only");

    TraceDumpFlags trace_flags;
    auto* trace_dump = app.add_subcommand("trace-dump", "generate and print a trace");
    trace_dump->add_option("--model", trace_flags.model, "two_point|bernoulli|batch");
    trace_dump->add_option("--j", trace_flags.j, "job size");
    trace_dump->add_option("--delta", trace_flags.delta, "two-point gap half-spread");
    trace_dump->add_option("--jobs", trace_flags.jobs, "jobs (two_point)");
    trace_dump->add_option("--horizon", trace_flags.horizon, "slots (bernoulli)");
    trace_dump->add_option("--sizes", trace_flags.sizes, "batch sizes, e.g. 1,3,2");
    trace_dump->add_option("--seed", trace_flags.seed, "seed");
    trace_dump->add_option("--out", trace_flags.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(simulate_flags);
        if (sweep->parsed()) return run_simulate(sweep_flags);
        if (figures->parsed()) return run_figures(figure_flags);
        if (verify->parsed()) return run_verify(verify_flags);
        if (trace_dump->parsed()) return run_trace_dump(trace_flags);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
