#include "qsched/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qsched/engine.hpp"
#include "qsched/metrics.hpp"
#include "qsched/workloads.hpp"

#include "parallel.hpp"

namespace qsched {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

Slot parse_slot(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        Slot v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for '" + key + "': " + s);
    }
}

double parse_real(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': " + s);
    }
}

// "2,3,4" or the range shorthand "2..12".
std::vector<Slot> parse_slot_list(const std::string& s, const std::string& key) {
    std::vector<Slot> out;
    if (auto dots = s.find(".."); dots != std::string::npos) {
        Slot lo = parse_slot(trim(s.substr(0, dots)), key);
        Slot hi = parse_slot(trim(s.substr(dots + 2)), key);
        if (hi < lo) throw ConfigError("config: empty range for '" + key + "': " + s);
        for (Slot v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    for (const auto& item : split(s, ','))
        if (!item.empty()) out.push_back(parse_slot(item, key));
    if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
    return out;
}

const std::vector<double> kKappaGrid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

std::string model_name(ArrivalModel m) {
    switch (m) {
        case ArrivalModel::TwoPoint: return "two_point";
        case ArrivalModel::Bernoulli: return "bernoulli";
        case ArrivalModel::Batch: return "batch";
    }
    return {};
}

std::string join_sizes(const std::vector<Slot>& sizes) {
    std::string s;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(sizes[i]);
    }
    return s;
}

// Aggregates of one engine run shared by every kappa row.
struct RunOutcome {
    std::uint64_t seed = 0;
    std::size_t completed = 0;
    std::size_t censored = 0;
    std::size_t busy_count = 0;
    std::vector<double> total_reward;             // per kappa
    std::vector<double> mean_reward;              // per kappa
    std::vector<std::optional<double>> renewal;   // per kappa
    std::optional<double> priority_fraction;
};

RunOutcome measure_run(const SimResult& result, const std::vector<double>& kappas,
                       std::optional<double> lambda, bool priority_analytics, Slot j) {
    RunOutcome out;
    out.completed = result.completed_count();
    out.censored = result.censored;
    out.busy_count = result.busy_periods.size();
    for (double kappa : kappas) {
        RewardFn f = RewardFn::exponential(kappa);
        double total = 0.0;
        for (const auto& r : result.records)
            if (r.completed()) total += f(r.sojourn());
        out.total_reward.push_back(total);
        out.mean_reward.push_back(out.completed ? total / static_cast<double>(out.completed)
                                                : 0.0);
        if (lambda) {
            auto cycles = renewal_cycles(result, f, *lambda);
            out.renewal.push_back(cycles.empty()
                                      ? std::optional<double>{}
                                      : std::optional<double>{renewal_estimate(cycles)});
        } else {
            out.renewal.emplace_back();
        }
    }
    if (priority_analytics) {
        std::uint64_t priority = 0;
        std::uint64_t jobs_in_periods = 0;
        for (const auto& bp : result.busy_periods) {
            priority += priority_count(result, bp, j);
            jobs_in_periods += bp.length;
        }
        if (jobs_in_periods > 0)
            out.priority_fraction = static_cast<double>(priority) /
                                    static_cast<double>(jobs_in_periods);
    }
    return out;
}

} // namespace

void ExperimentConfig::validate() const {
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
    if (replications < 1) throw ConfigError("config: replications must be >= 1");
    if (kappas.empty()) throw ConfigError("config: no kappa values");
    for (double k : kappas)
        if (!(k > 0.0)) throw ConfigError("config: kappa must be > 0");
    if (disciplines.empty()) throw ConfigError("config: no disciplines");
    if (model == ArrivalModel::Batch) {
        if (batch_sizes.empty()) throw ConfigError("config: batch model needs sizes");
        for (Slot s : batch_sizes)
            if (s < 1) throw ConfigError("config: batch sizes must be positive");
    } else {
        if (j_list.empty()) throw ConfigError("config: no job sizes");
        for (Slot j : j_list) {
            try {
                // Both stochastic models keep the mean gap at j+1 > j; bad
                // j/delta combinations are the unstable/invalid ones.
                if (model == ArrivalModel::TwoPoint)
                    TwoPointModel probe(j, delta_for(j));
                else
                    BernoulliModel probe(j);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
        }
    }
    if (horizon && *horizon < 1) throw ConfigError("config: horizon must be >= 1");
}

void apply_config_line(ExperimentConfig& cfg, const std::string& raw) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') return;
    auto eq = line.find('=');
    if (eq == std::string::npos)
        throw ConfigError("config: expected key=value, got: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("config: empty value for '" + key + "'");

    if (key == "model") {
        if (value == "two_point") cfg.model = ArrivalModel::TwoPoint;
        else if (value == "bernoulli") cfg.model = ArrivalModel::Bernoulli;
        else if (value == "batch") cfg.model = ArrivalModel::Batch;
        else throw ConfigError("config: unknown model: " + value);
    } else if (key == "j") {
        cfg.j_list = {parse_slot(value, key)};
    } else if (key == "j_list") {
        cfg.j_list = parse_slot_list(value, key);
    } else if (key == "delta") {
        cfg.delta = parse_slot(value, key);
    } else if (key == "sizes") {
        cfg.batch_sizes = parse_slot_list(value, key);
    } else if (key == "disciplines") {
        cfg.disciplines.clear();
        for (const auto& name : split(value, ',')) {
            if (name.empty()) continue;
            try {
                cfg.disciplines.push_back(parse_discipline(name));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
        }
        if (cfg.disciplines.empty()) throw ConfigError("config: no disciplines");
    } else if (key == "kappa") {
        cfg.kappas.clear();
        for (const auto& item : split(value, ','))
            if (!item.empty()) cfg.kappas.push_back(parse_real(item, key));
    } else if (key == "jobs") {
        Slot v = parse_slot(value, key);
        if (v < 1) throw ConfigError("config: jobs must be >= 1");
        cfg.jobs = static_cast<std::size_t>(v);
    } else if (key == "horizon") {
        cfg.horizon = parse_slot(value, key);
    } else if (key == "replications") {
        Slot v = parse_slot(value, key);
        if (v < 1) throw ConfigError("config: replications must be >= 1");
        cfg.replications = static_cast<std::size_t>(v);
    } else if (key == "seed") {
        try {
            cfg.seed = std::stoull(value);
        } catch (const std::exception&) {
            throw ConfigError("config: bad seed: " + value);
        }
    } else if (key == "out") {
        cfg.out = value;
    } else {
        throw ConfigError("config: unknown key: " + key);
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) apply_config_line(cfg, line);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

CsvWriter run_experiment(const ExperimentConfig& config) {
    config.validate();

    const bool batch = config.model == ArrivalModel::Batch;
    const std::vector<Slot> points = batch ? std::vector<Slot>{0} : config.j_list;
    const std::size_t n_disc = config.disciplines.size();
    const std::size_t n_rep = config.replications;
    const std::size_t task_count = points.size() * n_disc * n_rep;

    std::vector<RunOutcome> outcomes(task_count);
    detail::parallel_for(task_count, [&](std::size_t task) {
        std::size_t rep = task % n_rep;
        std::size_t disc_idx = (task / n_rep) % n_disc;
        std::size_t point = task / (n_rep * n_disc);
        const auto& spec = config.disciplines[disc_idx];

        // Replications share the trace across disciplines: the seed depends
        // on the sweep point and replication only.
        std::uint64_t seed = derive_seed(config.seed, point, rep);
        Trace trace;
        std::optional<double> lambda;
        bool priority = spec.kind != DisciplineKind::Ps;
        Slot j = 0;
        if (batch) {
            trace = batch_trace(config.batch_sizes);
            priority = false;
        } else {
            j = points[point];
            if (config.model == ArrivalModel::TwoPoint) {
                TwoPointModel model(j, config.delta_for(j));
                trace = two_point_trace(model, config.jobs, seed);
                lambda = model.arrival_rate();
            } else {
                BernoulliModel model(j);
                Slot window = config.horizon.value_or(
                    (j + 1) * static_cast<Slot>(config.jobs));
                trace = bernoulli_trace(model, window, seed);
                lambda = model.arrival_rate();
            }
        }
        SimResult result = run(trace, spec);
        outcomes[task] = measure_run(result, config.kappas, lambda, priority, j);
        outcomes[task].seed = seed;
    });

    CsvWriter csv({"model", "j", "delta", "arrival_p", "sizes", "kappa", "discipline",
                   "jobs", "replication", "seed", "generator", "completed", "censored",
                   "busy_periods", "total_reward", "mean_reward", "renewal_estimate",
                   "priority_fraction"});
    for (std::size_t point = 0; point < points.size(); ++point) {
        for (std::size_t d = 0; d < n_disc; ++d) {
            for (std::size_t ki = 0; ki < config.kappas.size(); ++ki) {
                for (std::size_t rep = 0; rep < n_rep; ++rep) {
                    const auto& o = outcomes[(point * n_disc + d) * n_rep + rep];
                    std::string j_str, delta_str, p_str, sizes_str;
                    if (batch) {
                        sizes_str = join_sizes(config.batch_sizes);
                    } else {
                        Slot j = points[point];
                        j_str = std::to_string(j);
                        if (config.model == ArrivalModel::TwoPoint)
                            delta_str = std::to_string(config.delta_for(j));
                        else
                            p_str = csv_double(1.0 / static_cast<double>(j + 1));
                    }
                    csv.add_row({model_name(config.model), j_str, delta_str, p_str,
                                 sizes_str, csv_double(config.kappas[ki]),
                                 to_string(config.disciplines[d]),
                                 std::to_string(config.jobs), std::to_string(rep),
                                 std::to_string(o.seed), generator_name(),
                                 std::to_string(o.completed), std::to_string(o.censored),
                                 std::to_string(o.busy_count),
                                 csv_double(o.total_reward[ki]),
                                 csv_double(o.mean_reward[ki]),
                                 o.renewal[ki] ? csv_double(*o.renewal[ki]) : "",
                                 o.priority_fraction ? csv_double(*o.priority_fraction)
                                                     : ""});
                }
            }
        }
    }
    return csv;
}

std::optional<FigureId> parse_figure_id(const std::string& name) {
    if (name == "fig1") return FigureId::Fig1;
    if (name == "fig2") return FigureId::Fig2;
    if (name == "fig3a") return FigureId::Fig3a;
    if (name == "fig3b") return FigureId::Fig3b;
    if (name == "fig4a") return FigureId::Fig4a;
    if (name == "fig4b") return FigureId::Fig4b;
    return std::nullopt;
}

namespace {

std::string figure_name(FigureId id) {
    switch (id) {
        case FigureId::Fig1: return "fig1";
        case FigureId::Fig2: return "fig2";
        case FigureId::Fig3a: return "fig3a";
        case FigureId::Fig3b: return "fig3b";
        case FigureId::Fig4a: return "fig4a";
        case FigureId::Fig4b: return "fig4b";
    }
    return {};
}

std::vector<std::string> figure_disciplines(FigureId id) {
    switch (id) {
        case FigureId::Fig1:
            return {"fcfs", "lcfs", "srpt", "psjf", "ps"};
        case FigureId::Fig2:
            return {"fcfs", "lcfs", "srpt", "psjf", "ps", "spst"};
        default:
            return {"fcfs", "lcfs", "srpt", "srpt-r", "psjf", "psjf-r", "ps", "spst",
                    "spst-r"};
    }
}

bool figure_is_bernoulli(FigureId id) {
    return id == FigureId::Fig4a || id == FigureId::Fig4b;
}

bool figure_is_kappa_sweep(FigureId id) {
    return id == FigureId::Fig3b || id == FigureId::Fig4b;
}

} // namespace

CsvWriter reproduce_figure(FigureId id, std::uint64_t seed, std::size_t jobs,
                           std::size_t replications) {
    const bool bernoulli = figure_is_bernoulli(id);
    const bool kappa_sweep = figure_is_kappa_sweep(id);
    const std::vector<Slot> j_values =
        kappa_sweep ? std::vector<Slot>{4} : std::vector<Slot>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    const std::vector<double> kappas = kappa_sweep ? kKappaGrid : std::vector<double>{1.0};

    std::vector<DisciplineSpec> disciplines;
    for (const auto& name : figure_disciplines(id))
        disciplines.push_back(parse_discipline(name));

    const std::size_t n_disc = disciplines.size();
    const std::size_t task_count = j_values.size() * n_disc * replications;
    std::vector<std::vector<double>> task_means(task_count);  // per kappa

    detail::parallel_for(task_count, [&](std::size_t task) {
        std::size_t rep = task % replications;
        std::size_t disc_idx = (task / replications) % n_disc;
        std::size_t point = task / (replications * n_disc);
        Slot j = j_values[point];
        std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(j), rep);
        Trace trace;
        if (bernoulli) {
            trace = bernoulli_trace(BernoulliModel(j),
                                    (j + 1) * static_cast<Slot>(jobs), run_seed);
        } else {
            trace = two_point_trace(TwoPointModel(j, j / 2), jobs, run_seed);
        }
        SimResult result = run(trace, disciplines[disc_idx]);
        auto& means = task_means[task];
        means.reserve(kappas.size());
        for (double kappa : kappas)
            means.push_back(long_run_average(result, RewardFn::exponential(kappa)));
    });

    CsvWriter csv({"figure", "model", "j", "delta", "arrival_p", "kappa", "discipline",
                   "jobs", "replications", "seed", "mean_reward", "log10_mean_reward",
                   "ci_halfwidth"});
    for (std::size_t point = 0; point < j_values.size(); ++point) {
        Slot j = j_values[point];
        for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
            for (std::size_t d = 0; d < n_disc; ++d) {
                std::vector<double> reps;
                reps.reserve(replications);
                for (std::size_t rep = 0; rep < replications; ++rep) {
                    std::size_t task = (point * n_disc + d) * replications + rep;
                    reps.push_back(task_means[task][ki]);
                }
                auto stats = batch_stats(reps);
                csv.add_row({figure_name(id),
                             bernoulli ? "bernoulli" : "two_point", std::to_string(j),
                             bernoulli ? "" : std::to_string(j / 2),
                             bernoulli ? csv_double(1.0 / static_cast<double>(j + 1)) : "",
                             csv_double(kappas[ki]), to_string(disciplines[d]),
                             std::to_string(jobs), std::to_string(replications),
                             std::to_string(seed), csv_double(stats.mean),
                             csv_double(std::log10(stats.mean)),
                             csv_double(stats.ci_halfwidth)});
            }
        }
    }
    return csv;
}

std::string gnuplot_script(FigureId id, const std::string& csv_path) {
    const bool kappa_sweep = figure_is_kappa_sweep(id);
    std::string discs;
    for (const auto& d : figure_disciplines(id)) {
        if (!discs.empty()) discs += ' ';
        discs += d;
    }
    std::string x_col = kappa_sweep ? "$6" : "$3";
    std::string script;
    script += "# " + figure_name(id) + ": long-term average reward (log10 scale)\n";
    script += "set datafile separator ','\n";
    script += "set key outside\n";
    script += std::string("set xlabel '") + (kappa_sweep ? "kappa" : "job size j") + "'\n";
    if (kappa_sweep) script += "set logscale x 2\n";
    script += "set ylabel 'log10 long-term average reward'\n";
    script += "discs = \"" + discs + "\"\n";
    script += "plot for [d in discs] '" + csv_path +
              "' using (strcol(7) eq d ? " + x_col +
              " : NaN):12 with linespoints title d\n";
    return script;
}

BatchStats batch_stats(const std::vector<double>& values) {
    // Two-sided 95% Student t quantiles, df = 1..30; 1.96 beyond.
    static constexpr double kT95[] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};

    BatchStats stats;
    if (values.empty()) return stats;
    double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / n;
    if (values.size() < 2) return stats;
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    double sd = std::sqrt(ss / (n - 1.0));
    std::size_t df = values.size() - 1;
    double t = df <= 30 ? kT95[df - 1] : 1.96;
    stats.ci_halfwidth = t * sd / std::sqrt(n);
    return stats;
}

} // namespace qsched
