#include "qsched/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "qsched/csv.hpp"

#include "parallel.hpp"

namespace qsched {

namespace {

constexpr double kRelTol = 1e-12;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool close_enough(double a, double b) {
    return std::abs(a - b) <= kRelTol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::string join(const std::vector<Slot>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(xs[i]);
    }
    return s;
}

double total_reward(const std::vector<std::uint32_t>& order,
                    const std::vector<Slot>& sizes, const RewardFn& f) {
    Slot w = 0;
    double total = 0.0;
    for (auto idx : order) {
        w += sizes[idx];
        total += f(w);
    }
    return total;
}

std::vector<std::uint32_t> ascending_order(const std::vector<Slot>& sizes) {
    std::vector<std::uint32_t> order(sizes.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return sizes[a] < sizes[b]; });
    return order;
}

} // namespace

std::map<std::string, std::uint64_t> VerificationReport::violations_by_rule() const {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& v : violations) ++counts[v.rule];
    return counts;
}

void VerificationReport::merge(VerificationReport other) {
    cases_checked += other.cases_checked;
    truncated += other.truncated;
    violations.insert(violations.end(),
                      std::make_move_iterator(other.violations.begin()),
                      std::make_move_iterator(other.violations.end()));
}

BatchOrderResult best_batch_order(const std::vector<Slot>& sizes, const RewardFn& f) {
    require(!sizes.empty(), "best_batch_order: no jobs");
    require(sizes.size() <= kMaxBatchJobs,
            "best_batch_order: batch larger than the enumeration cap");
    for (Slot s : sizes) require(s >= 1, "best_batch_order: sizes must be positive");

    std::vector<std::uint32_t> perm(sizes.size());
    std::iota(perm.begin(), perm.end(), 0u);

    std::vector<std::pair<std::vector<std::uint32_t>, double>> all;
    do {
        all.emplace_back(perm, total_reward(perm, sizes, f));
    } while (std::next_permutation(perm.begin(), perm.end()));

    BatchOrderResult result;
    result.max_reward = all.front().second;
    for (const auto& [order, reward] : all)
        result.max_reward = std::max(result.max_reward, reward);
    for (auto& [order, reward] : all)
        if (close_enough(reward, result.max_reward))
            result.optimal_orders.push_back(std::move(order));
    return result;
}

VerificationReport verify_batch_theorem(std::size_t n_max, Slot min_size, Slot max_size,
                                        const std::vector<double>& kappas,
                                        std::size_t instance_count, std::uint64_t seed) {
    require(n_max >= 1 && n_max <= kMaxBatchJobs,
            "verify_batch_theorem: n_max above the enumeration cap");
    require(min_size >= 1 && min_size <= max_size, "verify_batch_theorem: bad size range");

    std::mt19937_64 rng(seed);
    VerificationReport report;
    for (std::size_t inst = 0; inst < instance_count; ++inst) {
        auto n = static_cast<std::size_t>(rng() % n_max) + 1;
        std::vector<Slot> sizes(n);
        for (auto& s : sizes)
            s = min_size + static_cast<Slot>(rng() % static_cast<std::uint64_t>(
                                                        max_size - min_size + 1));

        // One strictly decreasing table alongside the exponential rewards;
        // the optimality claim holds for any non-increasing function.
        std::vector<double> table;
        Slot span = std::accumulate(sizes.begin(), sizes.end(), Slot{0});
        table.reserve(static_cast<std::size_t>(span) + 1);
        double v = 1.0;
        std::uniform_real_distribution<double> shrink(0.05, 0.95);
        for (Slot w = 0; w <= span; ++w) {
            table.push_back(v);
            v *= shrink(rng);
        }

        std::vector<RewardFn> rewards;
        for (double k : kappas) rewards.push_back(RewardFn::exponential(k));
        rewards.push_back(RewardFn::tabulated(std::move(table)));

        auto sjf = ascending_order(sizes);
        for (std::size_t ri = 0; ri < rewards.size(); ++ri) {
            const auto& f = rewards[ri];
            std::string reward_name = ri < kappas.size()
                                          ? "kappa=" + csv_double(kappas[ri])
                                          : "tabulated";
            double sjf_reward = total_reward(sjf, sizes, f);
            auto best = best_batch_order(sizes, f);
            ++report.cases_checked;
            if (!close_enough(sjf_reward, best.max_reward)) {
                report.violations.push_back(
                    {"sjf-attains-maximum", "sizes=" + join(sizes) + " " + reward_name,
                     csv_double(best.max_reward), csv_double(sjf_reward)});
            }
            for (std::size_t k = 0; k + 1 < sjf.size(); ++k) {
                auto swapped = sjf;
                std::swap(swapped[k], swapped[k + 1]);
                double swapped_reward = total_reward(swapped, sizes, f);
                ++report.cases_checked;
                if (swapped_reward > sjf_reward &&
                    !close_enough(swapped_reward, sjf_reward)) {
                    report.violations.push_back(
                        {"adjacent-swap", "sizes=" + join(sizes) + " swap_at=" +
                                              std::to_string(k) + " " + reward_name,
                         "<= " + csv_double(sjf_reward), csv_double(swapped_reward)});
                }
            }
        }
    }
    return report;
}

EnumerationResult enumerate_busy_periods(Slot j, Slot delta, Slot max_gaps) {
    TwoPointModel model(j, delta, /*analysis_mode=*/true);
    require(max_gaps >= 1 && max_gaps <= kMaxEnumerationGaps,
            "enumerate_busy_periods: max_gaps outside [1, 14]");

    EnumerationResult result;
    std::vector<Slot> gaps;
    Slot gap_sum = 0;

    // The first busy period is fixed by its gap prefix: descending both gap
    // choices and stopping at the first prefix satisfying the end condition
    // (total arrived work <= elapsed time) visits each distinct prefix once.
    auto walk = [&](auto&& self) -> void {
        for (Slot gap : {model.j1(), model.j2()}) {
            gaps.push_back(gap);
            gap_sum += gap;
            auto m = static_cast<Slot>(gaps.size());
            if (j * m <= gap_sum) {
                result.periods.push_back(
                    {gaps, static_cast<std::uint32_t>(m), j * m});
            } else if (m == max_gaps) {
                ++result.truncated;
            } else {
                self(self);
            }
            gap_sum -= gap;
            gaps.pop_back();
        }
    };
    walk(walk);
    return result;
}

namespace {

// Equal-size-j jobs of one enumerated period as a standalone trace.
Trace period_trace(const EnumeratedPeriod& period, Slot j) {
    std::vector<Arrival> arrivals;
    arrivals.reserve(period.n);
    Slot t = 0;
    arrivals.push_back({t, j});
    for (Slot gap : period.internal_gaps()) {
        t += gap;
        arrivals.push_back({t, j});
    }
    return Trace(std::move(arrivals));
}

struct PeriodSim {
    SimResult spst;
    SimResult fcfs;
    std::vector<Slot> spst_w;
    std::vector<Slot> fcfs_w;
};

PeriodSim simulate_period(const EnumeratedPeriod& period, Slot j) {
    Trace trace = period_trace(period, j);
    PeriodSim sim;
    sim.spst = run(trace, {DisciplineKind::Spst, TieBreak::EarliestArrival});
    sim.fcfs = run(trace, {DisciplineKind::Fcfs, TieBreak::EarliestArrival});
    if (sim.spst.busy_periods.size() != 1 || sim.fcfs.busy_periods.size() != 1)
        throw std::logic_error("enumerated gap prefix did not form one busy period");
    for (const auto& r : sim.spst.records)
        sim.spst_w.push_back(boost::rational_cast<Slot>(r.sojourn()));
    for (const auto& r : sim.fcfs.records)
        sim.fcfs_w.push_back(boost::rational_cast<Slot>(r.sojourn()));
    return sim;
}

double reward_sum(const std::vector<Slot>& sojourns, double kappa) {
    double total = 0.0;
    for (Slot w : sojourns) total += std::exp(-kappa * static_cast<double>(w));
    return total;
}

template <typename PerPeriod>
VerificationReport over_enumeration(Slot j, Slot delta, Slot max_gaps,
                                    PerPeriod&& per_period) {
    auto enumeration = enumerate_busy_periods(j, delta, max_gaps);
    std::vector<VerificationReport> parts(enumeration.periods.size());
    detail::parallel_for(enumeration.periods.size(), [&](std::size_t i) {
        per_period(enumeration.periods[i], parts[i]);
    });
    VerificationReport report;
    report.truncated = enumeration.truncated;
    for (auto& part : parts) report.merge(std::move(part));
    return report;
}

} // namespace

VerificationReport verify_spst_vs_fcfs(Slot j, Slot delta,
                                       const std::vector<double>& kappas, Slot max_gaps) {
    const double ln2 = std::numbers::ln2;
    return over_enumeration(j, delta, max_gaps, [&](const EnumeratedPeriod& period,
                                                    VerificationReport& report) {
        auto sim = simulate_period(period, j);
        std::string input = "j=" + std::to_string(j) + " delta=" + std::to_string(delta) +
                            " gaps=" + join(period.gaps);
        for (double kappa : kappas) {
            double r_spst = reward_sum(sim.spst_w, kappa);
            double r_fcfs = reward_sum(sim.fcfs_w, kappa);
            std::string with_kappa = input + " kappa=" + csv_double(kappa);
            if (period.n < 3) {
                ++report.cases_checked;
                if (sim.spst_w != sim.fcfs_w || r_spst != r_fcfs) {
                    report.violations.push_back({"equality-below-three", with_kappa,
                                                 csv_double(r_fcfs), csv_double(r_spst)});
                }
                continue;
            }
            if (kappa < ln2 - kRelTol) continue;  // exploratory, not judged
            ++report.cases_checked;
            if (r_spst < r_fcfs && !close_enough(r_spst, r_fcfs)) {
                report.violations.push_back({"spst-dominates-fcfs", with_kappa,
                                             ">= " + csv_double(r_fcfs),
                                             csv_double(r_spst)});
            }
        }
    });
}

std::vector<KappaSweepPoint> spst_fcfs_kappa_sweep(Slot j, Slot delta,
                                                   const std::vector<double>& kappas,
                                                   Slot max_gaps) {
    auto enumeration = enumerate_busy_periods(j, delta, max_gaps);
    std::vector<KappaSweepPoint> points;
    points.reserve(kappas.size());
    for (double kappa : kappas) points.push_back({kappa, 0, 0});

    std::vector<PeriodSim> sims(enumeration.periods.size());
    detail::parallel_for(enumeration.periods.size(), [&](std::size_t i) {
        sims[i] = simulate_period(enumeration.periods[i], j);
    });
    for (const auto& sim : sims) {
        for (auto& point : points) {
            double r_spst = reward_sum(sim.spst_w, point.kappa);
            double r_fcfs = reward_sum(sim.fcfs_w, point.kappa);
            ++point.cases;
            if (r_spst < r_fcfs && !close_enough(r_spst, r_fcfs)) ++point.violations;
        }
    }
    return points;
}

VerificationReport verify_lemmas(Slot j, Slot delta, Slot max_gaps) {
    TwoPointModel model(j, delta, /*analysis_mode=*/true);
    return over_enumeration(j, delta, max_gaps, [&](const EnumeratedPeriod& period,
                                                    VerificationReport& report) {
        auto sim = simulate_period(period, j);
        const auto n = period.n;
        std::string input = "j=" + std::to_string(j) + " delta=" + std::to_string(delta) +
                            " gaps=" + join(period.gaps);
        auto check = [&](const std::string& rule, bool ok, const std::string& expected,
                         const std::string& observed) {
            ++report.cases_checked;
            if (!ok) report.violations.push_back({rule, input, expected, observed});
        };

        // End condition: the full prefix satisfies it, no proper prefix does,
        // and k2 never exceeds k1 while the period is still running.
        {
            Slot sum = 0;
            Slot k1 = 0, k2 = 0;
            bool prefixes_open = true;
            bool remark_holds = true;
            for (std::size_t g = 0; g + 1 < period.gaps.size(); ++g) {
                sum += period.gaps[g];
                (period.gaps[g] == model.j1() ? k1 : k2) += 1;
                if (j * static_cast<Slot>(g + 1) <= sum) prefixes_open = false;
                if (k2 > k1) remark_holds = false;
            }
            sum += period.gaps.back();
            bool ends = j * static_cast<Slot>(period.gaps.size()) <= sum;
            check("end-condition", ends && prefixes_open,
                  "first prefix satisfying (k1+k2)j <= k1*j1 + k2*j2",
                  ends ? "ended earlier than enumerated" : "did not end");
            check("remark-k2-le-k1", remark_holds, "k2 <= k1 before the period ends",
                  "k2 > k1 in a running period");
        }

        const auto& bp = sim.spst.busy_periods.front();
        check("period-shape", bp.length == n && bp.duration() == period.duration,
              "n=" + std::to_string(n) + " T=" + std::to_string(period.duration),
              "n=" + std::to_string(bp.length) + " T=" + std::to_string(bp.duration()));

        auto blocks = block_decompose(sim.spst, bp, model);
        check("block-claim-count", blocks.n_j1 + blocks.n_j2 == n - 1,
              "n_j1+n_j2=" + std::to_string(n - 1),
              std::to_string(blocks.n_j1 + blocks.n_j2));
        if (n > 1) {
            bool starts_a = !blocks.blocks.empty() && blocks.blocks.front().is_a;
            Slot diff = static_cast<Slot>(blocks.n_a) - static_cast<Slot>(blocks.n_b);
            check("block-claim-structure", starts_a && (diff == 0 || diff == 1),
                  "first block A, n_A-n_B in {0,1}",
                  "n_A=" + std::to_string(blocks.n_a) + " n_B=" + std::to_string(blocks.n_b));
        }

        auto spst_priority = priority_count(sim.spst, bp, j);
        check("spst-priority-at-least-half", spst_priority >= (n + 1) / 2,
              ">= " + std::to_string((n + 1) / 2), std::to_string(spst_priority));

        bool all_a_even = true;
        bool any_a_odd = false;
        for (const auto& b : blocks.blocks) {
            if (!b.is_a) continue;
            if (b.count % 2 == 0) continue;
            all_a_even = false;
            any_a_odd = true;
        }
        if (n % 2 == 0 && all_a_even) {
            check("spst-priority-even-blocks", spst_priority >= n / 2 + 1,
                  ">= " + std::to_string(n / 2 + 1), std::to_string(spst_priority));
        }
        if (any_a_odd) {
            Slot marker = j + delta - 1;
            bool found = std::find(sim.spst_w.begin(), sim.spst_w.end(), marker) !=
                         sim.spst_w.end();
            check("spst-odd-block-sojourn", found,
                  "some sojourn = " + std::to_string(marker), join(sim.spst_w));
        }

        // Even-index jobs of every A block and all B-block jobs finish in
        // exactly j slots. Jobs 1..n-1 partition sequentially into the runs.
        {
            bool ok = true;
            std::uint32_t pos = 1;
            for (const auto& b : blocks.blocks) {
                for (std::uint32_t i = 1; i <= b.count; ++i, ++pos) {
                    bool must_be_priority = !b.is_a || i % 2 == 0;
                    if (must_be_priority && sim.spst_w[pos] != j) ok = false;
                }
            }
            check("spst-block-priority-structure", ok,
                  "even-index A jobs and all B jobs have W = j", join(sim.spst_w));
        }

        auto fcfs_priority = priority_count(sim.fcfs, sim.fcfs.busy_periods.front(), j);
        check("fcfs-single-priority", fcfs_priority == 1, "1",
              std::to_string(fcfs_priority));
        {
            bool others_wait = true;
            for (std::size_t i = 0; i < sim.fcfs_w.size(); ++i)
                if (sim.fcfs_w[i] != j && sim.fcfs_w[i] < j + 1) others_wait = false;
            check("fcfs-others-wait", others_wait, "non-priority jobs have W >= j+1",
                  join(sim.fcfs_w));
        }
        if (n >= 3) {
            bool delayed = std::any_of(sim.fcfs_w.begin(), sim.fcfs_w.end(),
                                       [&](Slot w) { return w >= j + delta; });
            check("fcfs-delta-wait", delayed, "some W >= " + std::to_string(j + delta),
                  join(sim.fcfs_w));
        }
        {
            auto closed = fcfs_sojourns_closed_form(period.internal_gaps(), j);
            check("fcfs-closed-form", closed == sim.fcfs_w, join(closed),
                  join(sim.fcfs_w));
        }
    });
}

} // namespace qsched
