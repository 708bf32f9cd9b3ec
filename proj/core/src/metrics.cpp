#include "qsched/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsched {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

RewardFn RewardFn::exponential(double kappa) {
    require(kappa > 0.0 && std::isfinite(kappa), "reward: kappa must be positive");
    RewardFn f;
    f.kappa_ = kappa;
    return f;
}

RewardFn RewardFn::tabulated(std::vector<double> values) {
    require(!values.empty(), "reward: empty table");
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(std::isfinite(values[i]), "reward: non-finite table entry");
        require(i == 0 || values[i] <= values[i - 1],
                "reward: table must be non-increasing");
    }
    RewardFn f;
    f.table_ = std::move(values);
    return f;
}

double RewardFn::operator()(const Rational& sojourn) const {
    require(sojourn >= Rational(0), "reward: negative sojourn");
    if (table_.empty()) return std::exp(-kappa_ * to_double(sojourn));
    auto idx = static_cast<std::size_t>(sojourn.numerator() / sojourn.denominator());
    return table_[std::min(idx, table_.size() - 1)];
}

double long_run_average(const SimResult& result, const RewardFn& f) {
    require(result.completed_count() > 0, "long_run_average: no completed jobs");
    double sum = 0.0;
    for (const auto& r : result.records)
        if (r.completed()) sum += f(r.sojourn());
    return sum / static_cast<double>(result.completed_count());
}

std::vector<BusyPeriod> busy_periods(const SimResult& result) {
    std::vector<BusyPeriod> periods;
    bool open = false;
    bool contaminated = false;  // holds a censored job; never emitted
    BusyPeriod cur{};
    Rational cur_end(0);

    auto close = [&]() {
        if (!open) return;
        if (!contaminated) {
            require(is_integral(cur_end), "busy_periods: non-integral period end");
            cur.end = boost::rational_cast<Slot>(cur_end);
            periods.push_back(cur);
        }
        open = false;
        contaminated = false;
    };

    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const auto& r = result.records[i];
        Rational arr(r.arrival);
        if (!open || (!contaminated && arr >= cur_end)) {
            close();
            cur = BusyPeriod{r.arrival, 0, static_cast<JobId>(i), 0};
            cur_end = arr;
            open = true;
        }
        ++cur.length;
        if (r.completed()) {
            cur_end = std::max(cur_end, r.departure);
        } else {
            contaminated = true;  // present from arrival onward
        }
    }
    close();
    return periods;
}

BlockDecomposition block_decompose(const SimResult& result, const BusyPeriod& bp,
                                   const TwoPointModel& model) {
    BlockDecomposition d;
    for (Slot gap : result.internal_gaps(bp)) {
        bool is_a;
        if (gap == model.j1()) is_a = true;
        else if (gap == model.j2()) is_a = false;
        else
            throw std::invalid_argument(
                "block_decompose: gap " + std::to_string(gap) +
                " is neither j1 nor j2 of the model");
        if (d.blocks.empty() || d.blocks.back().is_a != is_a)
            d.blocks.push_back({is_a, 0});
        ++d.blocks.back().count;
        if (is_a) ++d.n_j1;
        else ++d.n_j2;
    }
    for (const auto& b : d.blocks) {
        if (b.is_a) ++d.n_a;
        else ++d.n_b;
    }
    return d;
}

std::uint32_t priority_count(const SimResult& result, const BusyPeriod& bp, Slot j) {
    std::uint32_t n = 0;
    Rational target(j);
    for (std::uint32_t i = 0; i < bp.length; ++i) {
        const auto& r = result.records[bp.first_job + i];
        if (r.completed() && r.sojourn() == target) ++n;
    }
    return n;
}

std::vector<Slot> fcfs_sojourns_closed_form(const std::vector<Slot>& gaps, Slot j) {
    require(j >= 1, "fcfs closed form: job size must be positive");
    std::vector<Slot> sojourns;
    sojourns.reserve(gaps.size() + 1);
    Slot w = j;
    sojourns.push_back(w);
    for (Slot gap : gaps) {
        w = w - gap + j;
        if (w <= j)
            throw std::invalid_argument(
                "fcfs closed form: gaps do not come from a single busy period");
        sojourns.push_back(w);
    }
    return sojourns;
}

std::vector<CycleStats> renewal_cycles(const SimResult& result, const RewardFn& f,
                                       double lambda) {
    require(lambda > 0.0, "renewal_cycles: lambda must be positive");
    std::vector<CycleStats> cycles;
    const auto& bps = result.busy_periods;
    if (bps.size() < 2) return cycles;  // no complete busy+idle cycle
    cycles.reserve(bps.size() - 1);
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        CycleStats c;
        c.duration = bps[i + 1].start - bps[i].start;
        c.lambda = lambda;
        for (std::uint32_t k = 0; k < bps[i].length; ++k)
            c.reward_sum += f(result.records[bps[i].first_job + k].sojourn());
        cycles.push_back(c);
    }
    return cycles;
}

double renewal_estimate(const std::vector<CycleStats>& cycles) {
    require(!cycles.empty(), "renewal_estimate: no complete cycles");
    double lambda = cycles.front().lambda;
    require(lambda > 0.0, "renewal_estimate: lambda must be positive");
    double reward = 0.0;
    double duration = 0.0;
    for (const auto& c : cycles) {
        require(c.lambda == lambda, "renewal_estimate: cycles disagree on lambda");
        reward += c.reward_sum;
        duration += static_cast<double>(c.duration);
    }
    double n = static_cast<double>(cycles.size());
    return (reward / n) / (lambda * (duration / n));
}

} // namespace qsched
