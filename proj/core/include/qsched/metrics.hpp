#pragma once

#include <cstdint>
#include <vector>

#include "qsched/engine.hpp"
#include "qsched/time.hpp"
#include "qsched/workloads.hpp"

namespace qsched {

// Non-increasing reward over sojourn time: either exp(-kappa*W) or a table
// over integer sojourns (clamped at the last entry). Tables are validated
// for monotonicity on construction.
class RewardFn {
public:
    static RewardFn exponential(double kappa);
    static RewardFn tabulated(std::vector<double> values);

    double operator()(const Rational& sojourn) const;
    double operator()(Slot sojourn) const { return (*this)(Rational(sojourn)); }

    bool is_exponential() const { return table_.empty(); }
    double kappa() const { return kappa_; }

private:
    RewardFn() = default;
    double kappa_ = 0.0;
    std::vector<double> table_;  // empty => exponential
};

// Mean reward over completed jobs; throws on an empty result.
double long_run_average(const SimResult& result, const RewardFn& f);

// Reconstructs busy periods from the job records alone (union of presence
// intervals, with an arrival at the instant of emptying opening a new
// period). Independent of the engine's own bookkeeping; the two must agree.
// A trailing period containing censored jobs is dropped.
std::vector<BusyPeriod> busy_periods(const SimResult& result);

// Jobs following a j1 gap form A blocks, jobs following a j2 gap form
// B blocks; the leading job of a busy period is in neither.
struct Block {
    bool is_a = true;
    std::uint32_t count = 0;
    friend bool operator==(const Block&, const Block&) = default;
};

struct BlockDecomposition {
    std::vector<Block> blocks;
    std::uint32_t n_j1 = 0;  // jobs in A blocks
    std::uint32_t n_j2 = 0;  // jobs in B blocks
    std::uint32_t n_a = 0;   // number of A blocks
    std::uint32_t n_b = 0;   // number of B blocks
};

// Classifies a busy period's non-leading jobs by preceding gap. Throws when
// a gap is neither j1 nor j2 for the given model.
BlockDecomposition block_decompose(const SimResult& result, const BusyPeriod& bp,
                                   const TwoPointModel& model);

// Number of jobs in the period whose sojourn is exactly j (they neither
// wait nor get preempted). Exact integer comparison; meaningful for the
// single-service disciplines on equal-size traces.
std::uint32_t priority_count(const SimResult& result, const BusyPeriod& bp, Slot j);

// FCFS sojourns of one busy period from its internal gaps:
// W_1 = j, W_k = W_{k-1} - Y_{k-1} + j. Throws if the recursion yields
// W_k <= j for k >= 2 (the gaps do not come from a single busy period).
std::vector<Slot> fcfs_sojourns_closed_form(const std::vector<Slot>& gaps, Slot j);

// One renewal cycle: a busy period plus the idle stretch to the next one.
struct CycleStats {
    double reward_sum = 0.0;  // sum of f(W) over the period's jobs
    Slot duration = 0;        // busy + following idle
    double lambda = 0.0;      // arrival rate, identical across cycles
};

// Complete cycles of a run; the final busy period has no following idle
// stretch and is dropped.
std::vector<CycleStats> renewal_cycles(const SimResult& result, const RewardFn& f,
                                       double lambda);

// mean(R) / (lambda * mean(cycle duration)); agrees with long_run_average
// in the long run. Throws on no cycles, mixed lambda, or lambda <= 0.
double renewal_estimate(const std::vector<CycleStats>& cycles);

} // namespace qsched
