#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qsched/engine.hpp"
#include "qsched/metrics.hpp"
#include "qsched/workloads.hpp"

namespace qsched {

struct Violation {
    std::string rule;
    std::string input;     // enough to replay: gap sequence / sizes / kappa
    std::string expected;
    std::string observed;
};

struct VerificationReport {
    std::uint64_t cases_checked = 0;
    std::uint64_t truncated = 0;  // enumerated periods skipped as unfinished
    std::vector<Violation> violations;

    bool passed() const { return violations.empty(); }
    std::map<std::string, std::uint64_t> violations_by_rule() const;
    void merge(VerificationReport other);
};

// Exhaustive batch-order search caps: n! permutations stay desk-scale.
inline constexpr std::size_t kMaxBatchJobs = 8;
inline constexpr Slot kMaxEnumerationGaps = 14;

struct BatchOrderResult {
    double max_reward = 0.0;
    std::vector<std::vector<std::uint32_t>> optimal_orders;  // job index orders
};

// Enumerates all n! service orders of a single batch (cumulative sojourns
// W_k = sum of the first k sizes) and returns the maximum total reward with
// every order attaining it (1e-12 relative slack). Throws above the cap.
BatchOrderResult best_batch_order(const std::vector<Slot>& sizes, const RewardFn& f);

// Checks, on `instance_count` random instances, that the size-ascending
// order attains the exhaustive maximum for each exponential reward in
// `kappas` plus one strictly decreasing tabulated reward, and that swapping
// any adjacent pair of the ascending order never increases the total.
VerificationReport verify_batch_theorem(std::size_t n_max, Slot min_size, Slot max_size,
                                        const std::vector<double>& kappas,
                                        std::size_t instance_count, std::uint64_t seed);

// One enumerated first busy period: the gap prefix that terminates it
// (internal gaps plus the escaping gap) and the resulting period shape.
struct EnumeratedPeriod {
    std::vector<Slot> gaps;  // prefix over {j1, j2}; the last gap escapes
    std::uint32_t n = 0;     // jobs in the period
    Slot duration = 0;       // n * j

    std::vector<Slot> internal_gaps() const {
        return {gaps.begin(), gaps.empty() ? gaps.end() : gaps.end() - 1};
    }
};

// Walks every gap sequence over {j1, j2} up to max_gaps deep and collects
// each distinct first-busy-period prefix exactly once (the tree is pruned
// where the period has already ended, which is what deduplicating the
// 2^max_gaps flat sequences by prefix yields). Prefixes still busy at
// max_gaps are counted as truncated. Requires 2*delta <= j and
// max_gaps <= kMaxEnumerationGaps.
struct EnumerationResult {
    std::vector<EnumeratedPeriod> periods;
    std::uint64_t truncated = 0;
};
EnumerationResult enumerate_busy_periods(Slot j, Slot delta, Slot max_gaps);

// Simulates SPST and FCFS on every enumerated busy period and compares
// accumulated rewards sum(exp(-kappa W)). For kappa >= ln 2 a deficit is a
// violation, and n < 3 must give exact equality; smaller kappas are
// exploratory and never judged.
VerificationReport verify_spst_vs_fcfs(Slot j, Slot delta,
                                       const std::vector<double>& kappas, Slot max_gaps);

// Exploratory sweep: per-kappa violation counts of SPST-vs-FCFS dominance
// over the enumeration, as data (no pass/fail semantics below ln 2).
struct KappaSweepPoint {
    double kappa = 0.0;
    std::uint64_t violations = 0;
    std::uint64_t cases = 0;
};
std::vector<KappaSweepPoint> spst_fcfs_kappa_sweep(Slot j, Slot delta,
                                                   const std::vector<double>& kappas,
                                                   Slot max_gaps);

// Audits every enumerated busy period against the busy-period structure
// rules: SPST priority-job lower bounds, the odd-A-block sojourn value
// j+delta-1, per-claim block facts (n_j1+n_j2 = n-1, first block A,
// n_A-n_B in {0,1}, even-index A jobs and all B jobs are SPST priority
// jobs), FCFS facts (one priority job, others W >= j+1, some W >= j+delta
// for n >= 3, closed-form sojourns), and the enumeration end condition.
VerificationReport verify_lemmas(Slot j, Slot delta, Slot max_gaps);

} // namespace qsched
