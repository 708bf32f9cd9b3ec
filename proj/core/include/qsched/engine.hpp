#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qsched/disciplines.hpp"
#include "qsched/time.hpp"
#include "qsched/trace.hpp"

namespace qsched {

// Per-job outcome. Jobs are indexed like the trace. A job cut off by the
// horizon keeps `departure < 0` and is excluded from reward statistics.
struct JobRecord {
    Slot arrival = 0;
    Slot size = 0;
    Rational departure{-1};

    bool completed() const { return departure >= Rational(0); }
    Rational sojourn() const { return departure - Rational(arrival); }
    friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

// Maximal interval with at least one job present. Jobs of one busy period
// are contiguous in arrival order: indices [first_job, first_job + length).
struct BusyPeriod {
    Slot start = 0;
    Slot end = 0;
    JobId first_job = 0;
    std::uint32_t length = 0;  // job count, the period's n

    Slot duration() const { return end - start; }
    friend bool operator==(const BusyPeriod&, const BusyPeriod&) = default;
};

struct SimResult {
    std::vector<JobRecord> records;      // indexed by job
    std::vector<BusyPeriod> busy_periods;  // completed periods only
    std::size_t censored = 0;

    std::size_t completed_count() const { return records.size() - censored; }

    // Arrival / completion counters by slot time (linear scans; these back
    // occasional audits, not hot paths).
    std::size_t arrivals_by(Slot t) const;
    std::size_t completions_by(Slot t) const;

    // Arrival gaps between consecutive jobs of one busy period (n-1 values).
    std::vector<Slot> internal_gaps(const BusyPeriod& bp) const;
    std::vector<JobId> job_ids(const BusyPeriod& bp) const;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

// Runs `trace` to completion (or to `horizon`) under the given discipline.
//
// Each integer epoch t applies, in order: (1) departures completing at t
// are finalized, (2) arrivals with arrival_time == t join, (3) the
// discipline picks a decision, (4) one slot of work is applied. When a
// departure and an arrival share an epoch the system is momentarily empty
// and a new busy period starts. Processor sharing serves all active jobs
// at equal rates with completions resolved at exact rational instants.
//
// Decisions are re-evaluated at every slot boundary. Internally the run
// advances event-to-event, which is decision-equivalent because no
// discipline's choice can change between an arrival and the next
// arrival/departure (the served job's key only improves relative to the
// queue); tests cross-check this against a slot-stepping reference.
//
// Throws std::invalid_argument on an invalid trace or a horizon before the
// last arrival.
SimResult run(const Trace& trace, const DisciplineSpec& spec,
              std::optional<Slot> horizon = std::nullopt);

// Slot-stepping runner for caller-supplied policies. The policy must return
// SingleService; a SharedService decision from a custom policy is rejected
// (fluid sharing is only defined for the built-in ps discipline).
using PolicyFn = std::function<ServiceDecision(const SystemState&)>;
SimResult run_policy(const Trace& trace, const PolicyFn& policy,
                     std::optional<Slot> horizon = std::nullopt);

// True iff all results (from the same trace, no censoring) have identical
// busy/idle boundary sequences. Throws std::invalid_argument when the
// results disagree on the job arrival sequence.
bool work_conservation_audit(const std::vector<SimResult>& results);

} // namespace qsched
