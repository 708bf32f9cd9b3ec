#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qsched/time.hpp"

namespace qsched {

enum class DisciplineKind { Fcfs, Lcfs, Sjf, Srpt, Psjf, Ps, Spst };

// Decision ties are broken by arrival time first (earliest wins by default,
// most recent under the "-r" variants), then by ascending job index.
enum class TieBreak { EarliestArrival, MostRecent };

struct DisciplineSpec {
    DisciplineKind kind = DisciplineKind::Fcfs;
    TieBreak tiebreak = TieBreak::EarliestArrival;
    friend bool operator==(const DisciplineSpec&, const DisciplineSpec&) = default;
};

// Stable names for CLI flags and CSV columns: fcfs, lcfs, sjf, srpt, psjf,
// ps, spst, plus "-r" suffixed variants (ps ignores the tie-breaker and
// always formats back as "ps").
DisciplineSpec parse_discipline(const std::string& name);
std::string to_string(const DisciplineSpec& spec);

// The seven disciplines with their default tie-breaker, in a stable order.
std::vector<DisciplineSpec> all_disciplines();

using JobId = std::uint32_t;

struct ActiveJob {
    JobId id = 0;
    Slot arrival = 0;
    Slot size = 0;
    Slot remaining = 0;  // 0 < remaining <= size
};

// Snapshot handed to a decision function at the top of a slot. `jobs` holds
// every active job (arrival <= now, remaining > 0); `in_service` names the
// job served in the previous slot when it is still active, which SJF needs
// for non-preemption and SPST uses to keep the server on a tied job.
struct SystemState {
    Slot now = 0;
    std::span<const ActiveJob> jobs;
    std::optional<JobId> in_service;
};

struct SingleService {
    JobId id;
};
struct SharedService {
    // Positive rates summing to exactly 1 across all active jobs.
    std::vector<std::pair<JobId, Rational>> rates;
};
using ServiceDecision = std::variant<SingleService, SharedService>;

// Sojourn the job would reach if served from `state.now` to completion
// without preemption: now + remaining - arrival.
Slot predicted_sojourn(const SystemState& state, JobId id);

// Pure decision function; throws std::invalid_argument on an empty state.
ServiceDecision select(const SystemState& state, const DisciplineSpec& spec);

} // namespace qsched
