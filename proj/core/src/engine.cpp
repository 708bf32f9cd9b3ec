#include "qsched/engine.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>
#include <stdexcept>

namespace qsched {

namespace {

// Exact rational arithmetic for ps holds denominators to lcm(1..k) for k
// concurrent jobs; 26 keeps every intermediate inside int64 with margin.
constexpr std::size_t kPsMaxConcurrent = 26;

constexpr Slot kNoArrival = std::numeric_limits<Slot>::max();

void validate(const Trace& trace, const std::optional<Slot>& horizon) {
    if (horizon && *horizon < trace.last_arrival())
        throw std::invalid_argument("run: horizon precedes the last arrival");
}

// Shared bookkeeping: job records, arrival admission, busy-period tracking.
struct RunnerCore {
    explicit RunnerCore(const Trace& trace) : arrivals(trace.arrivals()) {
        result.records.reserve(arrivals.size());
        for (const auto& a : arrivals) result.records.push_back({a.time, a.size, Rational(-1)});
    }

    const std::vector<Arrival>& arrivals;
    SimResult result;
    std::size_t cursor = 0;
    bool busy_open = false;
    BusyPeriod current{};

    Slot next_arrival() const {
        return cursor < arrivals.size() ? arrivals[cursor].time : kNoArrival;
    }

    // Admits every arrival at slot t. The caller finalizes departures first,
    // so an arrival meeting an emptied system opens a fresh busy period.
    template <typename AddJob>
    void admit(Slot t, AddJob&& add) {
        while (cursor < arrivals.size() && arrivals[cursor].time == t) {
            if (!busy_open) {
                current = BusyPeriod{t, 0, static_cast<JobId>(cursor), 0};
                busy_open = true;
            }
            ++current.length;
            add(static_cast<JobId>(cursor), arrivals[cursor]);
            ++cursor;
        }
    }

    void depart(JobId id, const Rational& at) { result.records[id].departure = at; }

    void close_busy(Slot end) {
        current.end = end;
        result.busy_periods.push_back(current);
        busy_open = false;
    }

    SimResult finish() {
        result.censored = 0;
        for (const auto& r : result.records)
            if (!r.completed()) ++result.censored;
        return std::move(result);
    }
};

SimResult run_single_service(const Trace& trace, const DisciplineSpec& spec,
                             const std::optional<Slot>& horizon) {
    RunnerCore core(trace);
    std::vector<ActiveJob> active;
    std::optional<JobId> in_service;
    Slot now = 0;

    auto admit_now = [&](Slot t) {
        core.admit(t, [&](JobId id, const Arrival& a) {
            active.push_back({id, a.time, a.size, a.size});
        });
    };

    while (true) {
        if (active.empty()) {
            if (core.cursor >= core.arrivals.size()) break;
            now = core.arrivals[core.cursor].time;
            admit_now(now);
        }
        if (horizon && now >= *horizon) break;

        SystemState state{now, std::span<const ActiveJob>(active), in_service};
        auto decision = select(state, spec);
        JobId sel = std::get<SingleService>(decision).id;
        auto it = std::find_if(active.begin(), active.end(),
                               [&](const ActiveJob& a) { return a.id == sel; });
        assert(it != active.end());

        // Serve until completion, the next arrival, or the horizon. No
        // discipline changes its choice strictly between those events.
        Slot until = now + it->remaining;
        until = std::min(until, core.next_arrival());
        if (horizon) until = std::min(until, *horizon);
        it->remaining -= until - now;
        now = until;
        in_service = sel;

        if (it->remaining == 0) {
            core.depart(sel, Rational(now));
            active.erase(it);
            in_service.reset();
            if (active.empty()) core.close_busy(now);
        }
        admit_now(now);
    }
    return core.finish();
}

// Fluid egalitarian sharing. Tracks the cumulative per-job fair share F
// since the busy period started (dF/dt = 1/k with k jobs active); a job
// arriving at share F0 with size S departs when F reaches F0 + S. Resetting
// F every busy period keeps the exact rationals small.
SimResult run_ps(const Trace& trace, const std::optional<Slot>& horizon) {
    RunnerCore core(trace);
    using Target = std::pair<Rational, JobId>;  // completion share, job
    std::priority_queue<Target, std::vector<Target>, std::greater<>> targets;
    Rational now(0);
    Rational fair(0);

    auto admit_now = [&](Slot t) {
        core.admit(t, [&](JobId id, const Arrival& a) {
            targets.emplace(fair + Rational(a.size), id);
        });
        if (targets.size() > kPsMaxConcurrent)
            throw std::runtime_error(
                "ps: exact arithmetic supports at most " +
                std::to_string(kPsMaxConcurrent) + " concurrent jobs");
    };

    while (true) {
        if (targets.empty()) {
            if (core.cursor >= core.arrivals.size()) break;
            Slot t = core.arrivals[core.cursor].time;
            now = Rational(t);
            fair = Rational(0);
            admit_now(t);
        }
        if (horizon && now >= Rational(*horizon)) break;

        auto k = static_cast<std::int64_t>(targets.size());
        Rational target = targets.top().first;
        Rational completion = now + (target - fair) * k;

        Slot arrival = core.next_arrival();
        Rational cap = Rational(arrival == kNoArrival
                                    ? std::numeric_limits<Slot>::max()
                                    : arrival);
        if (horizon) cap = std::min(cap, Rational(*horizon));

        if (completion <= cap) {
            now = completion;
            fair = target;
            while (!targets.empty() && targets.top().first == target) {
                core.depart(targets.top().second, now);
                targets.pop();
            }
            if (targets.empty()) {
                assert(is_integral(now));
                core.close_busy(boost::rational_cast<Slot>(now));
            }
        } else {
            fair += (cap - now) / k;
            now = cap;
        }
        if (is_integral(now)) admit_now(boost::rational_cast<Slot>(now));
    }
    return core.finish();
}

} // namespace

SimResult run(const Trace& trace, const DisciplineSpec& spec, std::optional<Slot> horizon) {
    validate(trace, horizon);
    if (spec.kind == DisciplineKind::Ps) return run_ps(trace, horizon);
    return run_single_service(trace, spec, horizon);
}

SimResult run_policy(const Trace& trace, const PolicyFn& policy, std::optional<Slot> horizon) {
    validate(trace, horizon);
    RunnerCore core(trace);
    std::vector<ActiveJob> active;
    std::optional<JobId> in_service;
    Slot now = 0;

    auto admit_now = [&](Slot t) {
        core.admit(t, [&](JobId id, const Arrival& a) {
            active.push_back({id, a.time, a.size, a.size});
        });
    };

    while (true) {
        if (active.empty()) {
            if (core.cursor >= core.arrivals.size()) break;
            now = core.arrivals[core.cursor].time;
            admit_now(now);
        }
        if (horizon && now >= *horizon) break;

        SystemState state{now, std::span<const ActiveJob>(active), in_service};
        auto decision = policy(state);
        if (std::holds_alternative<SharedService>(decision))
            throw std::invalid_argument(
                "run_policy: shared service decision from a single-service policy");
        JobId sel = std::get<SingleService>(decision).id;
        auto it = std::find_if(active.begin(), active.end(),
                               [&](const ActiveJob& a) { return a.id == sel; });
        if (it == active.end())
            throw std::invalid_argument("run_policy: decision names an inactive job");

        it->remaining -= 1;
        now += 1;
        in_service = sel;
        if (it->remaining == 0) {
            core.depart(sel, Rational(now));
            active.erase(it);
            in_service.reset();
            if (active.empty()) core.close_busy(now);
        }
        admit_now(now);
    }
    return core.finish();
}

bool work_conservation_audit(const std::vector<SimResult>& results) {
    if (results.size() < 2) return true;
    const auto& first = results.front();
    for (const auto& r : results) {
        if (r.records.size() != first.records.size())
            throw std::invalid_argument("work_conservation_audit: differing traces");
        for (std::size_t i = 0; i < r.records.size(); ++i) {
            if (r.records[i].arrival != first.records[i].arrival ||
                r.records[i].size != first.records[i].size)
                throw std::invalid_argument("work_conservation_audit: differing traces");
        }
        if (r.censored != 0)
            throw std::invalid_argument("work_conservation_audit: censored jobs present");
    }
    for (const auto& r : results) {
        if (r.busy_periods.size() != first.busy_periods.size()) return false;
        for (std::size_t i = 0; i < r.busy_periods.size(); ++i) {
            if (r.busy_periods[i].start != first.busy_periods[i].start ||
                r.busy_periods[i].end != first.busy_periods[i].end)
                return false;
        }
    }
    return true;
}

std::size_t SimResult::arrivals_by(Slot t) const {
    std::size_t n = 0;
    for (const auto& r : records)
        if (r.arrival <= t) ++n;
    return n;
}

std::size_t SimResult::completions_by(Slot t) const {
    std::size_t n = 0;
    Rational limit(t);
    for (const auto& r : records)
        if (r.completed() && r.departure <= limit) ++n;
    return n;
}

std::vector<Slot> SimResult::internal_gaps(const BusyPeriod& bp) const {
    std::vector<Slot> gaps;
    gaps.reserve(bp.length > 0 ? bp.length - 1 : 0);
    for (std::uint32_t i = 1; i < bp.length; ++i) {
        const auto& prev = records[bp.first_job + i - 1];
        const auto& cur = records[bp.first_job + i];
        gaps.push_back(cur.arrival - prev.arrival);
    }
    return gaps;
}

std::vector<JobId> SimResult::job_ids(const BusyPeriod& bp) const {
    std::vector<JobId> ids(bp.length);
    for (std::uint32_t i = 0; i < bp.length; ++i) ids[i] = bp.first_job + i;
    return ids;
}

} // namespace qsched
