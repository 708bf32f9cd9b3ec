#pragma once

// Slot-by-slot oracle for the production engine: every decision is
// re-derived at every integer epoch straight from the discipline
// definitions, with no code shared with the event-driven runner. Only used
// by tests; deliberately naive.

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "qsched/engine.hpp"
#include "qsched/trace.hpp"

namespace qsched::testing {

namespace detail {

struct RefJob {
    std::size_t idx;
    Slot arrival;
    Slot size;
    Rational remaining;
};

inline std::size_t pick(const std::vector<RefJob>& active, Slot now,
                        const DisciplineSpec& spec,
                        std::optional<std::size_t> last_served) {
    auto is_last = [&](const RefJob& a) {
        return last_served && a.idx == *last_served;
    };
    if (spec.kind == DisciplineKind::Sjf && last_served) {
        for (std::size_t i = 0; i < active.size(); ++i)
            if (active[i].idx == *last_served) return i;
    }

    auto key = [&](const RefJob& a) -> Rational {
        switch (spec.kind) {
            case DisciplineKind::Fcfs: return Rational(a.arrival);
            case DisciplineKind::Lcfs: return Rational(-a.arrival);
            case DisciplineKind::Sjf: return Rational(a.size);
            case DisciplineKind::Srpt: return a.remaining;
            case DisciplineKind::Psjf: return Rational(a.size);
            case DisciplineKind::Spst: return Rational(now) + a.remaining - Rational(a.arrival);
            default: return Rational(0);
        }
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
        Rational ka = key(active[i]);
        Rational kb = key(active[best]);
        if (ka < kb) {
            best = i;
        } else if (ka == kb) {
            bool sticky = spec.kind == DisciplineKind::Spst &&
                          spec.tiebreak == TieBreak::EarliestArrival;
            if (sticky && is_last(active[i]) != is_last(active[best])) {
                if (is_last(active[i])) best = i;
            } else if (active[i].arrival != active[best].arrival) {
                bool recent = spec.tiebreak == TieBreak::MostRecent;
                if (recent ? active[i].arrival > active[best].arrival
                           : active[i].arrival < active[best].arrival)
                    best = i;
            } else if (active[i].idx < active[best].idx) {
                best = i;
            }
        }
    }
    return best;
}

} // namespace detail

inline SimResult reference_run(const Trace& trace, const DisciplineSpec& spec,
                               std::optional<Slot> horizon = std::nullopt) {
    using detail::RefJob;
    SimResult result;
    for (const auto& a : trace.arrivals())
        result.records.push_back({a.time, a.size, Rational(-1)});

    std::vector<RefJob> active;
    std::optional<std::size_t> last_served;
    std::size_t cursor = 0;
    Slot now = 0;
    bool busy = false;
    BusyPeriod period{};

    auto admit = [&](Slot t) {
        while (cursor < trace.size() && trace[cursor].time == t) {
            if (!busy) {
                period = BusyPeriod{t, 0, static_cast<JobId>(cursor), 0};
                busy = true;
            }
            ++period.length;
            active.push_back({cursor, t, trace[cursor].size, Rational(trace[cursor].size)});
            ++cursor;
        }
    };

    while (true) {
        if (active.empty()) {
            if (cursor >= trace.size()) break;
            now = trace[cursor].time;
            admit(now);
        }
        if (horizon && now >= *horizon) break;

        if (spec.kind == DisciplineKind::Ps) {
            Rational left(1);  // of this slot
            Rational elapsed(0);
            while (!active.empty() && left > Rational(0)) {
                Rational rmin = active.front().remaining;
                for (const auto& a : active) rmin = std::min(rmin, a.remaining);
                auto k = static_cast<std::int64_t>(active.size());
                Rational cost = rmin * k;
                Rational spent = std::min(cost, left);
                for (auto& a : active) a.remaining -= spent / k;
                elapsed += spent;
                left -= spent;
                for (std::size_t i = active.size(); i-- > 0;) {
                    if (active[i].remaining == Rational(0)) {
                        result.records[active[i].idx].departure = Rational(now) + elapsed;
                        active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
                    }
                }
            }
        } else {
            std::size_t sel = detail::pick(active, now, spec, last_served);
            active[sel].remaining -= 1;
            last_served = active[sel].idx;
            if (active[sel].remaining == Rational(0)) {
                result.records[active[sel].idx].departure = Rational(now + 1);
                active.erase(active.begin() + static_cast<std::ptrdiff_t>(sel));
                last_served.reset();
            }
        }
        now += 1;
        if (active.empty() && busy) {
            // The period's work is integral and served at unit total rate,
            // so the last departure lands exactly on the slot boundary.
            period.end = now;
            result.busy_periods.push_back(period);
            busy = false;
        }
        admit(now);
    }

    result.censored = 0;
    for (const auto& r : result.records)
        if (!r.completed()) ++result.censored;
    return result;
}

// Small random traces for property tests: arbitrary integer sizes.
inline Trace random_trace(std::mt19937_64& rng, std::size_t max_jobs = 12,
                          Slot max_gap = 6, Slot max_size = 6) {
    std::size_t n = 1 + rng() % max_jobs;
    std::vector<Arrival> arrivals;
    Slot t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) t += static_cast<Slot>(rng() % static_cast<std::uint64_t>(max_gap + 1));
        arrivals.push_back({t, 1 + static_cast<Slot>(rng() % static_cast<std::uint64_t>(max_size))});
    }
    return Trace(std::move(arrivals));
}

} // namespace qsched::testing
