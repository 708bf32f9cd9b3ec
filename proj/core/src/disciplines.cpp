#include "qsched/disciplines.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsched {

namespace {

const ActiveJob* find_job(const SystemState& state, JobId id) {
    for (const auto& j : state.jobs)
        if (j.id == id) return &j;
    return nullptr;
}

Slot primary_key(DisciplineKind kind, const ActiveJob& job, Slot now) {
    switch (kind) {
        case DisciplineKind::Fcfs: return job.arrival;
        case DisciplineKind::Lcfs: return -job.arrival;
        case DisciplineKind::Sjf:  return job.size;
        case DisciplineKind::Srpt: return job.remaining;
        case DisciplineKind::Psjf: return job.size;
        case DisciplineKind::Spst: return now + job.remaining - job.arrival;
        case DisciplineKind::Ps:   break;
    }
    throw std::logic_error("primary_key: ps has no single-job key");
}

} // namespace

Slot predicted_sojourn(const SystemState& state, JobId id) {
    const ActiveJob* job = find_job(state, id);
    if (!job) throw std::invalid_argument("predicted_sojourn: unknown job id");
    return state.now + job->remaining - job->arrival;
}

ServiceDecision select(const SystemState& state, const DisciplineSpec& spec) {
    if (state.jobs.empty()) throw std::invalid_argument("select: no active jobs");

    if (spec.kind == DisciplineKind::Ps) {
        SharedService shared;
        Rational rate(1, static_cast<std::int64_t>(state.jobs.size()));
        shared.rates.reserve(state.jobs.size());
        for (const auto& j : state.jobs) shared.rates.emplace_back(j.id, rate);
        return shared;
    }

    // SJF never preempts: a started job runs to completion.
    if (spec.kind == DisciplineKind::Sjf && state.in_service &&
        find_job(state, *state.in_service)) {
        return SingleService{*state.in_service};
    }

    // SPST keeps the server on the in-service job when a queued job merely
    // ties its predicted sojourn (applies to the default tie-breaker only).
    const bool sticky = spec.kind == DisciplineKind::Spst &&
                        spec.tiebreak == TieBreak::EarliestArrival;

    const ActiveJob* best = nullptr;
    Slot best_key = 0;
    auto beats = [&](const ActiveJob& a) {
        Slot key = primary_key(spec.kind, a, state.now);
        if (!best) { best_key = key; return true; }
        if (key != best_key) return key < best_key;
        if (sticky && state.in_service) {
            bool a_serv = a.id == *state.in_service;
            bool b_serv = best->id == *state.in_service;
            if (a_serv != b_serv) return a_serv;
        }
        if (a.arrival != best->arrival) {
            return spec.tiebreak == TieBreak::EarliestArrival
                       ? a.arrival < best->arrival
                       : a.arrival > best->arrival;
        }
        return a.id < best->id;
    };
    for (const auto& job : state.jobs) {
        if (beats(job)) {
            best = &job;
            best_key = primary_key(spec.kind, job, state.now);
        }
    }
    return SingleService{best->id};
}

DisciplineSpec parse_discipline(const std::string& name) {
    std::string base = name;
    TieBreak tb = TieBreak::EarliestArrival;
    if (base.size() > 2 && base.ends_with("-r")) {
        tb = TieBreak::MostRecent;
        base = base.substr(0, base.size() - 2);
    }
    DisciplineSpec spec;
    spec.tiebreak = tb;
    if (base == "fcfs") spec.kind = DisciplineKind::Fcfs;
    else if (base == "lcfs") spec.kind = DisciplineKind::Lcfs;
    else if (base == "sjf") spec.kind = DisciplineKind::Sjf;
    else if (base == "srpt") spec.kind = DisciplineKind::Srpt;
    else if (base == "psjf") spec.kind = DisciplineKind::Psjf;
    else if (base == "ps") spec.kind = DisciplineKind::Ps;
    else if (base == "spst") spec.kind = DisciplineKind::Spst;
    else throw std::invalid_argument("unknown discipline: " + name);
    if (spec.kind == DisciplineKind::Ps) spec.tiebreak = TieBreak::EarliestArrival;
    return spec;
}

std::string to_string(const DisciplineSpec& spec) {
    std::string base;
    switch (spec.kind) {
        case DisciplineKind::Fcfs: base = "fcfs"; break;
        case DisciplineKind::Lcfs: base = "lcfs"; break;
        case DisciplineKind::Sjf:  base = "sjf"; break;
        case DisciplineKind::Srpt: base = "srpt"; break;
        case DisciplineKind::Psjf: base = "psjf"; break;
        case DisciplineKind::Ps:   return "ps";
        case DisciplineKind::Spst: base = "spst"; break;
    }
    if (spec.tiebreak == TieBreak::MostRecent) base += "-r";
    return base;
}

std::vector<DisciplineSpec> all_disciplines() {
    std::vector<DisciplineSpec> out;
    for (auto kind : {DisciplineKind::Fcfs, DisciplineKind::Lcfs, DisciplineKind::Sjf,
                      DisciplineKind::Srpt, DisciplineKind::Psjf, DisciplineKind::Ps,
                      DisciplineKind::Spst}) {
        out.push_back({kind, TieBreak::EarliestArrival});
    }
    return out;
}

} // namespace qsched
