#pragma once

#include <cstdint>
#include <vector>

#include "qsched/trace.hpp"

namespace qsched {

// Equal-size jobs whose interarrival gaps are j1 = j+1-delta or
// j2 = j+1+delta with equal probability. Mean gap j+1 exceeds the job size,
// so the queue is stable by construction. `analysis_mode` additionally
// requires 2*delta <= j, the regime the busy-period analytics assume.
struct TwoPointModel {
    Slot j;
    Slot delta;
    bool analysis_mode = false;

    TwoPointModel(Slot j, Slot delta, bool analysis_mode = false);

    Slot j1() const { return j + 1 - delta; }
    Slot j2() const { return j + 1 + delta; }
    double arrival_rate() const { return 1.0 / static_cast<double>(j + 1); }
};

// Equal-size jobs; each slot independently hosts one arrival with
// probability 1/(j+1).
struct BernoulliModel {
    Slot j;

    explicit BernoulliModel(Slot j);

    double arrival_probability() const { return 1.0 / static_cast<double>(j + 1); }
    double arrival_rate() const { return arrival_probability(); }
};

// Name of the generator backing the seeded draws, echoed into experiment
// metadata so a run can be replayed bit-exactly.
const char* generator_name();  // "mt19937_64"

// splitmix64 step, used to derive independent per-replication seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t replication);

// First arrival at slot 0, then n_jobs-1 gaps drawn i.i.d. from {j1, j2}.
Trace two_point_trace(const TwoPointModel& model, std::size_t n_jobs, std::uint64_t seed);

// One potential arrival per slot over [0, horizon_slots).
Trace bernoulli_trace(const BernoulliModel& model, Slot horizon_slots, std::uint64_t seed);

// All jobs arrive at slot 0 with the given sizes, indexed in list order.
Trace batch_trace(const std::vector<Slot>& sizes);

} // namespace qsched
